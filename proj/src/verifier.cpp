#include "treefold/verifier.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace treefold {

namespace {

bool is_dot(const std::string& name) {
    return name == "." || name == "..";
}

bool defined_at(const FsImage& fs, Index i) {
    return i < fs.geometry().inode_count && inode_at(fs, i).has_value();
}

std::optional<DirectoryMap> directory_at(const FsImage& fs, Index i) {
    if (i >= fs.geometry().inode_count)
        return std::nullopt;
    auto contents = alpha(fs, i);
    if (!contents || !contents->is_directory())
        return std::nullopt;
    return contents->directory();
}

} // namespace

ReachabilityScan scan_reachable(const FsImage& fs) {
    const Geometry& g = fs.geometry();
    ReachabilityScan scan;

    struct Item {
        Index index;
        PathName path;
        std::size_t depth;
    };
    std::deque<Item> queue;
    scan.first_path.emplace(g.root_index, PathName{});
    queue.push_back({g.root_index, PathName{}, 0});

    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        scan.max_depth = std::max(scan.max_depth, item.depth);
        // Pigeonhole: visit-once BFS can never go deeper than the inode count.
        assert(item.depth <= g.inode_count);

        auto dir = directory_at(fs, item.index);
        if (!dir)
            continue;
        for (const auto& [name, target] : *dir) {
            if (is_dot(name))
                continue;
            if (!defined_at(fs, target))
                continue; // dangling entries belong to check_no_dangling
            PathName path = item.path.child(name);
            auto [it, inserted] = scan.first_path.emplace(target, path);
            if (!inserted) {
                if (!scan.first_alias)
                    scan.first_alias = ReachabilityScan::Alias{target, it->second, path};
                continue;
            }
            queue.push_back({target, std::move(path), item.depth + 1});
        }
    }
    return scan;
}

OrphanCheck check_no_orphans(const FsImage& fs) {
    ReachabilityScan scan = scan_reachable(fs);
    OrphanCheck check;
    for (Index i = 0; i < fs.geometry().inode_count; ++i) {
        if (inode_at(fs, i) && !scan.first_path.contains(i))
            check.orphans.push_back(i);
    }
    return check;
}

DanglingCheck check_no_dangling(const FsImage& fs) {
    DanglingCheck check;
    for (Index i = 0; i < fs.geometry().inode_count; ++i) {
        auto dir = directory_at(fs, i);
        if (!dir)
            continue;
        for (const auto& [name, target] : *dir) {
            if (!defined_at(fs, target))
                check.dangling.emplace_back(i, name);
        }
    }
    return check;
}

DotLawCheck check_dot_laws(const FsImage& fs) {
    const Geometry& g = fs.geometry();
    ReachabilityScan scan = scan_reachable(fs);
    DotLawCheck check;

    auto entry_of = [&](const DirectoryMap& dir, const char* name) -> std::optional<Index> {
        auto it = dir.find(name);
        if (it == dir.end())
            return std::nullopt;
        return it->second;
    };

    for (const auto& [index, path] : scan.first_path) {
        auto dir = directory_at(fs, index);
        if (!dir)
            continue;

        // F(p)(".") must name the directory itself.
        auto self = entry_of(*dir, ".");
        if (self != std::optional<Index>(index))
            check.violations.push_back({path, "self", index, self});

        if (index == g.root_index) {
            // F(root)("..") = root.
            auto up = entry_of(*dir, "..");
            if (up != std::optional<Index>(g.root_index))
                check.violations.push_back({path, "root-parent", g.root_index, up});
        }

        // For every directory-valued child edge, the child's ".." must name
        // this directory. A child with two parents cannot satisfy both edges.
        for (const auto& [name, target] : *dir) {
            if (is_dot(name))
                continue;
            auto child = directory_at(fs, target);
            if (!child)
                continue;
            auto up = entry_of(*child, "..");
            if (up != std::optional<Index>(index))
                check.violations.push_back({path.child(name), "parent", index, up});
        }
    }

    std::sort(check.violations.begin(), check.violations.end(),
              [](const auto& a, const auto& b) { return a.dir_path < b.dir_path; });
    return check;
}

AliasCheck check_alias_free(const FsImage& fs) {
    return {scan_reachable(fs).first_alias};
}

LinksMatrixSummary compute_links_summary(const FsImage& fs) {
    const Geometry& g = fs.geometry();
    LinksMatrixSummary summary;
    for (Index j = 0; j < g.inode_count; ++j) {
        auto dir = directory_at(fs, j);
        if (!dir)
            continue;
        // links(j, i) is 0 or 1: collect j's distinct directory targets.
        std::vector<Index> targets;
        for (const auto& [name, target] : *dir) {
            if (is_dot(name))
                continue;
            if (directory_at(fs, target))
                targets.push_back(target);
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (Index i : targets) {
            summary.in_degree[i] += 1;
            summary.parents[i].push_back(j);
            summary.total_links += 1;
            if (i == g.root_index && j != g.root_index)
                summary.root_in_degree_sources.push_back(j);
        }
    }
    return summary;
}

LinkConstraintCheck check_link_constraint(const FsImage& fs) {
    LinkConstraintCheck check;
    check.summary = compute_links_summary(fs);
    for (const auto& [target, degree] : check.summary.in_degree) {
        if (degree >= 2)
            check.multi_parent.push_back({target, check.summary.parents.at(target)});
    }
    check.root_link_sources = check.summary.root_in_degree_sources;
    return check;
}

PrefixCheck check_prefix_property(const FsImage& fs) {
    return check_prefix_property(
        fs, [](const FsImage& image, const PathName& path) { return f_lookup(image, path); });
}

PrefixCheck check_prefix_property(const FsImage& fs, const LookupFn& lookup) {
    ReachabilityScan scan = scan_reachable(fs);
    std::vector<PathName> paths;
    paths.reserve(scan.first_path.size());
    for (const auto& [index, path] : scan.first_path)
        paths.push_back(path);
    std::sort(paths.begin(), paths.end());

    for (const PathName& path : paths) {
        if (path.empty())
            continue;
        LookupOutcome parent = lookup(fs, path.parent());
        if (!parent.found() || !parent.contents->is_directory())
            return {path};
    }
    return {};
}

SoftlinkLoopCheck check_softlink_loops(const FsImage& fs, std::size_t link_budget) {
    const Geometry& g = fs.geometry();
    SoftlinkLoopCheck check;
    for (Index i = 0; i < g.inode_count; ++i) {
        auto rec = inode_at(fs, i);
        if (!rec || rec->ftype != FileType::softlink)
            continue;
        PathName stored = decode_softlink(file_contents(fs, *rec));

        // Follow the stored path, continuing through any link it lands on,
        // within the budget. Running out marks a suspected loop.
        std::size_t budget = link_budget;
        PathName current = stored;
        bool exhausted = false;
        for (;;) {
            ResolveOutcome out = namei_links(fs, g.root_index, current, budget);
            if (out.status == ResolveStatus::link_budget_exhausted) {
                exhausted = true;
                break;
            }
            budget -= out.links_followed;
            if (out.status != ResolveStatus::found)
                break;
            auto target = alpha(fs, out.index);
            if (!target || !target->is_softlink())
                break;
            if (budget == 0) {
                exhausted = true;
                break;
            }
            --budget;
            current = target->softlink();
        }
        if (exhausted)
            check.suspected_loops.emplace_back(i, stored);
    }
    return check;
}

bool CheckReport::clean() const {
    return std::all_of(checks.begin(), checks.end(), [](const Line& line) { return line.passed; });
}

namespace {

std::string index_list(const std::vector<Index>& indexes) {
    std::string out;
    for (std::size_t k = 0; k < indexes.size(); ++k) {
        if (k > 0)
            out += ',';
        out += std::to_string(indexes[k]);
    }
    return out;
}

} // namespace

CheckReport fsck(const FsImage& fs, std::size_t link_budget) {
    const Geometry& g = fs.geometry();
    CheckReport report;

    auto add = [&](std::string name, bool passed, std::vector<std::string> witnesses) {
        report.checks.push_back({std::move(name), passed, std::move(witnesses)});
    };

    OrphanCheck orphans = check_no_orphans(fs);
    {
        std::vector<std::string> w;
        for (Index i : orphans.orphans)
            w.push_back("index=" + std::to_string(i));
        add("no_orphans", orphans.passed(), std::move(w));
    }

    DanglingCheck dangling = check_no_dangling(fs);
    {
        std::vector<std::string> w;
        for (const auto& [dir, name] : dangling.dangling)
            w.push_back("dir=" + std::to_string(dir) + " name=" + name);
        add("no_dangling", dangling.passed(), std::move(w));
    }

    DotLawCheck dots = check_dot_laws(fs);
    {
        std::vector<std::string> w;
        for (const auto& v : dots.violations) {
            std::string line = "law=" + v.law + " path=" + format_path(v.dir_path);
            if (v.expected)
                line += " expected=" + std::to_string(*v.expected);
            line += v.actual ? " actual=" + std::to_string(*v.actual) : " actual=missing";
            w.push_back(std::move(line));
        }
        add("dot_laws", dots.passed(), std::move(w));
    }

    AliasCheck alias = check_alias_free(fs);
    {
        std::vector<std::string> w;
        if (alias.witness)
            w.push_back("index=" + std::to_string(alias.witness->index) +
                        " path1=" + format_path(alias.witness->first) +
                        " path2=" + format_path(alias.witness->second));
        add("alias_free", alias.passed(), std::move(w));
    }

    LinkConstraintCheck links = check_link_constraint(fs);
    {
        std::vector<std::string> w;
        for (const auto& v : links.multi_parent)
            w.push_back("dir=" + std::to_string(v.target) + " parents=" + index_list(v.parents));
        for (Index j : links.root_link_sources)
            w.push_back("root-linked-from=" + std::to_string(j));
        add("link_constraint", links.passed(), std::move(w));
    }

    PrefixCheck prefix = check_prefix_property(fs);
    {
        std::vector<std::string> w;
        if (prefix.witness)
            w.push_back("path=" + format_path(*prefix.witness));
        add("prefix_property", prefix.passed(), std::move(w));
    }

    SoftlinkLoopCheck loops = check_softlink_loops(fs, link_budget);
    for (const auto& [index, path] : loops.suspected_loops)
        report.softlink_warnings.push_back("index=" + std::to_string(index) +
                                           " target=" + format_path(path));

    // Census for the STATS lines.
    std::uint64_t ordinary = 0, directories = 0, softlinks = 0, undefined = 0;
    for (Index i = 0; i < g.inode_count; ++i) {
        auto rec = inode_at(fs, i);
        if (!rec) {
            ++undefined;
            continue;
        }
        switch (rec->ftype) {
        case FileType::ordinary: ++ordinary; break;
        case FileType::directory: ++directories; break;
        case FileType::softlink: ++softlinks; break;
        }
    }
    ReachabilityScan scan = scan_reachable(fs);
    report.stats["block_count"] = g.block_count;
    report.stats["inode_count"] = g.inode_count;
    report.stats["ordinary"] = ordinary;
    report.stats["directories"] = directories;
    report.stats["softlinks"] = softlinks;
    report.stats["undefined"] = undefined;
    report.stats["reachable"] = scan.first_path.size();
    report.stats["max_depth"] = scan.max_depth;
    report.stats["dir_links"] = links.summary.total_links;

    return report;
}

std::string render_report(const CheckReport& report) {
    std::ostringstream out;
    for (const auto& line : report.checks) {
        out << "CHECK " << line.name << ' ' << (line.passed ? "PASS" : "FAIL");
        for (const auto& witness : line.witnesses)
            out << ' ' << witness;
        out << '\n';
    }
    for (const auto& warning : report.softlink_warnings)
        out << "WARN softlink_loops " << warning << '\n';
    for (const auto& [key, value] : report.stats)
        out << "STATS " << key << '=' << value << '\n';
    return out.str();
}

} // namespace treefold
