#include "treefold/resolver.hpp"

namespace treefold {

namespace {

ResolveOutcome found(Index i, std::size_t steps, std::size_t links) {
    return {ResolveStatus::found, i, steps, links};
}

ResolveOutcome miss(ResolveStatus status, std::size_t steps, std::size_t links) {
    return {status, 0, steps, links};
}

// Shared walk. When follow_links is false the budget is ignored and links
// are leaves, which is plain namei.
ResolveOutcome walk(const FsImage& fs, Index start, const PathName& path, bool follow_links,
                    std::size_t budget) {
    const Geometry& g = fs.geometry();
    if (start >= g.inode_count)
        raise(Errc::index_out_of_range, "start index " + std::to_string(start));

    Index cur = start;
    std::vector<std::string> pending = path.elements;
    std::size_t pos = 0;
    std::size_t steps = 1; // the initial call counts
    std::size_t links = 0;

    while (pos < pending.size()) {
        auto contents = alpha(fs, cur);
        if (follow_links && contents && contents->is_softlink()) {
            if (budget == 0)
                return miss(ResolveStatus::link_budget_exhausted, steps, links);
            --budget;
            ++links;
            // Restart from root on Concatenate(link path, remaining path).
            std::vector<std::string> spliced = contents->softlink().elements;
            spliced.insert(spliced.end(), pending.begin() + std::ptrdiff_t(pos), pending.end());
            pending = std::move(spliced);
            pos = 0;
            cur = g.root_index;
            ++steps;
            continue;
        }
        if (!contents || !contents->is_directory())
            return miss(ResolveStatus::not_found, steps, links);
        auto it = contents->directory().find(pending[pos]);
        if (it == contents->directory().end())
            return miss(ResolveStatus::not_found, steps, links);
        cur = it->second;
        ++pos;
        ++steps;
    }
    return found(cur, steps, links);
}

} // namespace

ResolveOutcome namei(const FsImage& fs, Index start, const PathName& path) {
    return walk(fs, start, path, /*follow_links=*/false, 0);
}

ResolveOutcome namei_links(const FsImage& fs, Index start, const PathName& path,
                           std::size_t link_budget) {
    return walk(fs, start, path, /*follow_links=*/true, link_budget);
}

ResolveOutcome beta(const FsImage& fs, const PathName& path, std::size_t link_budget) {
    return namei_links(fs, fs.geometry().root_index, path, link_budget);
}

LookupOutcome f_lookup(const FsImage& fs, const PathName& path, std::size_t link_budget) {
    ResolveOutcome r = beta(fs, path, link_budget);
    if (r.status == ResolveStatus::link_budget_exhausted)
        return {LookupStatus::link_budget_exhausted, std::nullopt};
    if (r.status == ResolveStatus::not_found)
        return {LookupStatus::undefined, std::nullopt};
    // A dangling entry can name an out-of-range index; alpha is undefined there.
    if (r.index >= fs.geometry().inode_count)
        return {LookupStatus::undefined, std::nullopt};
    auto contents = alpha(fs, r.index);
    if (!contents)
        return {LookupStatus::undefined, std::nullopt};
    return {LookupStatus::found, std::move(contents)};
}

namespace {

bool entry_counts(const FsImage& fs, Index target, ListMode mode) {
    if (target >= fs.geometry().inode_count)
        return false;
    auto rec = inode_at(fs, target);
    if (!rec)
        return false;
    return mode == ListMode::all || rec->ftype == FileType::directory;
}

std::set<std::string> entries_of(const FsImage& fs, const DirectoryMap& dir, ListMode mode) {
    std::set<std::string> names;
    for (const auto& [name, target] : dir) {
        if (name == "." || name == "..")
            continue;
        if (entry_counts(fs, target, mode))
            names.insert(name);
    }
    return names;
}

} // namespace

std::set<std::string> list_entries(const FsImage& fs, const PathName& path, ListMode mode,
                                   std::size_t link_budget) {
    LookupOutcome out = f_lookup(fs, path, link_budget);
    if (!out.found() || !out.contents->is_directory())
        return {};
    return entries_of(fs, out.contents->directory(), mode);
}

namespace {

void find_into(const FsImage& fs, const PathName& path, ListMode mode, std::size_t budget,
               std::size_t depth_left, FindResult& result) {
    LookupOutcome out = f_lookup(fs, path, budget);
    if (out.status == LookupStatus::link_budget_exhausted) {
        result.link_budget_exhausted = true;
        return;
    }
    if (out.status == LookupStatus::undefined)
        return;
    result.paths.insert(path);
    if (!out.contents->is_directory())
        return;
    if (depth_left == 0) {
        // Longer paths would have to revisit an inode; only aliased images
        // can get here.
        result.depth_capped = true;
        return;
    }
    for (const auto& name : entries_of(fs, out.contents->directory(), mode))
        find_into(fs, path.child(name), mode, budget, depth_left - 1, result);
}

} // namespace

FindResult find_paths(const FsImage& fs, const PathName& path, ListMode mode,
                      std::size_t link_budget) {
    FindResult result;
    std::size_t bound = std::size_t(fs.geometry().inode_count);
    find_into(fs, path, mode, link_budget, bound, result);
    return result;
}

} // namespace treefold
