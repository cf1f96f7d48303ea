#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treefold/resolver.hpp"

namespace treefold {

// One breadth-first pass over the dot-free directory edges from root,
// visiting each inode at most once. Several checks share this scan.
struct ReachabilityScan {
    // index -> first dot-free path that reached it (BFS order)
    std::unordered_map<Index, PathName> first_path;
    // first inode reached by two distinct dot-free paths, with both paths
    struct Alias {
        Index index;
        PathName first;
        PathName second;
    };
    std::optional<Alias> first_alias;
    std::size_t max_depth = 0;
};

ReachabilityScan scan_reachable(const FsImage& fs);

struct OrphanCheck {
    std::vector<Index> orphans; // defined inodes with no path from root
    bool passed() const { return orphans.empty(); }
};

struct DanglingCheck {
    // directory index and entry name whose target is undefined or out of range
    std::vector<std::pair<Index, std::string>> dangling;
    bool passed() const { return dangling.empty(); }
};

struct DotLawCheck {
    struct Violation {
        PathName dir_path;  // dot-free path of the directory the law fails at
        std::string law;    // "self", "parent", or "root-parent"
        std::optional<Index> expected;
        std::optional<Index> actual; // nullopt when the entry is missing
    };
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
};

struct AliasCheck {
    std::optional<ReachabilityScan::Alias> witness;
    bool passed() const { return !witness.has_value(); }
};

// The directory-to-directory links relation, summarized per target.
// links(j, i) is an indicator: a parent directory counts once toward i's
// in-degree no matter how many of its dot-free entries reach i.
struct LinksMatrixSummary {
    std::map<Index, std::size_t> in_degree;                 // directory targets only
    std::map<Index, std::vector<Index>> parents;            // the directories behind in_degree
    std::vector<Index> root_in_degree_sources;              // non-root directories linking root
    std::size_t total_links = 0;                            // sum over the matrix
};

LinksMatrixSummary compute_links_summary(const FsImage& fs);

struct LinkConstraintCheck {
    struct Violation {
        Index target;
        std::vector<Index> parents;
    };
    std::vector<Violation> multi_parent;   // directories with in-degree >= 2
    std::vector<Index> root_link_sources;  // non-root directories linking root
    LinksMatrixSummary summary;
    bool passed() const { return multi_parent.empty() && root_link_sources.empty(); }
};

struct PrefixCheck {
    std::optional<PathName> witness; // defined path whose parent prefix is not a directory
    bool passed() const { return !witness.has_value(); }
};

struct SoftlinkLoopCheck {
    // soft links whose stored path, followed through further links, exhausts
    // the budget; suspected loops, reported but never a hard failure
    std::vector<std::pair<Index, PathName>> suspected_loops;
    bool clean() const { return suspected_loops.empty(); }
};

// Every defined inode must be reachable from root via dot-free directory
// entries. Soft-link targets are stored paths, not indexes, so they are not
// reachability edges.
OrphanCheck check_no_orphans(const FsImage& fs);

// Every entry of every defined directory must name an in-range, defined inode.
DanglingCheck check_no_dangling(const FsImage& fs);

// For every reachable directory: its "." names itself, its ".." names the
// parent it was reached from (root's ".." names root). Checked per edge, so
// a directory with two parents cannot satisfy both.
DotLawCheck check_dot_laws(const FsImage& fs);

// No inode may be reached by two distinct dot-free paths.
AliasCheck check_alias_free(const FsImage& fs);

// At most one directory links to any directory, and none links to root.
LinkConstraintCheck check_link_constraint(const FsImage& fs);

using LookupFn = std::function<LookupOutcome(const FsImage&, const PathName&)>;

// Every enumerated defined path's parent prefix must resolve to a directory.
// The resolver under test is injectable so the checker itself can be
// exercised against a broken one.
PrefixCheck check_prefix_property(const FsImage& fs);
PrefixCheck check_prefix_property(const FsImage& fs, const LookupFn& lookup);

SoftlinkLoopCheck check_softlink_loops(const FsImage& fs,
                                       std::size_t link_budget = kDefaultLinkBudget);

struct CheckReport {
    struct Line {
        std::string name;
        bool passed;
        std::vector<std::string> witnesses;
    };
    std::vector<Line> checks;                         // hard checks, fixed order
    std::vector<std::string> softlink_warnings;       // suspected loops
    std::map<std::string, std::uint64_t> stats;

    bool clean() const;
};

// Run every check over the image and aggregate. Soft-link loops are
// warnings; all other checks gate clean().
CheckReport fsck(const FsImage& fs, std::size_t link_budget = kDefaultLinkBudget);

// Line-oriented serialization: "CHECK <name> PASS|FAIL <witness...>" per
// check, "WARN softlink_loops ..." per suspected loop, then "STATS k=v".
std::string render_report(const CheckReport& report);

} // namespace treefold
