#pragma once

#include <set>

#include "treefold/alpha.hpp"

namespace treefold {

// Ceiling on soft links followed per resolution, the usual ELOOP-style bound.
inline constexpr std::size_t kDefaultLinkBudget = 40;

enum class ResolveStatus {
    found,
    not_found,
    link_budget_exhausted,
};

struct ResolveOutcome {
    ResolveStatus status = ResolveStatus::not_found;
    Index index = 0; // valid only when status == found
    std::size_t steps = 0;
    std::size_t links_followed = 0;

    bool found() const { return status == ResolveStatus::found; }
};

// Recursive descent, one leftmost element per step. Soft links are plain
// leaves here: a trailing link resolves to its own index, a mid-path link is
// not a directory and yields not_found. For a found path of n elements the
// step count is exactly n + 1.
ResolveOutcome namei(const FsImage& fs, Index start, const PathName& path);

// Like namei, but a soft link met with path remaining splices its stored
// path in front of the remainder and restarts from root, spending one unit
// of budget. A link met with no budget left yields link_budget_exhausted.
// The base case is unconditional: resolving the null path at a link returns
// the link's own index.
ResolveOutcome namei_links(const FsImage& fs, Index start, const PathName& path,
                           std::size_t link_budget);

// beta(p) = namei from the root index, soft links followed.
ResolveOutcome beta(const FsImage& fs, const PathName& path,
                    std::size_t link_budget = kDefaultLinkBudget);

enum class LookupStatus {
    found,
    undefined,
    link_budget_exhausted,
};

struct LookupOutcome {
    LookupStatus status = LookupStatus::undefined;
    std::optional<Contents> contents; // set only when status == found

    bool found() const { return status == LookupStatus::found; }
};

// F(p) = alpha(beta(p)). Undefined covers not_found and tag-0 targets;
// budget exhaustion passes through as its own status.
LookupOutcome f_lookup(const FsImage& fs, const PathName& path,
                       std::size_t link_budget = kDefaultLinkBudget);

enum class ListMode {
    dirs_only, // only entries whose target is a directory
    all,       // every entry with a defined target
};

// Names under p excluding "." and "..", empty when p is not a directory.
std::set<std::string> list_entries(const FsImage& fs, const PathName& path, ListMode mode,
                                   std::size_t link_budget = kDefaultLinkBudget);

struct FindResult {
    std::set<PathName> paths;
    // A resolution under this walk ran out of link budget; that subtree is
    // pruned and the set is partial.
    bool link_budget_exhausted = false;
    // Recursion hit the inode-count depth bound (only possible when the
    // image has aliases); deeper paths are pruned.
    bool depth_capped = false;
};

// All paths rooted at p: empty if F(p) is undefined, {p} for files and
// empty directories, otherwise p plus the recursion over list_entries.
FindResult find_paths(const FsImage& fs, const PathName& path, ListMode mode,
                      std::size_t link_budget = kDefaultLinkBudget);

} // namespace treefold
