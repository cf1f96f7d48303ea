#pragma once

#include <deque>
#include <unordered_map>

#include "treefold/manifest.hpp"
#include "treefold/resolver.hpp"

namespace treefold {

// Work done by a lookup strategy. Counters only ever grow within a run.
struct CostCounters {
    std::uint64_t path_comparisons = 0;   // whole-path candidates examined
    std::uint64_t string_comparisons = 0; // single name-to-name comparisons
    std::uint64_t directory_fetches = 0;  // directory maps loaded and decoded
    std::uint64_t block_reads = 0;        // blocks touched at the disk layer

    CostCounters& operator+=(const CostCounters& other);
};

using FlatEntry = std::pair<PathName, Contents>;

// Baseline: the file system as one flat map of (path, contents) pairs,
// searched linearly. Each candidate costs a path comparison; comparing two
// paths costs one string comparison per element examined, with early exit.
const Contents* flat_lookup(const std::vector<FlatEntry>& pairs, const PathName& path,
                            CostCounters& counters);

// namei over the tree with every cost made visible: one directory fetch per
// level, a linear scan of the directory's entries (one string comparison per
// candidate examined), and every block read counted.
std::optional<Index> tree_lookup_instrumented(const FsImage& fs, const PathName& path,
                                              CostCounters& counters);

// In-memory path-to-index cache. Coherent by construction over an immutable
// image: an entry (p -> i) is only ever inserted from a completed tree
// lookup, so namei(root, p) = i holds for everything cached. Single writer,
// any number of readers.
class PathCache {
public:
    explicit PathCache(std::size_t capacity = 0); // 0 = unbounded

    std::optional<Index> get(const PathName& path);
    void put(const PathName& path, Index index);

    std::size_t size() const { return map_.size(); }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

    // Re-resolve every cached entry; returns the entries that disagree with
    // namei (always empty over an image that has not been swapped out).
    std::vector<std::pair<PathName, Index>> audit(const FsImage& fs) const;

private:
    struct Hash {
        std::size_t operator()(const PathName& p) const;
    };

    std::size_t capacity_;
    std::unordered_map<PathName, Index, Hash> map_;
    std::deque<PathName> order_; // insertion order, for capacity eviction
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

// Cache in front of the instrumented tree lookup. Hits cost nothing at the
// directory layer; misses run the tree walk and cache positive results.
std::optional<Index> cached_lookup(PathCache& cache, const FsImage& fs, const PathName& path,
                                   CostCounters& counters);

enum class Workload {
    uniform,
    zipf,
};

struct BenchConfig {
    std::uint64_t file_count = 1000; // n: ordinary files in the synthetic image
    std::uint32_t fanout = 10;       // k: children per directory
    std::uint64_t queries = 10000;
    Workload workload = Workload::uniform;
    double zipf_exponent = 1.0;
    std::uint64_t seed = 1;
};

struct StrategyCost {
    std::string strategy;
    CostCounters counters;
};

struct BenchResult {
    BenchConfig config;
    std::vector<StrategyCost> rows; // flat, tree, cached
    std::uint64_t query_count = 0;
    std::uint64_t flat_pairs = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;

    const CostCounters& counters_for(std::string_view strategy) const;
    double mean_flat_path_comparisons() const;
    double mean_tree_directory_fetches() const;
};

// Balanced synthetic tree: directories with exactly k children down to a
// last level holding the n files, so every file sits at depth
// ceil(log_k(n)). Requires k >= 2 and n >= 1.
Manifest balanced_manifest(std::uint64_t file_count, std::uint32_t fanout);

// Dot-free paths of every ordinary file in the image, in walk order.
std::vector<PathName> image_file_paths(const FsImage& fs);

// Build the synthetic image, run one query stream through all three
// strategies, and collect their counters. Deterministic for a fixed seed.
BenchResult bench_report(const BenchConfig& config);

// One header line, then "strategy path_cmp string_cmp dir_fetch block_read".
std::string render_bench_table(const BenchResult& result);

} // namespace treefold
