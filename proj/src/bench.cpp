#include "treefold/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace treefold {

CostCounters& CostCounters::operator+=(const CostCounters& other) {
    path_comparisons += other.path_comparisons;
    string_comparisons += other.string_comparisons;
    directory_fetches += other.directory_fetches;
    block_reads += other.block_reads;
    return *this;
}

namespace {

bool paths_equal_counted(const PathName& a, const PathName& b, CostCounters& counters) {
    std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i) {
        ++counters.string_comparisons;
        if (a.elements[i] != b.elements[i])
            return false;
    }
    return a.size() == b.size();
}

} // namespace

const Contents* flat_lookup(const std::vector<FlatEntry>& pairs, const PathName& path,
                            CostCounters& counters) {
    for (const auto& [candidate, contents] : pairs) {
        ++counters.path_comparisons;
        if (paths_equal_counted(candidate, path, counters))
            return &contents;
    }
    return nullptr;
}

namespace {

// file_contents with the block reads made visible.
Bytes read_contents_counted(const FsImage& fs, const InodeRecord& rec, CostCounters& counters) {
    std::uint64_t needed = (rec.size + kBlockSize - 1) / kBlockSize;
    std::vector<BlockNumber> refs(rec.direct.begin(), rec.direct.end());
    if (refs.size() > needed)
        refs.resize(needed);
    if (refs.size() < needed && rec.indirect != 0) {
        ++counters.block_reads;
        for (BlockNumber b : decode_indirect(fs.read_data_block(rec.indirect))) {
            if (b == 0)
                break;
            refs.push_back(b);
            if (refs.size() == needed)
                break;
        }
    }
    if (refs.size() < needed)
        raise(Errc::short_block_list, "instrumented read of a corrupt inode");
    Bytes out;
    out.reserve(rec.size);
    for (std::uint64_t k = 0; k < needed; ++k) {
        ++counters.block_reads;
        auto block = fs.read_data_block(refs[k]);
        std::uint64_t take = std::min<std::uint64_t>(kBlockSize, rec.size - out.size());
        out.insert(out.end(), block.begin(), block.begin() + std::ptrdiff_t(take));
    }
    return out;
}

} // namespace

std::optional<Index> tree_lookup_instrumented(const FsImage& fs, const PathName& path,
                                              CostCounters& counters) {
    const Geometry& g = fs.geometry();
    Index cur = g.root_index;
    for (const auto& elem : path.elements) {
        if (cur >= g.inode_count)
            return std::nullopt;
        ++counters.block_reads; // the inode block
        auto rec = decode_inode(fs.read_block(alpha1(fs, cur)));
        if (!rec || rec->ftype != FileType::directory)
            return std::nullopt;
        DirectoryMap dir = decode_directory(read_contents_counted(fs, *rec, counters));
        ++counters.directory_fetches;

        // Linear scan in stored order; each candidate examined costs one
        // string comparison, including the match itself.
        std::optional<Index> next;
        for (const auto& [name, target] : dir) {
            ++counters.string_comparisons;
            if (name == elem) {
                next = target;
                break;
            }
        }
        if (!next)
            return std::nullopt;
        cur = *next;
    }
    if (cur >= g.inode_count)
        return std::nullopt;
    ++counters.block_reads; // the target's own inode block
    if (!inode_at(fs, cur))
        return std::nullopt;
    return cur;
}

PathCache::PathCache(std::size_t capacity) : capacity_(capacity) {}

std::size_t PathCache::Hash::operator()(const PathName& p) const {
    // FNV-1a over elements with a separator fold between them.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 1099511628211ull;
    };
    for (const auto& elem : p.elements) {
        for (char c : elem)
            mix(std::uint8_t(c));
        mix(0xFF);
    }
    return std::size_t(h);
}

std::optional<Index> PathCache::get(const PathName& path) {
    auto it = map_.find(path);
    if (it == map_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void PathCache::put(const PathName& path, Index index) {
    if (map_.contains(path))
        return;
    if (capacity_ != 0 && map_.size() >= capacity_) {
        map_.erase(order_.front());
        order_.pop_front();
    }
    map_.emplace(path, index);
    order_.push_back(path);
}

std::vector<std::pair<PathName, Index>> PathCache::audit(const FsImage& fs) const {
    std::vector<std::pair<PathName, Index>> incoherent;
    for (const auto& [path, index] : map_) {
        ResolveOutcome out = namei(fs, fs.geometry().root_index, path);
        if (!out.found() || out.index != index)
            incoherent.emplace_back(path, index);
    }
    return incoherent;
}

std::optional<Index> cached_lookup(PathCache& cache, const FsImage& fs, const PathName& path,
                                   CostCounters& counters) {
    if (auto hit = cache.get(path))
        return hit;
    auto found = tree_lookup_instrumented(fs, path, counters);
    if (found)
        cache.put(path, *found); // negative results are not cached
    return found;
}

Manifest balanced_manifest(std::uint64_t file_count, std::uint32_t fanout) {
    if (fanout < 2)
        raise(Errc::parse_error, "fanout must be at least 2");
    if (file_count < 1)
        raise(Errc::parse_error, "file_count must be at least 1");

    // Smallest depth whose full k-ary tree holds n files.
    std::size_t depth = 1;
    std::uint64_t capacity = fanout;
    while (capacity < file_count) {
        ++depth;
        capacity *= fanout;
    }

    std::ostringstream text;
    std::uint64_t leaf_dirs = depth == 1 ? 1 : (file_count + fanout - 1) / fanout;

    // Left-packed directory skeleton: leaf directory j sits under the
    // base-k digits of j, one directory level per digit.
    std::vector<PathName> leaves;
    if (depth == 1) {
        leaves.push_back(PathName{});
    } else {
        std::set<PathName> dirs;
        for (std::uint64_t j = 0; j < leaf_dirs; ++j) {
            std::vector<std::uint64_t> digits(depth - 1, 0);
            std::uint64_t v = j;
            for (std::size_t d = depth - 1; d-- > 0;) {
                digits[d] = v % fanout;
                v /= fanout;
            }
            PathName path;
            for (std::uint64_t digit : digits) {
                path = path.child("d" + std::to_string(digit));
                dirs.insert(path);
            }
            leaves.push_back(path);
        }
        for (const auto& dir : dirs) // set order keeps parents before children
            text << "dir " << format_path(dir) << '\n';
    }

    for (std::uint64_t j = 0; j < file_count; ++j) {
        const PathName& leaf = leaves[j / fanout];
        text << "file " << format_path(leaf.child("f" + std::to_string(j % fanout)))
             << " inline:\n";
    }
    return parse_manifest(text.str());
}

std::vector<PathName> image_file_paths(const FsImage& fs) {
    std::vector<PathName> files;
    std::set<Index> visited;
    auto walk = [&](auto&& self, Index index, const PathName& path) -> void {
        if (!visited.insert(index).second)
            return;
        auto contents = alpha(fs, index);
        if (!contents)
            return;
        if (contents->is_ordinary()) {
            files.push_back(path);
            return;
        }
        if (!contents->is_directory())
            return;
        for (const auto& [name, target] : contents->directory()) {
            if (name == "." || name == "..")
                continue;
            if (target < fs.geometry().inode_count)
                self(self, target, path.child(name));
        }
    };
    walk(walk, fs.geometry().root_index, PathName{});
    return files;
}

namespace {

std::vector<std::size_t> make_query_stream(const BenchConfig& config, std::size_t universe) {
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> stream;
    stream.reserve(config.queries);

    if (config.workload == Workload::uniform) {
        for (std::uint64_t q = 0; q < config.queries; ++q)
            stream.push_back(std::size_t(rng() % universe));
        return stream;
    }

    // Zipf over ranks 1..universe via the cumulative distribution.
    std::vector<double> cdf(universe);
    double total = 0.0;
    for (std::size_t r = 0; r < universe; ++r) {
        total += 1.0 / std::pow(double(r + 1), config.zipf_exponent);
        cdf[r] = total;
    }
    for (std::uint64_t q = 0; q < config.queries; ++q) {
        double u = std::uniform_real_distribution<double>(0.0, total)(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        stream.push_back(std::size_t(it - cdf.begin()));
    }
    return stream;
}

} // namespace

BenchResult bench_report(const BenchConfig& config) {
    if (config.queries < 1)
        raise(Errc::parse_error, "queries must be at least 1");

    Manifest manifest = balanced_manifest(config.file_count, config.fanout);
    FsImage fs = FsImage::from_bytes(build_image_bytes(manifest));

    std::vector<PathName> paths = image_file_paths(fs);
    std::vector<FlatEntry> pairs;
    pairs.reserve(paths.size());
    for (const auto& path : paths) {
        ResolveOutcome r = namei(fs, fs.geometry().root_index, path);
        pairs.emplace_back(path, *alpha(fs, r.index));
    }

    std::vector<std::size_t> stream = make_query_stream(config, paths.size());

    BenchResult result;
    result.config = config;
    result.query_count = config.queries;
    result.flat_pairs = pairs.size();

    CostCounters flat;
    for (std::size_t q : stream)
        flat_lookup(pairs, paths[q], flat);
    result.rows.push_back({"flat", flat});

    CostCounters tree;
    for (std::size_t q : stream)
        tree_lookup_instrumented(fs, paths[q], tree);
    result.rows.push_back({"tree", tree});

    CostCounters cached;
    PathCache cache;
    for (std::size_t q : stream)
        cached_lookup(cache, fs, paths[q], cached);
    result.rows.push_back({"cached", cached});
    result.cache_hits = cache.hits();
    result.cache_misses = cache.misses();

    return result;
}

const CostCounters& BenchResult::counters_for(std::string_view strategy) const {
    for (const auto& row : rows) {
        if (row.strategy == strategy)
            return row.counters;
    }
    raise(Errc::parse_error, "no such strategy row: " + std::string(strategy));
}

double BenchResult::mean_flat_path_comparisons() const {
    return double(counters_for("flat").path_comparisons) / double(query_count);
}

double BenchResult::mean_tree_directory_fetches() const {
    return double(counters_for("tree").directory_fetches) / double(query_count);
}

std::string render_bench_table(const BenchResult& result) {
    std::ostringstream out;
    out << "strategy path_cmp string_cmp dir_fetch block_read\n";
    for (const auto& row : result.rows) {
        out << row.strategy << ' ' << row.counters.path_comparisons << ' '
            << row.counters.string_comparisons << ' ' << row.counters.directory_fetches << ' '
            << row.counters.block_reads << '\n';
    }
    return out.str();
}

} // namespace treefold
