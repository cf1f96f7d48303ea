#include "treefold/blockdev.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace treefold {

std::uint32_t load_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::uint64_t load_be64(const std::uint8_t* p) {
    return (std::uint64_t(load_be32(p)) << 32) | load_be32(p + 4);
}

void store_be32(std::uint8_t* p, std::uint32_t v) {
    p[0] = std::uint8_t(v >> 24);
    p[1] = std::uint8_t(v >> 16);
    p[2] = std::uint8_t(v >> 8);
    p[3] = std::uint8_t(v);
}

void store_be64(std::uint8_t* p, std::uint64_t v) {
    store_be32(p, std::uint32_t(v >> 32));
    store_be32(p + 4, std::uint32_t(v));
}

namespace {

void validate_geometry(const Geometry& g) {
    if (g.block_size != kBlockSize)
        raise(Errc::geometry_invalid, "block_size must be 512, got " + std::to_string(g.block_size));
    if (g.inode_count == 0)
        raise(Errc::geometry_invalid, "inode_count must be at least 1");
    if (g.inode_table_start < 1)
        raise(Errc::geometry_invalid, "inode table may not overlap the superblock");
    if (std::uint64_t(g.inode_table_start) + g.inode_count > g.block_count)
        raise(Errc::geometry_invalid, "inode table extends past the end of the image");
    if (g.root_index >= g.inode_count)
        raise(Errc::geometry_invalid, "root_index " + std::to_string(g.root_index) +
                                          " not below inode_count " + std::to_string(g.inode_count));
    // Block numbers and directory entry indexes are 32-bit on disk.
    if (g.block_count > std::numeric_limits<BlockNumber>::max())
        raise(Errc::geometry_invalid, "block_count exceeds the 32-bit block number range");
    if (g.inode_count > std::numeric_limits<Index>::max())
        raise(Errc::geometry_invalid, "inode_count exceeds the 32-bit index range");
}

} // namespace

Block encode_superblock(const Geometry& geom) {
    validate_geometry(geom);
    Block b{};
    std::copy(kMagic.begin(), kMagic.end(), b.begin());
    store_be32(b.data() + 8, geom.block_size);
    store_be64(b.data() + 12, geom.block_count);
    store_be64(b.data() + 20, geom.inode_count);
    store_be64(b.data() + 28, geom.root_index);
    store_be32(b.data() + 36, geom.inode_table_start);
    return b;
}

Geometry decode_superblock(std::span<const std::uint8_t> block) {
    if (block.size() != kBlockSize)
        raise(Errc::truncated_image, "superblock must be a full 512-byte block");
    if (!std::equal(kMagic.begin(), kMagic.end(), block.begin()))
        raise(Errc::bad_magic, "not a treefold image");

    Geometry g;
    g.block_size = load_be32(block.data() + 8);
    g.block_count = load_be64(block.data() + 12);
    g.inode_count = load_be64(block.data() + 20);
    std::uint64_t root = load_be64(block.data() + 28);
    g.inode_table_start = load_be32(block.data() + 36);
    if (root > std::numeric_limits<Index>::max())
        raise(Errc::geometry_invalid, "root_index exceeds the 32-bit index range");
    g.root_index = Index(root);
    validate_geometry(g);
    return g;
}

FsImage FsImage::open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::io_error, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    std::streamoff end = in.tellg();
    if (end < 0)
        raise(Errc::io_error, "cannot determine the length of " + path.string());
    auto len = std::uint64_t(end);
    in.seekg(0, std::ios::beg);
    Bytes data(len);
    if (len > 0 && !in.read(reinterpret_cast<char*>(data.data()), std::streamsize(len)))
        raise(Errc::io_error, "short read on " + path.string());
    return from_bytes(std::move(data));
}

FsImage FsImage::from_bytes(Bytes data) {
    if (data.size() < kBlockSize || data.size() % kBlockSize != 0)
        raise(Errc::truncated_image,
              "image length " + std::to_string(data.size()) + " is not a whole number of blocks");
    Geometry geom = decode_superblock(std::span(data).first(kBlockSize));
    std::uint64_t expected = geom.block_count * kBlockSize;
    if (data.size() < expected)
        raise(Errc::truncated_image, "superblock declares " + std::to_string(geom.block_count) +
                                         " blocks but the file holds only " +
                                         std::to_string(data.size() / kBlockSize));
    if (data.size() > expected)
        raise(Errc::geometry_invalid, "file is longer than the declared block count");
    return FsImage(geom, std::move(data));
}

std::span<const std::uint8_t> FsImage::read_block(BlockNumber b) const {
    if (b >= geom_.block_count)
        raise(Errc::out_of_range, "block " + std::to_string(b) + " not below block_count " +
                                      std::to_string(geom_.block_count));
    return std::span(data_).subspan(std::size_t(b) * kBlockSize, kBlockSize);
}

std::span<const std::uint8_t> FsImage::read_data_block(BlockNumber b) const {
    if (b == 0)
        raise(Errc::null_block, "block 0 dereferenced as data");
    return read_block(b);
}

} // namespace treefold
