#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "treefold/error.hpp"

namespace treefold {

// The simulated disk is a flat array of 512-byte blocks persisted as a
// single image file. Block 0 is always the superblock, so block number 0
// doubles as "absent" wherever a block reference may be missing.
inline constexpr std::size_t kBlockSize = 512;

// Superblock magic, bytes 0..8 of block 0.
inline constexpr std::array<std::uint8_t, 8> kMagic = {'T', 'R', 'E', 'E', 'F', 'L', 'D', '1'};

using BlockNumber = std::uint32_t; // 0 = null/absent
using Index = std::uint32_t;       // inode slot number, the domain of alpha

using Block = std::array<std::uint8_t, kBlockSize>;
using Bytes = std::vector<std::uint8_t>;

struct Geometry {
    std::uint32_t block_size = kBlockSize;
    std::uint64_t block_count = 0;
    std::uint64_t inode_count = 0;
    Index root_index = 0;
    BlockNumber inode_table_start = 1;
};

// Big-endian field access shared by the superblock, inode, and directory
// codecs. All on-disk integers in this format are big-endian.
std::uint32_t load_be32(const std::uint8_t* p);
std::uint64_t load_be64(const std::uint8_t* p);
void store_be32(std::uint8_t* p, std::uint32_t v);
void store_be64(std::uint8_t* p, std::uint64_t v);

// Superblock layout (bit-exact, 512 bytes):
//   bytes 0..8   magic "TREEFLD1"
//   bytes 8..12  block_size, 32-bit BE, must equal 512
//   bytes 12..20 block_count, 64-bit BE
//   bytes 20..28 inode_count, 64-bit BE
//   bytes 28..36 root_index, 64-bit BE
//   bytes 36..40 inode_table_start, 32-bit BE
//   bytes 40..512 zero
Block encode_superblock(const Geometry& geom);
Geometry decode_superblock(std::span<const std::uint8_t> block);

// A whole image loaded into memory. Immutable once opened, so a handle is
// safe to share across threads without locking.
class FsImage {
public:
    static FsImage open(const std::filesystem::path& path);
    static FsImage from_bytes(Bytes data);

    const Geometry& geometry() const { return geom_; }

    // Raw read of any in-range block, including the superblock at 0.
    std::span<const std::uint8_t> read_block(BlockNumber b) const;

    // Read in a data context: block 0 is never file data.
    std::span<const std::uint8_t> read_data_block(BlockNumber b) const;

    std::span<const std::uint8_t> bytes() const { return data_; }

private:
    FsImage(Geometry geom, Bytes data) : geom_(geom), data_(std::move(data)) {}

    Geometry geom_;
    Bytes data_;
};

} // namespace treefold
