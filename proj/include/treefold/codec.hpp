#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treefold/blockdev.hpp"

namespace treefold {

// One inode block holds 120 direct block numbers plus one indirect block of
// 128 more, capping a file at (120 + 128) * 512 = 126,976 bytes.
inline constexpr std::size_t kDirectSlots = 120;
inline constexpr std::size_t kIndirectSlots = kBlockSize / 4;
inline constexpr std::uint64_t kMaxFileSize = (kDirectSlots + kIndirectSlots) * kBlockSize;

enum class FileType : std::uint8_t {
    ordinary = 1,
    directory = 2,
    softlink = 3,
};

// Decoded form of one inode block. Tag byte 0 means the slot is undefined
// and decode_inode reports that as nullopt rather than a record.
struct InodeRecord {
    FileType ftype = FileType::ordinary;
    std::uint64_t size = 0;
    std::vector<BlockNumber> direct; // nonzero numbers, at most kDirectSlots
    BlockNumber indirect = 0;        // 0 = none

    bool operator==(const InodeRecord&) const = default;
};

// Directory contents decode to a finite map from names to inode indexes.
// std::map keeps names in ascending byte order, which is also the canonical
// encoding order, so encode(decode(x)) is stable.
using DirectoryMap = std::map<std::string, Index>;

// A path is a finite sequence of non-empty names; {} is the null path.
struct PathName {
    std::vector<std::string> elements;

    bool empty() const { return elements.empty(); }
    std::size_t size() const { return elements.size(); }

    PathName child(std::string name) const {
        PathName p = *this;
        p.elements.push_back(std::move(name));
        return p;
    }
    PathName parent() const {
        PathName p = *this;
        p.elements.pop_back();
        return p;
    }

    auto operator<=>(const PathName&) const = default;
};

// Inode block layout (bit-exact, 512 bytes):
//   byte 0        type tag (0 undefined, 1 ordinary, 2 directory, 3 softlink)
//   bytes 1..8    zero
//   bytes 8..16   size, 64-bit BE
//   bytes 16..496 120 direct block numbers, 32-bit BE each, unused slots 0
//   bytes 496..500 indirect block number, 32-bit BE, 0 = none
//   bytes 500..512 zero
//
// The decoded direct list is truncated to the block count implied by size;
// a zero slot before that count leaves the list short (surfaced later as
// ShortBlockList when the contents are gathered). strict additionally
// rejects nonzero reserved bytes.
std::optional<InodeRecord> decode_inode(std::span<const std::uint8_t> block, bool strict = false);
Block encode_inode(const InodeRecord& rec);

// An indirect block is 128 32-bit BE block numbers; trailing zeros are
// absent slots and consumers take only as many as the file size requires.
std::vector<BlockNumber> decode_indirect(std::span<const std::uint8_t> block);
Block encode_indirect(std::span<const BlockNumber> numbers);

// Directory byte encoding: for each entry, the UTF-8 name (no zero byte,
// no '/'), a 0x00 0x00 terminator, then a 4-byte BE index. Entries are
// emitted in ascending byte order of names so images rebuild bit-identically.
DirectoryMap decode_directory(std::span<const std::uint8_t> data);
Bytes encode_directory(const DirectoryMap& dir);

// Soft-link contents are the UTF-8 target path with "/" separators and no
// leading or trailing separator; empty contents denote the null path.
PathName decode_softlink(std::span<const std::uint8_t> data);
Bytes encode_softlink(const PathName& path);

bool valid_utf8(std::span<const std::uint8_t> data);

// Rejects names a directory cannot hold: empty, embedded NUL, '/', bad UTF-8.
void validate_name(std::string_view name);

// CLI-boundary path syntax: "/"-separated, one leading "/" permitted, ""
// denotes the null path. Elements "." and ".." are ordinary names here.
PathName parse_path(std::string_view text);
std::string format_path(const PathName& path); // leading "/", null path -> "/"

} // namespace treefold
