#pragma once

#include <optional>
#include <variant>

#include "treefold/codec.hpp"

namespace treefold {

// What an index resolves to: ordinary bytes, a directory map, or a stored
// soft-link path.
class Contents {
public:
    explicit Contents(Bytes bytes) : value_(std::move(bytes)) {}
    explicit Contents(DirectoryMap dir) : value_(std::move(dir)) {}
    explicit Contents(PathName link) : value_(std::move(link)) {}

    bool is_ordinary() const { return std::holds_alternative<Bytes>(value_); }
    bool is_directory() const { return std::holds_alternative<DirectoryMap>(value_); }
    bool is_softlink() const { return std::holds_alternative<PathName>(value_); }

    FileType type() const {
        if (is_ordinary())
            return FileType::ordinary;
        return is_directory() ? FileType::directory : FileType::softlink;
    }

    const Bytes& ordinary() const { return std::get<Bytes>(value_); }
    const DirectoryMap& directory() const { return std::get<DirectoryMap>(value_); }
    const PathName& softlink() const { return std::get<PathName>(value_); }

    bool operator==(const Contents&) const = default;

private:
    std::variant<Bytes, DirectoryMap, PathName> value_;
};

// Address of inode i: the inode table is contiguous, so this is just
// inode_table_start + i.
BlockNumber alpha1(const FsImage& fs, Index i);

// Decode the inode block for index i; nullopt when the slot is undefined.
std::optional<InodeRecord> inode_at(const FsImage& fs, Index i);

// Gather the record's blocks (direct, then indirect-listed), concatenate,
// and truncate to the recorded size.
Bytes file_contents(const FsImage& fs, const InodeRecord& rec);

// The index layer: decode an index all the way to Contents, or nullopt when
// the inode slot is undefined. Corruption surfaces as errors, never nullopt.
std::optional<Contents> alpha(const FsImage& fs, Index i);

} // namespace treefold
