#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "treefold/codec.hpp"

namespace treefold {

// Line-oriented image description:
//   dir /path
//   file /path inline:<hex>
//   file /path @<host-file>
//   link /path <target-path>
// Lines whose first non-blank character is '#' are comments. Parents must be
// declared before children and paths may not repeat.
enum class DeclKind {
    directory,
    file,
    link,
};

struct Declaration {
    DeclKind kind = DeclKind::directory;
    PathName path;
    Bytes inline_payload;                              // file, inline:<hex>
    std::optional<std::filesystem::path> payload_file; // file, @<host-file>
    PathName link_target;                              // link
    std::size_t line = 0;
};

struct Manifest {
    std::vector<Declaration> declarations;
};

Manifest parse_manifest(std::string_view text);

struct BuildOptions {
    // Extra undefined (tag 0) inode slots appended after the declared ones.
    // Tests use these to fabricate corruption without moving live data.
    std::uint64_t spare_inode_slots = 0;
};

// Deterministic image construction: root is index 0, declarations take
// indexes in order, every directory gets "." and ".." entries, data blocks
// follow the inode table sequentially. The same manifest always yields
// byte-identical output.
Bytes build_image_bytes(const Manifest& manifest, const BuildOptions& options = {},
                        Geometry* geometry_out = nullptr);
Geometry build_image(const Manifest& manifest, const std::filesystem::path& out,
                     const BuildOptions& options = {});

} // namespace treefold
