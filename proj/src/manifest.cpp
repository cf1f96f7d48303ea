#include "treefold/manifest.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace treefold {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
    raise(Errc::parse_error, "line " + std::to_string(line) + ": " + message);
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

Bytes parse_hex(std::string_view hex, std::size_t line) {
    if (hex.size() % 2 != 0)
        parse_fail(line, "inline payload has an odd number of hex digits");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_digit(hex[i]);
        int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0)
            parse_fail(line, "inline payload has a non-hex digit");
        out.push_back(std::uint8_t(hi << 4 | lo));
    }
    return out;
}

PathName parse_declared_path(std::string_view text, std::size_t line) {
    if (text.empty() || text.front() != '/')
        parse_fail(line, "declared paths must be absolute");
    PathName path;
    try {
        path = parse_path(text);
    } catch (const FsError& e) {
        parse_fail(line, e.what());
    }
    for (const auto& elem : path.elements) {
        if (elem == "." || elem == "..")
            parse_fail(line, "\".\" and \"..\" are written by the builder, not declared");
        try {
            validate_name(elem);
        } catch (const FsError& e) {
            parse_fail(line, e.what());
        }
    }
    return path;
}

} // namespace

Manifest parse_manifest(std::string_view text) {
    Manifest manifest;
    std::set<PathName> declared;
    std::set<PathName> directories;
    declared.insert(PathName{});    // root
    directories.insert(PathName{});

    std::istringstream lines{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::istringstream fields(raw);
        std::string kind;
        if (!(fields >> kind))
            continue; // blank line
        if (kind.front() == '#')
            continue; // comment

        Declaration decl;
        decl.line = line_no;

        std::string path_text;
        if (!(fields >> path_text))
            parse_fail(line_no, "missing path");
        decl.path = parse_declared_path(path_text, line_no);
        if (decl.path.empty())
            raise(Errc::duplicate_path, "line " + std::to_string(line_no) +
                                            ": the root directory always exists");

        if (kind == "dir") {
            decl.kind = DeclKind::directory;
        } else if (kind == "file") {
            decl.kind = DeclKind::file;
            std::string payload;
            if (!(fields >> payload))
                parse_fail(line_no, "file declaration needs inline:<hex> or @<host-file>");
            if (payload.starts_with("inline:")) {
                decl.inline_payload = parse_hex(std::string_view(payload).substr(7), line_no);
            } else if (payload.starts_with("@") && payload.size() > 1) {
                decl.payload_file = std::filesystem::path(payload.substr(1));
            } else {
                parse_fail(line_no, "payload must be inline:<hex> or @<host-file>");
            }
        } else if (kind == "link") {
            decl.kind = DeclKind::link;
            std::string target;
            if (!(fields >> target))
                parse_fail(line_no, "link declaration needs a target path");
            try {
                decl.link_target = parse_path(target);
            } catch (const FsError& e) {
                parse_fail(line_no, e.what());
            }
        } else {
            parse_fail(line_no, "unknown declaration \"" + kind + "\"");
        }

        std::string extra;
        if (fields >> extra)
            parse_fail(line_no, "unexpected trailing field \"" + extra + "\"");

        if (declared.contains(decl.path))
            raise(Errc::duplicate_path,
                  "line " + std::to_string(line_no) + ": " + format_path(decl.path));
        PathName parent = decl.path.parent();
        if (!directories.contains(parent))
            raise(Errc::orphan_declaration, "line " + std::to_string(line_no) + ": parent " +
                                                format_path(parent) + " is not a declared directory");

        declared.insert(decl.path);
        if (decl.kind == DeclKind::directory)
            directories.insert(decl.path);
        manifest.declarations.push_back(std::move(decl));
    }
    return manifest;
}

namespace {

struct PendingInode {
    FileType ftype;
    Bytes data;
};

Bytes read_payload(const Declaration& decl) {
    if (!decl.payload_file)
        return decl.inline_payload;
    std::ifstream in(*decl.payload_file, std::ios::binary);
    if (!in)
        raise(Errc::io_error, "cannot read payload file " + decl.payload_file->string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

} // namespace

Bytes build_image_bytes(const Manifest& manifest, const BuildOptions& options,
                        Geometry* geometry_out) {
    // Pass 1: assign indexes (root = 0, declarations in order) and collect
    // each directory's real children.
    std::map<PathName, Index> index_of;
    index_of.emplace(PathName{}, 0);
    std::map<Index, DirectoryMap> children;
    children[0] = {};
    std::map<Index, const Declaration*> decl_of;

    Index next = 1;
    for (const auto& decl : manifest.declarations) {
        Index idx = next++;
        index_of.emplace(decl.path, idx);
        decl_of.emplace(idx, &decl);
        Index parent = index_of.at(decl.path.parent());
        children.at(parent).emplace(decl.path.elements.back(), idx);
        if (decl.kind == DeclKind::directory)
            children[idx] = {};
    }

    std::uint64_t inode_count = std::uint64_t(next) + options.spare_inode_slots;
    if (inode_count > std::numeric_limits<Index>::max())
        raise(Errc::image_full, "too many inodes for 32-bit indexes");

    // Pass 2: materialize contents per inode.
    std::map<Index, PendingInode> pending;
    for (const auto& [path, idx] : index_of) {
        if (auto it = children.find(idx); it != children.end()) {
            DirectoryMap dir = it->second;
            dir.emplace(".", idx);
            dir.emplace("..", path.empty() ? idx : index_of.at(path.parent()));
            pending[idx] = {FileType::directory, encode_directory(dir)};
        } else {
            const Declaration& decl = *decl_of.at(idx);
            if (decl.kind == DeclKind::file)
                pending[idx] = {FileType::ordinary, read_payload(decl)};
            else
                pending[idx] = {FileType::softlink, encode_softlink(decl.link_target)};
        }
        if (pending[idx].data.size() > kMaxFileSize)
            raise(Errc::file_too_large, format_path(path) + " holds " +
                                            std::to_string(pending[idx].data.size()) +
                                            " bytes, limit is " + std::to_string(kMaxFileSize));
    }

    // Pass 3: lay out data blocks after the inode table, in index order.
    const BlockNumber table_start = 1;
    std::uint64_t next_block = table_start + inode_count;
    struct Layout {
        InodeRecord record;
        std::vector<BlockNumber> data_blocks;
        std::vector<BlockNumber> overflow; // numbers stored in the indirect block
        BlockNumber indirect = 0;
    };
    std::map<Index, Layout> layouts;
    for (const auto& [idx, inode] : pending) {
        Layout layout;
        std::uint64_t blocks = (inode.data.size() + kBlockSize - 1) / kBlockSize;
        for (std::uint64_t k = 0; k < blocks; ++k)
            layout.data_blocks.push_back(BlockNumber(next_block++));
        if (blocks > kDirectSlots) {
            layout.indirect = BlockNumber(next_block++);
            layout.overflow.assign(layout.data_blocks.begin() + kDirectSlots,
                                   layout.data_blocks.end());
        }
        layout.record.ftype = inode.ftype;
        layout.record.size = inode.data.size();
        layout.record.direct.assign(layout.data_blocks.begin(),
                                    layout.data_blocks.begin() +
                                        std::ptrdiff_t(std::min<std::uint64_t>(blocks, kDirectSlots)));
        layout.record.indirect = layout.indirect;
        layouts[idx] = std::move(layout);
    }

    if (next_block > std::numeric_limits<BlockNumber>::max())
        raise(Errc::image_full, "image needs more blocks than 32-bit numbers can address");

    Geometry geom;
    geom.block_count = next_block;
    geom.inode_count = inode_count;
    geom.root_index = 0;
    geom.inode_table_start = table_start;

    Bytes image(next_block * kBlockSize, 0);
    auto put_block = [&](std::uint64_t number, const Block& block) {
        std::copy(block.begin(), block.end(), image.begin() + std::ptrdiff_t(number * kBlockSize));
    };

    put_block(0, encode_superblock(geom));
    for (const auto& [idx, layout] : layouts) {
        put_block(table_start + idx, encode_inode(layout.record));
        const Bytes& data = pending.at(idx).data;
        for (std::size_t k = 0; k < layout.data_blocks.size(); ++k) {
            std::size_t offset = k * kBlockSize;
            std::size_t take = std::min(kBlockSize, data.size() - offset);
            std::copy(data.begin() + std::ptrdiff_t(offset),
                      data.begin() + std::ptrdiff_t(offset + take),
                      image.begin() + std::ptrdiff_t(std::uint64_t(layout.data_blocks[k]) * kBlockSize));
        }
        if (layout.indirect != 0)
            put_block(layout.indirect, encode_indirect(layout.overflow));
    }

    if (geometry_out)
        *geometry_out = geom;
    return image;
}

Geometry build_image(const Manifest& manifest, const std::filesystem::path& out,
                     const BuildOptions& options) {
    Geometry geom;
    Bytes image = build_image_bytes(manifest, options, &geom);
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file)
        raise(Errc::io_error, "cannot create " + out.string());
    file.write(reinterpret_cast<const char*>(image.data()), std::streamsize(image.size()));
    if (!file)
        raise(Errc::io_error, "short write on " + out.string());
    return geom;
}

} // namespace treefold
