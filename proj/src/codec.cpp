#include "treefold/codec.hpp"

#include <algorithm>

namespace treefold {

namespace {

std::uint64_t blocks_for(std::uint64_t size) {
    return (size + kBlockSize - 1) / kBlockSize;
}

void check_block_sized(std::span<const std::uint8_t> block, const char* what) {
    if (block.size() != kBlockSize)
        raise(Errc::truncated_image, std::string(what) + " must be a full 512-byte block");
}

} // namespace

std::optional<InodeRecord> decode_inode(std::span<const std::uint8_t> block, bool strict) {
    check_block_sized(block, "inode");
    std::uint8_t tag = block[0];
    if (tag == 0)
        return std::nullopt;
    if (tag > 3)
        raise(Errc::bad_type_tag, "inode type tag " + std::to_string(tag));

    if (strict) {
        auto nonzero = [&](std::size_t from, std::size_t to) {
            return std::any_of(block.begin() + from, block.begin() + to,
                               [](std::uint8_t b) { return b != 0; });
        };
        if (nonzero(1, 8) || nonzero(500, 512))
            raise(Errc::nonzero_padding, "reserved inode bytes are not zero");
    }

    InodeRecord rec;
    rec.ftype = FileType(tag);
    rec.size = load_be64(block.data() + 8);
    if (rec.size > kMaxFileSize)
        raise(Errc::size_overflow, "inode size " + std::to_string(rec.size) +
                                       " exceeds the one-indirect maximum " +
                                       std::to_string(kMaxFileSize));

    std::uint64_t wanted = std::min<std::uint64_t>(blocks_for(rec.size), kDirectSlots);
    rec.direct.reserve(wanted);
    for (std::uint64_t slot = 0; slot < wanted; ++slot) {
        BlockNumber b = load_be32(block.data() + 16 + slot * 4);
        if (b == 0)
            break; // absent slot: the list stays short
        rec.direct.push_back(b);
    }
    rec.indirect = load_be32(block.data() + 496);
    return rec;
}

Block encode_inode(const InodeRecord& rec) {
    if (rec.direct.size() > kDirectSlots)
        raise(Errc::too_many_direct,
              std::to_string(rec.direct.size()) + " direct block numbers, limit is 120");
    if (rec.size > kMaxFileSize)
        raise(Errc::size_overflow, "inode size " + std::to_string(rec.size) +
                                       " exceeds the one-indirect maximum");
    Block b{};
    b[0] = std::uint8_t(rec.ftype);
    store_be64(b.data() + 8, rec.size);
    for (std::size_t i = 0; i < rec.direct.size(); ++i)
        store_be32(b.data() + 16 + i * 4, rec.direct[i]);
    store_be32(b.data() + 496, rec.indirect);
    return b;
}

std::vector<BlockNumber> decode_indirect(std::span<const std::uint8_t> block) {
    check_block_sized(block, "indirect block");
    std::vector<BlockNumber> numbers(kIndirectSlots);
    for (std::size_t i = 0; i < kIndirectSlots; ++i)
        numbers[i] = load_be32(block.data() + i * 4);
    return numbers;
}

Block encode_indirect(std::span<const BlockNumber> numbers) {
    if (numbers.size() > kIndirectSlots)
        raise(Errc::too_many_direct, "indirect block holds at most 128 numbers");
    Block b{};
    for (std::size_t i = 0; i < numbers.size(); ++i)
        store_be32(b.data() + i * 4, numbers[i]);
    return b;
}

DirectoryMap decode_directory(std::span<const std::uint8_t> data) {
    DirectoryMap dir;
    std::size_t pos = 0;
    while (pos < data.size()) {
        auto rest = data.subspan(pos);
        auto zero = std::find(rest.begin(), rest.end(), std::uint8_t(0));
        if (zero == rest.end())
            raise(Errc::trailing_garbage, "entry name never terminated");
        std::size_t name_len = std::size_t(zero - rest.begin());
        if (name_len == 0)
            raise(Errc::empty_name, "entry terminator at entry start");
        // name bytes are NUL-free, so the first zero must open the 00 00
        // terminator and four index bytes must follow.
        if (rest.size() < name_len + 2 + 4)
            raise(Errc::trailing_garbage, "incomplete entry at end of directory data");
        if (rest[name_len + 1] != 0)
            raise(Errc::trailing_garbage, "entry terminator is not two zero bytes");

        std::string name(reinterpret_cast<const char*>(rest.data()), name_len);
        if (!valid_utf8(rest.first(name_len)))
            raise(Errc::bad_utf8, "entry name is not valid UTF-8");
        if (name.find('/') != std::string::npos)
            raise(Errc::name_contains_slash, "entry name contains '/'");

        Index target = load_be32(rest.data() + name_len + 2);
        if (!dir.emplace(std::move(name), target).second)
            raise(Errc::duplicate_name, "duplicate directory entry");
        pos += name_len + 2 + 4;
    }
    return dir;
}

Bytes encode_directory(const DirectoryMap& dir) {
    Bytes out;
    for (const auto& [name, target] : dir) {
        validate_name(name);
        out.insert(out.end(), name.begin(), name.end());
        out.push_back(0);
        out.push_back(0);
        std::uint8_t be[4];
        store_be32(be, target);
        out.insert(out.end(), be, be + 4);
    }
    return out;
}

PathName decode_softlink(std::span<const std::uint8_t> data) {
    if (!valid_utf8(data))
        raise(Errc::bad_utf8, "soft-link contents are not valid UTF-8");
    PathName path;
    if (data.empty())
        return path;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= data.size(); ++i) {
        if (i == data.size() || data[i] == std::uint8_t('/')) {
            if (i == start)
                raise(Errc::empty_element, "soft-link path has an empty element");
            path.elements.emplace_back(reinterpret_cast<const char*>(data.data()) + start, i - start);
            start = i + 1;
        }
    }
    return path;
}

Bytes encode_softlink(const PathName& path) {
    Bytes out;
    for (std::size_t i = 0; i < path.elements.size(); ++i) {
        validate_name(path.elements[i]);
        if (i > 0)
            out.push_back(std::uint8_t('/'));
        out.insert(out.end(), path.elements[i].begin(), path.elements[i].end());
    }
    return out;
}

bool valid_utf8(std::span<const std::uint8_t> data) {
    std::size_t i = 0;
    while (i < data.size()) {
        std::uint8_t b0 = data[i];
        std::size_t len;
        std::uint32_t cp;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return false;
        }
        if (i + len > data.size())
            return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((data[i + k] & 0xC0) != 0x80)
                return false;
            cp = (cp << 6) | (data[i + k] & 0x3F);
        }
        // Reject overlong forms, surrogates, and values past U+10FFFF.
        if (len == 2 && cp < 0x80)
            return false;
        if (len == 3 && cp < 0x800)
            return false;
        if (len == 4 && cp < 0x10000)
            return false;
        if (cp >= 0xD800 && cp <= 0xDFFF)
            return false;
        if (cp > 0x10FFFF)
            return false;
        i += len;
    }
    return true;
}

void validate_name(std::string_view name) {
    if (name.empty())
        raise(Errc::empty_name, "names must be non-empty");
    if (name.find('\0') != std::string_view::npos)
        raise(Errc::name_contains_zero_byte, "name contains a zero byte");
    if (name.find('/') != std::string_view::npos)
        raise(Errc::name_contains_slash, "name contains '/'");
    if (!valid_utf8(std::span(reinterpret_cast<const std::uint8_t*>(name.data()), name.size())))
        raise(Errc::bad_utf8, "name is not valid UTF-8");
}

PathName parse_path(std::string_view text) {
    if (!text.empty() && text.front() == '/')
        text.remove_prefix(1);
    PathName path;
    if (text.empty())
        return path;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '/') {
            if (i == start)
                raise(Errc::empty_element, "path has an empty element");
            std::string elem(text.substr(start, i - start));
            if (elem.find('\0') != std::string::npos)
                raise(Errc::name_contains_zero_byte, "path element contains a zero byte");
            if (!valid_utf8(std::span(reinterpret_cast<const std::uint8_t*>(elem.data()), elem.size())))
                raise(Errc::bad_utf8, "path element is not valid UTF-8");
            path.elements.push_back(std::move(elem));
            start = i + 1;
        }
    }
    return path;
}

std::string format_path(const PathName& path) {
    if (path.empty())
        return "/";
    std::string out;
    for (const auto& elem : path.elements) {
        out += '/';
        out += elem;
    }
    return out;
}

} // namespace treefold
