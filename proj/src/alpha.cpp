#include "treefold/alpha.hpp"

#include <algorithm>

namespace treefold {

BlockNumber alpha1(const FsImage& fs, Index i) {
    const Geometry& g = fs.geometry();
    if (i >= g.inode_count)
        raise(Errc::index_out_of_range, "index " + std::to_string(i) + " not below inode_count " +
                                            std::to_string(g.inode_count));
    return g.inode_table_start + i;
}

std::optional<InodeRecord> inode_at(const FsImage& fs, Index i) {
    return decode_inode(fs.read_block(alpha1(fs, i)));
}

Bytes file_contents(const FsImage& fs, const InodeRecord& rec) {
    std::uint64_t needed = (rec.size + kBlockSize - 1) / kBlockSize;

    std::vector<BlockNumber> refs(rec.direct.begin(), rec.direct.end());
    if (refs.size() > needed)
        refs.resize(needed);
    if (refs.size() < needed && rec.indirect != 0) {
        if (rec.indirect >= fs.geometry().block_count)
            raise(Errc::dangling_block_ref,
                  "indirect block " + std::to_string(rec.indirect) + " out of range");
        for (BlockNumber b : decode_indirect(fs.read_data_block(rec.indirect))) {
            if (b == 0)
                break;
            refs.push_back(b);
            if (refs.size() == needed)
                break;
        }
    }
    if (refs.size() < needed)
        raise(Errc::short_block_list, "inode references " + std::to_string(refs.size()) +
                                          " blocks but size needs " + std::to_string(needed));

    Bytes out;
    out.reserve(rec.size);
    for (std::uint64_t k = 0; k < needed; ++k) {
        BlockNumber b = refs[k];
        if (b == 0 || b >= fs.geometry().block_count)
            raise(Errc::dangling_block_ref, "data block reference " + std::to_string(b));
        auto block = fs.read_data_block(b);
        std::uint64_t take = std::min<std::uint64_t>(kBlockSize, rec.size - out.size());
        out.insert(out.end(), block.begin(), block.begin() + std::ptrdiff_t(take));
    }
    return out;
}

std::optional<Contents> alpha(const FsImage& fs, Index i) {
    auto rec = inode_at(fs, i);
    if (!rec)
        return std::nullopt;
    Bytes data = file_contents(fs, *rec);
    switch (rec->ftype) {
    case FileType::ordinary:
        return Contents(std::move(data));
    case FileType::directory:
        return Contents(decode_directory(data));
    case FileType::softlink:
        return Contents(decode_softlink(data));
    }
    raise(Errc::bad_type_tag, "unreachable inode type");
}

} // namespace treefold
