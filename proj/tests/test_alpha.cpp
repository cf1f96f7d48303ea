#include <doctest.h>

#include <random>
#include <sstream>

#include "testutil.hpp"
#include "treefold/resolver.hpp"

using namespace treefold;
using namespace treefold::testing;

TEST_CASE("alpha1 is the table offset map") {
    FsImage fs = image_from_text("dir /a\ndir /b\nfile /b/f inline:00\ndir /b/c\ndir /b/c/d\n");
    REQUIRE(fs.geometry().inode_table_start == 1);
    CHECK(alpha1(fs, 0) == 1);
    CHECK(alpha1(fs, 5) == 6);
    try {
        alpha1(fs, Index(fs.geometry().inode_count));
        FAIL("expected IndexOutOfRange");
    } catch (const FsError& e) {
        CHECK(e.code() == Errc::index_out_of_range);
    }
}

TEST_CASE("file contents concatenate blocks and truncate to size") {
    SUBCASE("empty file") {
        FsImage fs = image_from_text("file /f inline:\n");
        auto contents = alpha(fs, 1);
        REQUIRE(contents.has_value());
        CHECK(contents->is_ordinary());
        CHECK(contents->ordinary().empty());
    }
    SUBCASE("five bytes in one block") {
        FsImage fs = image_from_text("file /f inline:68656c6c6f\n");
        auto contents = alpha(fs, 1);
        REQUIRE(contents.has_value());
        CHECK(contents->ordinary() == Bytes{'h', 'e', 'l', 'l', 'o'});
    }
    SUBCASE("600 bytes spanning two blocks, checked against raw file offsets") {
        std::ostringstream manifest;
        manifest << "file /f inline:";
        Bytes payload(600);
        std::mt19937_64 rng(600);
        for (auto& b : payload) {
            b = std::uint8_t(rng());
            manifest << "0123456789abcdef"[b >> 4] << "0123456789abcdef"[b & 0xF];
        }
        manifest << '\n';

        Bytes image = build_image_bytes(parse_manifest(manifest.str()));
        FsImage fs = FsImage::from_bytes(image);

        // Independent oracle: read the inode's two block numbers straight out
        // of the raw image bytes and slice the file at those offsets.
        std::size_t inode_off = inode_block_offset(fs.geometry(), 1);
        REQUIRE(load_be64(image.data() + inode_off + 8) == 600);
        BlockNumber b1 = load_be32(image.data() + inode_off + 16);
        BlockNumber b2 = load_be32(image.data() + inode_off + 20);
        Bytes expected;
        expected.insert(expected.end(), image.begin() + b1 * 512, image.begin() + b1 * 512 + 512);
        expected.insert(expected.end(), image.begin() + b2 * 512, image.begin() + b2 * 512 + 88);

        auto contents = alpha(fs, 1);
        REQUIRE(contents.has_value());
        CHECK(contents->ordinary() == expected);
        CHECK(contents->ordinary() == payload);
    }
}

TEST_CASE("files past the direct slots flow through the indirect block") {
    // 121 blocks: one more than the direct slots hold.
    std::uint64_t size = kDirectSlots * kBlockSize + 1;
    std::ostringstream manifest;
    manifest << "file /big inline:";
    std::mt19937_64 rng(121);
    Bytes payload(size);
    for (auto& b : payload) {
        b = std::uint8_t(rng());
        manifest << "0123456789abcdef"[b >> 4] << "0123456789abcdef"[b & 0xF];
    }
    manifest << '\n';
    FsImage fs = image_from_text(manifest.str());

    auto rec = inode_at(fs, 1);
    REQUIRE(rec.has_value());
    CHECK(rec->direct.size() == kDirectSlots);
    CHECK(rec->indirect != 0);
    auto contents = alpha(fs, 1);
    REQUIRE(contents.has_value());
    CHECK(contents->ordinary() == payload);
}

TEST_CASE("alpha dispatches on the inode type") {
    SUBCASE("a free slot is undefined") {
        FsImage fs = image_from_text("", {.spare_inode_slots = 1});
        CHECK(!alpha(fs, 1).has_value());
    }
    SUBCASE("root of the empty image is a directory with its dot entries") {
        FsImage fs = image_from_text("");
        auto contents = alpha(fs, 0);
        REQUIRE(contents.has_value());
        REQUIRE(contents->is_directory());
        CHECK(contents->directory() == DirectoryMap{{".", 0}, {"..", 0}});
    }
    SUBCASE("directory data decodes through the codec") {
        FsImage fs = image_from_text("file /passwords inline:ff\n");
        auto contents = alpha(fs, 0);
        REQUIRE(contents->is_directory());
        CHECK(contents->directory().at("passwords") == 1);
    }
    SUBCASE("soft links decode to their stored path") {
        FsImage fs = image_from_text("link /l /a/b\n");
        auto contents = alpha(fs, 1);
        REQUIRE(contents.has_value());
        REQUIRE(contents->is_softlink());
        CHECK(contents->softlink() == PathName{{"a", "b"}});
    }
}

TEST_CASE("corrupt block references are errors, not undefined") {
    Geometry geom;
    Bytes image = build_image_bytes(parse_manifest("file /f inline:68656c6c6f\n"), {}, &geom);

    SUBCASE("out-of-range data block") {
        std::size_t off = inode_block_offset(geom, 1);
        store_be32(image.data() + off + 16, BlockNumber(geom.block_count + 5));
        FsImage fs = FsImage::from_bytes(std::move(image));
        try {
            alpha(fs, 1);
            FAIL("expected DanglingBlockRef");
        } catch (const FsError& e) {
            CHECK(e.code() == Errc::dangling_block_ref);
        }
    }
    SUBCASE("zeroed direct slot leaves the list short") {
        std::size_t off = inode_block_offset(geom, 1);
        store_be32(image.data() + off + 16, 0);
        FsImage fs = FsImage::from_bytes(std::move(image));
        try {
            alpha(fs, 1);
            FAIL("expected ShortBlockList");
        } catch (const FsError& e) {
            CHECK(e.code() == Errc::short_block_list);
        }
    }
}

TEST_CASE("alpha reproduces the canonical directory binding from raw blocks") {
    // Hand-assembled three-block image: superblock, one directory inode,
    // one data block holding exactly the canonical "passwords" entry.
    const Bytes entry = {0x70, 0x61, 0x73, 0x73, 0x77, 0x6F, 0x72, 0x64,
                         0x73, 0x00, 0x00, 0x00, 0x00, 0x88, 0x10};
    Geometry geom;
    geom.block_count = 3;
    geom.inode_count = 1;
    geom.root_index = 0;
    geom.inode_table_start = 1;
    InodeRecord rec;
    rec.ftype = FileType::directory;
    rec.size = entry.size();
    rec.direct = {2};

    Bytes image(3 * kBlockSize, 0);
    Block superblock = encode_superblock(geom);
    Block inode = encode_inode(rec);
    std::copy(superblock.begin(), superblock.end(), image.begin());
    std::copy(inode.begin(), inode.end(), image.begin() + kBlockSize);
    std::copy(entry.begin(), entry.end(), image.begin() + 2 * kBlockSize);

    FsImage fs = FsImage::from_bytes(std::move(image));
    auto contents = alpha(fs, 0);
    REQUIRE(contents.has_value());
    REQUIRE(contents->is_directory());
    CHECK(contents->directory() == DirectoryMap{{"passwords", 34832}});
}

TEST_CASE("alpha is total over clean images: defined payloads, never an abort") {
    std::mt19937_64 rng(0xa1f4);
    for (int round = 0; round < 30; ++round) {
        FsImage fs = build_in_memory(random_manifest(rng, {.with_links = true}),
                                     {.spare_inode_slots = 1});
        for (Index i = 0; i < fs.geometry().inode_count; ++i) {
            auto rec = inode_at(fs, i);
            auto contents = alpha(fs, i);
            CHECK(rec.has_value() == contents.has_value());
            if (rec && rec->ftype == FileType::ordinary)
                CHECK(contents->ordinary().size() == rec->size);
        }
    }
}

TEST_CASE("alpha is pure") {
    FsImage fs = image_from_text("dir /a\nfile /a/f inline:0102\n");
    for (Index i = 0; i < fs.geometry().inode_count; ++i)
        CHECK(alpha(fs, i) == alpha(fs, i));
}
