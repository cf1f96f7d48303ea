#include <doctest.h>

#include <random>

#include "testutil.hpp"
#include "treefold/resolver.hpp"

using namespace treefold;
using namespace treefold::testing;

TEST_CASE("namei resolves the null path to its start index in one step") {
    FsImage fs = image_from_text("dir /a\n");
    auto out = namei(fs, 0, PathName{});
    CHECK(out.found());
    CHECK(out.index == 0);
    CHECK(out.steps == 1);

    auto at_child = namei(fs, 1, PathName{});
    CHECK(at_child.found());
    CHECK(at_child.index == 1);
}

TEST_CASE("namei descends one element per step") {
    FsImage fs = image_from_text("dir /a\nfile /a/b inline:00\n");
    auto out = namei(fs, 0, PathName{{"a", "b"}});
    CHECK(out.found());
    CHECK(out.index == 2);
    CHECK(out.steps == 3);

    auto missing = namei(fs, 0, PathName{{"missing"}});
    CHECK(missing.status == ResolveStatus::not_found);
    CHECK(missing.steps == 1);
}

TEST_CASE("namei agrees with the path-table oracle") {
    std::mt19937_64 rng(0x6a3e);
    for (int round = 0; round < 150; ++round) {
        FsImage fs = build_in_memory(random_manifest(rng, {.max_extra_inodes = 9}));
        auto table = oracle_path_table(fs, 4);
        for (const auto& [path, index] : table) {
            auto out = namei(fs, fs.geometry().root_index, path);
            // The oracle may bind a path whose final entry dangles only on
            // dirty images; builder output is clean, so everything resolves.
            CHECK(out.found());
            CHECK(out.index == index);
            CHECK(out.steps <= path.size() + 1);
        }
        // A name no generator produces is never found.
        auto absent = namei(fs, fs.geometry().root_index, PathName{{"zzz-absent"}});
        CHECK(absent.status == ResolveStatus::not_found);
    }
}

TEST_CASE("namei treats soft links as leaves") {
    FsImage fs = image_from_text("dir /d\nfile /d/f inline:00\nlink /l /d\n");
    auto leaf = namei(fs, 0, PathName{{"l"}});
    CHECK(leaf.found());
    CHECK(leaf.index == 3);

    auto through = namei(fs, 0, PathName{{"l", "f"}});
    CHECK(through.status == ResolveStatus::not_found);
}

TEST_CASE("namei_links splices the stored path and restarts at root") {
    FsImage fs = image_from_text("dir /d\nfile /d/f inline:00\nlink /l /d\n");
    Index file_index = namei(fs, 0, PathName{{"d", "f"}}).index;

    auto out = namei_links(fs, 0, PathName{{"l", "f"}}, 1);
    CHECK(out.found());
    CHECK(out.index == file_index);
    CHECK(out.links_followed == 1);

    // The textual-substitution oracle: replacing "l" by the link's stored
    // path and resolving link-free lands on the same index.
    auto oracle = namei(fs, 0, PathName{{"d", "f"}});
    CHECK(out.index == oracle.index);

    SUBCASE("budget zero fails at the link") {
        auto exhausted = namei_links(fs, 0, PathName{{"l", "f"}}, 0);
        CHECK(exhausted.status == ResolveStatus::link_budget_exhausted);
    }
    SUBCASE("a trailing link is returned, not followed") {
        auto trailing = namei_links(fs, 0, PathName{{"l"}}, 40);
        CHECK(trailing.found());
        CHECK(trailing.index == 3);
        CHECK(trailing.links_followed == 0);
    }
}

TEST_CASE("a self-loop consumes the whole budget") {
    FsImage fs = image_from_text("link /l /l\n");
    auto out = namei_links(fs, 0, PathName{{"l", "x"}}, 8);
    CHECK(out.status == ResolveStatus::link_budget_exhausted);
    CHECK(out.links_followed == 8);
}

TEST_CASE("namei_links equals namei on link-free images for any budget") {
    std::mt19937_64 rng(0x11ff);
    for (int round = 0; round < 60; ++round) {
        FsImage fs = build_in_memory(random_manifest(rng, {.max_extra_inodes = 8}));
        auto table = oracle_path_table(fs, 4);
        for (const auto& [path, index] : table) {
            auto plain = namei(fs, fs.geometry().root_index, path);
            for (std::size_t budget : {0, 1, 40}) {
                auto linked = namei_links(fs, fs.geometry().root_index, path, budget);
                CHECK(linked.status == plain.status);
                CHECK(linked.index == plain.index);
                CHECK(linked.steps == plain.steps);
            }
        }
    }
}

TEST_CASE("textual substitution oracle over generated single-link images") {
    std::mt19937_64 rng(0x57ab);
    for (int round = 0; round < 80; ++round) {
        // A random link-free tree plus one link to a random directory.
        Manifest manifest = random_manifest(rng, {.max_extra_inodes = 7});
        std::vector<PathName> dirs{PathName{}};
        for (const auto& decl : manifest.declarations)
            if (decl.kind == DeclKind::directory)
                dirs.push_back(decl.path);
        PathName target = dirs[rng() % dirs.size()];
        Declaration link;
        link.kind = DeclKind::link;
        link.path = PathName{{"thelink"}};
        link.link_target = target;
        manifest.declarations.push_back(link);
        FsImage fs = build_in_memory(manifest);

        // Query ["thelink"] ++ suffix for every suffix defined under target.
        auto table = oracle_path_table(fs, 5);
        for (const auto& [path, index] : table) {
            if (path.size() < target.size() ||
                !std::equal(target.elements.begin(), target.elements.end(), path.elements.begin()))
                continue;
            if (path.size() == target.size())
                continue;
            PathName through{{"thelink"}};
            through.elements.insert(through.elements.end(),
                                    path.elements.begin() + std::ptrdiff_t(target.size()),
                                    path.elements.end());
            auto via_link = namei_links(fs, fs.geometry().root_index, through, 1);
            auto substituted = namei(fs, fs.geometry().root_index, path);
            CHECK(via_link.found());
            CHECK(via_link.index == substituted.index);
            CHECK(via_link.links_followed == 1);
        }
    }
}

TEST_CASE("a resolution that succeeds with budget B succeeds identically above B") {
    FsImage fs = image_from_text(
        "dir /d\ndir /d/e\nfile /d/e/f inline:00\nlink /a /d\nlink /b /a/e\n");
    PathName path{{"b", "f"}}; // needs two link traversals
    auto base = namei_links(fs, 0, path, 2);
    REQUIRE(base.found());
    for (std::size_t budget = 2; budget <= 10; ++budget) {
        auto out = namei_links(fs, 0, path, budget);
        CHECK(out.found());
        CHECK(out.index == base.index);
    }
    CHECK(namei_links(fs, 0, path, 1).status == ResolveStatus::link_budget_exhausted);
}

TEST_CASE("beta starts at root") {
    FsImage fs = image_from_text("dir /a\nfile /a/b inline:00\n");
    CHECK(beta(fs, PathName{}).index == fs.geometry().root_index);
    CHECK(beta(fs, PathName{{"a", "b"}}).index == 2);
    CHECK(beta(fs, PathName{{"a", "b", "c"}}).status == ResolveStatus::not_found);
}

TEST_CASE("f_lookup composes alpha after beta") {
    FsImage fs = image_from_text("file /passwords inline:736563726574\n");

    auto root = f_lookup(fs, PathName{});
    REQUIRE(root.found());
    CHECK(root.contents->is_directory());

    auto secret = f_lookup(fs, PathName{{"passwords"}});
    REQUIRE(secret.found());
    CHECK(secret.contents->ordinary() == Bytes{'s', 'e', 'c', 'r', 'e', 't'});

    CHECK(f_lookup(fs, PathName{{"nope"}}).status == LookupStatus::undefined);
}

TEST_CASE("f_lookup is undefined on a dangling entry") {
    Geometry geom;
    Bytes image = build_image_bytes(parse_manifest("file /f inline:00\n"), {}, &geom);
    patch_inode_tag(image, geom, 1, 0); // undefine the target
    FsImage fs = FsImage::from_bytes(std::move(image));
    CHECK(f_lookup(fs, PathName{{"f"}}).status == LookupStatus::undefined);
}

TEST_CASE("f_lookup reports budget exhaustion distinctly") {
    FsImage fs = image_from_text("link /l /l\n");
    CHECK(f_lookup(fs, PathName{{"l", "x"}}, 8).status == LookupStatus::link_budget_exhausted);
}

TEST_CASE("list_entries hides dots and honors the mode") {
    FsImage fs = image_from_text("dir /d\nfile /f inline:00\nlink /l /d\n");
    CHECK(list_entries(fs, PathName{}, ListMode::dirs_only) == std::set<std::string>{"d"});
    CHECK(list_entries(fs, PathName{}, ListMode::all) == std::set<std::string>{"d", "f", "l"});
    CHECK(list_entries(fs, PathName{{"f"}}, ListMode::all).empty());      // not a directory
    CHECK(list_entries(fs, PathName{{"none"}}, ListMode::all).empty());   // undefined
    CHECK(list_entries(fs, PathName{{"d"}}, ListMode::all).empty());      // empty directory
}

TEST_CASE("find covers its three defining cases") {
    SUBCASE("undefined root of the walk") {
        FsImage fs = image_from_text("");
        CHECK(find_paths(fs, PathName{{"ghost"}}, ListMode::all).paths.empty());
    }
    SUBCASE("empty directory") {
        FsImage fs = image_from_text("");
        auto result = find_paths(fs, PathName{}, ListMode::all);
        CHECK(result.paths == std::set<PathName>{PathName{}});
        CHECK(!result.link_budget_exhausted);
    }
    SUBCASE("chain") {
        FsImage fs = image_from_text("dir /a\nfile /a/b inline:00\n");
        auto result = find_paths(fs, PathName{}, ListMode::all);
        CHECK(result.paths ==
              std::set<PathName>{PathName{}, PathName{{"a"}}, PathName{{"a", "b"}}});
    }
    SUBCASE("dirs-only listing skips ordinary children") {
        FsImage fs = image_from_text("dir /a\nfile /a/b inline:00\nfile /c inline:00\n");
        auto result = find_paths(fs, PathName{}, ListMode::dirs_only);
        CHECK(result.paths == std::set<PathName>{PathName{}, PathName{{"a"}}});
    }
    SUBCASE("links are leaves of the walk") {
        FsImage fs = image_from_text("dir /d\nfile /d/f inline:00\nlink /l /d\n");
        auto result = find_paths(fs, PathName{}, ListMode::all);
        CHECK(result.paths.contains(PathName{{"l"}}));
        CHECK(!result.paths.contains(PathName{{"l", "f"}}));
        CHECK(!result.link_budget_exhausted);
    }
    SUBCASE("budget exhaustion under a spliced start path is flagged") {
        FsImage fs = image_from_text("link /l /l\n");
        auto result = find_paths(fs, PathName{{"l", "x"}}, ListMode::all, 8);
        CHECK(result.paths.empty());
        CHECK(result.link_budget_exhausted);
    }
}

TEST_CASE("find matches brute-force enumeration on random clean images") {
    std::mt19937_64 rng(0xf1fd);
    for (int round = 0; round < 150; ++round) {
        FsImage fs = build_in_memory(random_manifest(rng, {.max_extra_inodes = 11}));
        auto result = find_paths(fs, PathName{}, ListMode::all);
        CHECK(result.paths == oracle_defined_dot_free_paths(fs));
        CHECK(!result.link_budget_exhausted);
        CHECK(!result.depth_capped);
        for (const auto& path : result.paths)
            CHECK(path.size() <= fs.geometry().inode_count);
    }
}

TEST_CASE("every prefix of a defined path is a directory") {
    std::mt19937_64 rng(0x9ef1);
    for (int round = 0; round < 80; ++round) {
        FsImage fs = build_in_memory(random_manifest(rng, {.max_extra_inodes = 10}));
        for (const auto& path : oracle_defined_dot_free_paths(fs)) {
            PathName prefix;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                prefix.elements.push_back(path.elements[k]);
                auto out = f_lookup(fs, prefix);
                REQUIRE(out.found());
                CHECK(out.contents->is_directory());
            }
        }
    }
}
