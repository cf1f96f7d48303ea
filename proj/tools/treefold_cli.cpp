// treefold: build, inspect, verify, and benchmark treefold disk images.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treefold/bench.hpp"
#include "treefold/manifest.hpp"
#include "treefold/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1; // NotFound, dirty fsck, bad image
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

treefold::PathName parse_path_arg(const std::string& text) {
    try {
        return treefold::parse_path(text);
    } catch (const treefold::FsError& e) {
        throw UsageError("bad path \"" + text + "\": " + e.what());
    }
}

int run_build(const std::string& manifest_path, const std::string& out_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "cannot read manifest " << manifest_path << '\n';
        return kExitFailure;
    }
    std::ostringstream text;
    text << in.rdbuf();
    treefold::Manifest manifest = treefold::parse_manifest(text.str());
    treefold::Geometry geom = treefold::build_image(manifest, out_path);
    std::cout << "wrote " << out_path << ": " << geom.block_count << " blocks, "
              << geom.inode_count << " inodes\n";
    return kExitOk;
}

int run_resolve(const std::string& image, const std::string& path_text, std::size_t budget) {
    treefold::FsImage fs = treefold::FsImage::open(image);
    treefold::PathName path = parse_path_arg(path_text);
    treefold::ResolveOutcome out = treefold::beta(fs, path, budget);
    switch (out.status) {
    case treefold::ResolveStatus::found:
        std::cout << out.index << '\n';
        return kExitOk;
    case treefold::ResolveStatus::not_found:
        std::cerr << "not found: " << treefold::format_path(path) << '\n';
        return kExitFailure;
    case treefold::ResolveStatus::link_budget_exhausted:
        std::cerr << "link budget exhausted (suspected soft-link loop): "
                  << treefold::format_path(path) << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

int run_cat(const std::string& image, const std::string& path_text, std::size_t budget) {
    treefold::FsImage fs = treefold::FsImage::open(image);
    treefold::PathName path = parse_path_arg(path_text);
    treefold::LookupOutcome out = treefold::f_lookup(fs, path, budget);
    if (!out.found()) {
        std::cerr << "not found: " << treefold::format_path(path) << '\n';
        return kExitFailure;
    }
    if (!out.contents->is_ordinary()) {
        std::cerr << "not an ordinary file: " << treefold::format_path(path) << '\n';
        return kExitFailure;
    }
    const treefold::Bytes& data = out.contents->ordinary();
    std::cout.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    return kExitOk;
}

int run_ls(const std::string& image, const std::string& path_text, bool dirs_only,
           std::size_t budget) {
    treefold::FsImage fs = treefold::FsImage::open(image);
    treefold::PathName path = parse_path_arg(path_text);
    auto mode = dirs_only ? treefold::ListMode::dirs_only : treefold::ListMode::all;
    for (const auto& name : treefold::list_entries(fs, path, mode, budget))
        std::cout << name << '\n';
    return kExitOk;
}

int run_find(const std::string& image, const std::string& path_text, bool paper_list,
             std::size_t budget) {
    treefold::FsImage fs = treefold::FsImage::open(image);
    treefold::PathName path = parse_path_arg(path_text);
    auto mode = paper_list ? treefold::ListMode::dirs_only : treefold::ListMode::all;
    treefold::FindResult result = treefold::find_paths(fs, path, mode, budget);
    for (const auto& found : result.paths)
        std::cout << treefold::format_path(found) << '\n';
    if (result.link_budget_exhausted)
        std::cerr << "warning: link budget exhausted, results are partial\n";
    if (result.depth_capped)
        std::cerr << "warning: depth bound hit, results are partial\n";
    return kExitOk;
}

int run_fsck(const std::string& image, std::size_t budget) {
    treefold::FsImage fs = treefold::FsImage::open(image);
    treefold::CheckReport report = treefold::fsck(fs, budget);
    std::cout << treefold::render_report(report);
    return report.clean() ? kExitOk : kExitFailure;
}

int run_bench(const treefold::BenchConfig& config) {
    treefold::BenchResult result = treefold::bench_report(config);
    std::cout << treefold::render_bench_table(result);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"read-only file system over a simulated block device"};
    app.require_subcommand(1);

    std::string manifest_path, image, path_text, out_path;
    std::size_t budget = treefold::kDefaultLinkBudget;

    auto* build = app.add_subcommand("build", "build an image from a manifest");
    build->add_option("--manifest", manifest_path, "manifest file")->required();
    build->add_option("--out", out_path, "image file to write")->required();

    auto* resolve = app.add_subcommand("resolve", "resolve a path to an inode index");
    resolve->add_option("image", image)->required();
    resolve->add_option("path", path_text, "\"\" is the root path")->required();
    resolve->add_option("--links", budget, "soft-link budget");

    auto* cat = app.add_subcommand("cat", "print an ordinary file's bytes");
    cat->add_option("image", image)->required();
    cat->add_option("path", path_text)->required();
    cat->add_option("--links", budget, "soft-link budget");

    bool dirs_only = false, all = false;
    auto* ls = app.add_subcommand("ls", "list a directory");
    ls->add_option("image", image)->required();
    ls->add_option("path", path_text)->required();
    ls->add_flag("--dirs-only", dirs_only, "directory-valued entries only");
    ls->add_flag("--all", all, "every defined entry (default)");

    bool paper_list = false;
    auto* find = app.add_subcommand("find", "list all paths rooted at a path");
    find->add_option("image", image)->required();
    find->add_option("path", path_text)->required();
    find->add_option("--links", budget, "soft-link budget");
    find->add_flag("--paper-list", paper_list, "recurse over directory-valued entries only");

    auto* fsck = app.add_subcommand("fsck", "verify image consistency");
    fsck->add_option("image", image)->required();
    fsck->add_option("--links", budget, "soft-link budget for loop detection");

    treefold::BenchConfig config;
    std::string dist = "uniform";
    auto* bench = app.add_subcommand("bench", "compare lookup strategies");
    bench->add_option("--n", config.file_count, "files in the synthetic image");
    bench->add_option("--k", config.fanout, "children per directory");
    bench->add_option("--seed", config.seed, "workload seed");
    bench->add_option("--queries", config.queries, "queries per strategy");
    bench->add_option("--dist", dist)->check(CLI::IsMember({"uniform", "zipf"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed())
            return run_build(manifest_path, out_path);
        if (resolve->parsed())
            return run_resolve(image, path_text, budget);
        if (cat->parsed())
            return run_cat(image, path_text, budget);
        if (ls->parsed())
            return run_ls(image, path_text, dirs_only, budget);
        if (find->parsed())
            return run_find(image, path_text, paper_list, budget);
        if (fsck->parsed())
            return run_fsck(image, budget);
        if (bench->parsed()) {
            config.workload =
                dist == "zipf" ? treefold::Workload::zipf : treefold::Workload::uniform;
            return run_bench(config);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const treefold::FsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
