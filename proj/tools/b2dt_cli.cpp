// b2dt: build, query and benchmark compressed binary matrices
// (k²-tree baseline and the 2D block tree hybrid).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "b2dt/block_tree_2d.hpp"
#include "b2dt/container.hpp"
#include "b2dt/generate.hpp"
#include "b2dt/k2_tree.hpp"

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
}

b2dt::BitMatrix read_input(const std::string& path, const std::string& format, std::uint32_t k) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read input file " + path);
    if (format == "edgelist") return b2dt::parse_edgelist(in, k);
    if (format == "pbm") return b2dt::parse_pbm(in, k);
    throw std::runtime_error("unknown input format " + format);
}

std::uint64_t count_edges(const b2dt::Container& c) {
    // total 1s, recovered row by row through the compressed structure
    std::uint64_t total = 0;
    std::uint32_t side = c.side();
    for (std::uint32_t y = 0; y < side; ++y) {
        b2dt::Grid row = c.kind == b2dt::StructureKind::K2Tree
                             ? c.k2->region(b2dt::Region::row(y, side))
                             : c.bt->access(b2dt::Region::row(y, side));
        for (std::uint32_t x = 0; x < side; ++x) total += row.at(x, 0);
    }
    return total;
}

b2dt::Region parse_region(const std::string& spec) {
    b2dt::Region r;
    char c1, c2, c3;
    std::istringstream ss(spec);
    if (!(ss >> r.x_min >> c1 >> r.y_min >> c2 >> r.x_max >> c3 >> r.y_max) ||
        c1 != ',' || c2 != ',' || c3 != ',' || !ss.eof() ||
        r.x_min > r.x_max || r.y_min > r.y_max)
        throw std::runtime_error("bad region '" + spec + "', expected x1,y1,x2,y2");
    return r;
}

int cmd_build(const std::string& input, const std::string& format, const std::string& structure,
              std::uint32_t k, std::uint64_t seed, std::uint64_t modulus, const std::string& output) {
    b2dt::BitMatrix m = read_input(input, format, k);
    std::uint64_t edges = m.count_ones();
    std::cout << "rows=" << m.rows() << "\ncols=" << m.cols() << "\nside=" << m.side()
              << "\nk=" << k << "\nedges=" << edges << "\n";

    auto report = [&](const char* prefix, std::uint64_t bits, std::uint64_t ns,
                      const std::string& path) {
        std::cout << prefix << "total_bits=" << bits << "\n"
                  << prefix << "bpe=" << (edges ? double(bits) / double(edges) : 0.0) << "\n"
                  << prefix << "build_ns=" << ns << "\n"
                  << prefix << "output=" << path << "\n";
    };

    std::uint64_t k2_bits = 0, bt_bits = 0;
    if (structure == "k2" || structure == "both") {
        auto t0 = Clock::now();
        b2dt::K2Tree t = b2dt::K2Tree::build(m, k);
        auto t1 = Clock::now();
        std::string path = structure == "both" ? output + ".k2t" : output;
        b2dt::store_file(t, path);
        k2_bits = t.total_bits();
        report(structure == "both" ? "k2_" : "", k2_bits, elapsed_ns(t0, t1), path);
    }
    if (structure == "bt2d" || structure == "both") {
        b2dt::BuildParams params;
        params.seed = seed;
        params.modulus = modulus;
        auto t0 = Clock::now();
        b2dt::TwoDBlockTree t = b2dt::TwoDBlockTree::build(m, k, params);
        auto t1 = Clock::now();
        std::string path = structure == "both" ? output + ".b2dt" : output;
        b2dt::store_file(t, path);
        bt_bits = t.total_bits();
        report(structure == "both" ? "bt2d_" : "", bt_bits, elapsed_ns(t0, t1), path);
    }
    if (structure == "both")
        std::cout << "bits_ratio=" << double(bt_bits) / double(k2_bits) << "\n";
    return 0;
}

int cmd_query(const std::string& container, std::uint32_t node, const std::string& direction) {
    b2dt::Container c = b2dt::load_file(container);
    std::vector<std::uint32_t> ids;
    if (direction == "direct")
        ids = c.kind == b2dt::StructureKind::K2Tree ? c.k2->direct_neighbors(node)
                                                    : c.bt->direct_neighbors(node);
    else if (direction == "reverse")
        ids = c.kind == b2dt::StructureKind::K2Tree ? c.k2->reverse_neighbors(node)
                                                    : c.bt->reverse_neighbors(node);
    else
        throw std::runtime_error("direction must be direct or reverse");
    for (std::uint32_t id : ids) std::cout << id << "\n";
    return 0;
}

int cmd_extract(const std::string& container, const std::string& region_spec,
                const std::string& output) {
    b2dt::Container c = b2dt::load_file(container);
    b2dt::Region r = parse_region(region_spec);
    b2dt::Grid g = c.kind == b2dt::StructureKind::K2Tree ? c.k2->region(r) : c.bt->access(r);
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output);
    b2dt::write_pbm_p4(g, out);
    return 0;
}

int cmd_stats(const std::string& container) {
    b2dt::Container c = b2dt::load_file(container);
    std::uint64_t edges = count_edges(c);
    std::cout << "kind=" << (c.kind == b2dt::StructureKind::K2Tree ? "k2" : "bt2d") << "\n"
              << "k=" << c.k() << "\nside=" << c.side() << "\nrows=" << c.logical_rows()
              << "\ncols=" << c.logical_cols() << "\nedges=" << edges << "\n";
    if (c.kind == b2dt::StructureKind::K2Tree) {
        std::cout << "t_bits=" << c.k2->T().size() << "\nl_bits=" << c.k2->L().size() << "\n"
                  << "total_bits=" << c.k2->total_bits() << "\n";
        std::cout << "bpe=" << (edges ? double(c.k2->total_bits()) / double(edges) : 0.0) << "\n";
    } else {
        b2dt::SizeBreakdown b = c.bt->size_breakdown();
        std::cout << "t_bits=" << b.t_bits << "\nl_bits=" << b.l_bits << "\nn_bits=" << b.n_bits
                  << "\np_bits=" << b.p_bits << "\no_bits=" << b.o_bits << "\nd_bits=" << b.d_bits
                  << "\ntotal_bits=" << b.total() << "\n"
                  << "bpe=" << (edges ? double(b.total()) / double(edges) : 0.0) << "\n"
                  << "kr_modulus=" << c.bt->kr_modulus() << "\nkr_base=" << c.bt->kr_base() << "\n";
    }
    return 0;
}

struct Timing {
    double mean_ns = 0, median_ns = 0;
};

Timing summarize(std::vector<std::uint64_t>& ns) {
    Timing t;
    if (ns.empty()) return t;
    double sum = 0;
    for (auto v : ns) sum += double(v);
    t.mean_ns = sum / double(ns.size());
    std::sort(ns.begin(), ns.end());
    t.median_ns = double(ns[ns.size() / 2]);
    return t;
}

int cmd_bench(const std::vector<std::string>& containers, std::uint64_t queries,
              std::uint64_t seed) {
    if (containers.empty() || containers.size() > 2)
        throw std::runtime_error("bench takes one or two containers");
    std::vector<b2dt::Container> cs;
    for (const auto& path : containers) cs.push_back(b2dt::load_file(path));
    if (cs.size() == 2 &&
        (cs[0].side() != cs[1].side() || cs[0].logical_rows() != cs[1].logical_rows() ||
         cs[0].logical_cols() != cs[1].logical_cols()))
        throw std::runtime_error("bench: containers describe different matrices");

    std::uint32_t rows = cs[0].logical_rows();
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> sample(queries);
    std::uint64_t sample_sum = 0;
    for (auto& s : sample) {
        s = static_cast<std::uint32_t>(rng() % rows);
        sample_sum += s;
    }
    std::cout << "queries=" << queries << "\nseed=" << seed << "\nsample_sum=" << sample_sum << "\n";

    std::vector<double> direct_means, reverse_means;
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        const b2dt::Container& c = cs[ci];
        std::string prefix = (c.kind == b2dt::StructureKind::K2Tree ? "k2_" : "bt2d_");
        if (cs.size() == 2 && cs[0].kind == cs[1].kind) prefix = "c" + std::to_string(ci) + "_";
        std::uint64_t bits = c.kind == b2dt::StructureKind::K2Tree ? c.k2->total_bits()
                                                                   : c.bt->total_bits();
        std::uint64_t edges = count_edges(c);
        std::cout << prefix << "total_bits=" << bits << "\n"
                  << prefix << "bpe=" << (edges ? double(bits) / double(edges) : 0.0) << "\n";

        b2dt::QueryStats stats;
        std::vector<std::uint64_t> dns(sample.size()), rns(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) {
            auto t0 = Clock::now();
            auto ids = c.kind == b2dt::StructureKind::K2Tree
                           ? c.k2->direct_neighbors(sample[i])
                           : c.bt->direct_neighbors(sample[i], &stats);
            auto t1 = Clock::now();
            dns[i] = elapsed_ns(t0, t1);
            (void)ids;
        }
        for (std::size_t i = 0; i < sample.size(); ++i) {
            auto t0 = Clock::now();
            auto ids = c.kind == b2dt::StructureKind::K2Tree
                           ? c.k2->reverse_neighbors(sample[i])
                           : c.bt->reverse_neighbors(sample[i], &stats);
            auto t1 = Clock::now();
            rns[i] = elapsed_ns(t0, t1);
            (void)ids;
        }
        Timing dt = summarize(dns), rt = summarize(rns);
        std::cout << prefix << "direct_mean_ns=" << dt.mean_ns << "\n"
                  << prefix << "direct_median_ns=" << dt.median_ns << "\n"
                  << prefix << "reverse_mean_ns=" << rt.mean_ns << "\n"
                  << prefix << "reverse_median_ns=" << rt.median_ns << "\n";
        direct_means.push_back(dt.mean_ns);
        reverse_means.push_back(rt.mean_ns);
        if (c.kind == b2dt::StructureKind::BlockTree2D) {
            std::cout << prefix << "link_hops=" << stats.link_hops << "\n"
                      << prefix << "upwalk_calls=" << stats.upwalk_calls << "\n"
                      << prefix << "upwalk_mean=" << stats.mean_upwalk() << "\n";
        }
    }
    if (cs.size() == 2) {
        std::uint64_t b0 = cs[0].kind == b2dt::StructureKind::K2Tree ? cs[0].k2->total_bits()
                                                                     : cs[0].bt->total_bits();
        std::uint64_t b1 = cs[1].kind == b2dt::StructureKind::K2Tree ? cs[1].k2->total_bits()
                                                                     : cs[1].bt->total_bits();
        std::cout << "ratio_bits=" << double(b1) / double(b0) << "\n"
                  << "ratio_direct_mean=" << direct_means[1] / direct_means[0] << "\n"
                  << "ratio_reverse_mean=" << reverse_means[1] / reverse_means[0] << "\n";
    }
    return 0;
}

int cmd_gen(const std::string& kind, std::uint32_t side, std::uint32_t block, double density,
            std::uint32_t copies, std::uint64_t seed, std::uint32_t k, const std::string& output) {
    b2dt::BitMatrix m;
    if (kind == "uniform")
        m = b2dt::gen_uniform(side, density, seed, k);
    else if (kind == "tiled")
        m = b2dt::gen_tiled(side, block, density, seed, k);
    else if (kind == "shifted")
        m = b2dt::gen_shifted(side, block, density, copies, seed, k);
    else
        throw std::runtime_error("gen kind must be uniform, tiled or shifted");
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output);
    b2dt::write_pbm_p4(b2dt::matrix_to_grid(m), out);
    std::cout << "side=" << m.side() << "\nedges=" << m.count_ones() << "\noutput=" << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed binary matrices: k2-tree and 2D block tree"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "build a compressed structure from a matrix");
    std::string in_path, format = "edgelist", structure = "bt2d", out_path;
    std::uint32_t k = 2;
    std::uint64_t seed = 0, modulus = (1ull << 61) - 1;
    build->add_option("input", in_path, "input file")->required();
    build->add_option("--format", format, "edgelist|pbm")->capture_default_str();
    build->add_option("--structure", structure, "k2|bt2d|both")->capture_default_str();
    build->add_option("--k", k, "tree arity parameter")->capture_default_str();
    build->add_option("--seed", seed, "fingerprint base seed")->capture_default_str();
    build->add_option("--modulus", modulus, "fingerprint modulus")->capture_default_str();
    build->add_option("-o,--output", out_path, "output container (prefix when --structure both)")
        ->required();

    // query
    auto* query = app.add_subcommand("query", "list neighbors of a node");
    std::string q_container, direction = "direct";
    std::uint32_t node = 0;
    query->add_option("container", q_container)->required();
    query->add_option("node", node)->required();
    query->add_option("--direction", direction, "direct|reverse")->capture_default_str();

    // extract
    auto* extract = app.add_subcommand("extract", "extract a region as a P4 bitmap");
    std::string e_container, region_spec, e_out;
    extract->add_option("container", e_container)->required();
    extract->add_option("--region", region_spec, "x1,y1,x2,y2")->required();
    extract->add_option("-o,--output", e_out)->required();

    // stats
    auto* stats = app.add_subcommand("stats", "size breakdown of a container");
    std::string s_container;
    stats->add_option("container", s_container)->required();

    // bench
    auto* bench = app.add_subcommand("bench", "neighbor-query benchmark");
    std::vector<std::string> b_containers;
    std::uint64_t b_queries = 1000, b_seed = 0;
    bench->add_option("containers", b_containers, "one or two containers")->required();
    bench->add_option("--queries", b_queries)->capture_default_str();
    bench->add_option("--seed", b_seed)->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate fixture matrices as P4 bitmaps");
    std::string g_kind = "uniform", g_out;
    std::uint32_t g_side = 256, g_block = 32, g_copies = 4, g_k = 2;
    double g_density = 0.1;
    std::uint64_t g_seed = 0;
    gen->add_option("--kind", g_kind, "uniform|tiled|shifted")->capture_default_str();
    gen->add_option("--side", g_side)->capture_default_str();
    gen->add_option("--block", g_block)->capture_default_str();
    gen->add_option("--density", g_density)->capture_default_str();
    gen->add_option("--copies", g_copies)->capture_default_str();
    gen->add_option("--seed", g_seed)->capture_default_str();
    gen->add_option("--k", g_k)->capture_default_str();
    gen->add_option("-o,--output", g_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build->parsed()) return cmd_build(in_path, format, structure, k, seed, modulus, out_path);
        if (query->parsed()) return cmd_query(q_container, node, direction);
        if (extract->parsed()) return cmd_extract(e_container, region_spec, e_out);
        if (stats->parsed()) return cmd_stats(s_container);
        if (bench->parsed()) return cmd_bench(b_containers, b_queries, b_seed);
        if (gen->parsed()) return cmd_gen(g_kind, g_side, g_block, g_density, g_copies, g_seed, g_k, g_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
