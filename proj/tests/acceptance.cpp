// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance            run everything
//   acceptance --only N   run criterion N (1-7)

#include "fixtures.hpp"
#include "oracles.hpp"

#include "wmn/channel_assignment.hpp"
#include "wmn/conflict_graph.hpp"
#include "wmn/evaluation.hpp"
#include "wmn/experiment.hpp"
#include "wmn/interference_metrics.hpp"
#include "wmn/io.hpp"
#include "wmn/netsim.hpp"
#include "wmn/topology.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

using namespace wmn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(std::string why)
    {
        if (pass)
            detail.clear();
        else
            detail += "; ";
        pass = false;
        detail += std::move(why);
    }
};

// 1. PE {0,1,2,3} over 6 CAs -> DoC {100, 93.33, 86.67, 80}.
Outcome doc_formula()
{
    Outcome o;
    const std::size_t pe[] = {0, 1, 2, 3};
    const double want[] = {100.00, 93.33, 86.67, 80.00};
    std::string got;
    for (int i = 0; i < 4; ++i) {
        const double d = degree_of_confidence(pe[i], 6);
        got += fmt::format("{}{:.2f}", i ? " " : "", d);
        if (std::llround(d * 100) != std::llround(want[i] * 100))
            o.fail(fmt::format("PE {} gave {:.2f}, want {:.2f}", pe[i], d, want[i]));
    }
    const Grid<std::size_t> table_pe{{{1, 2, 1, 2}, {3, 2, 3, 2}, {0, 1, 0, 1}}};
    const Grid<double> table{{{93.33, 86.67, 93.33, 86.67}, {80, 86.67, 80, 86.67}, {100, 93.33, 100, 93.33}}};
    if (doc_grid(table_pe, 6) != table)
        o.fail("reference 4x3 table not reproduced");
    if (o.pass)
        o.detail = "DoC = " + got + "; reference 4x3 table reproduced";
    return o;
}

// 2. Ten generator seeds meet the density and clustering targets.
Outcome topology_targets()
{
    Outcome o;
    double dmin = 1, dmax = 0, cmin = 1, cmax = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenTargets g;
        g.seed = seed;
        const MeshTopology t = generate_rwmn(g);
        const GlobalMetrics m = global_metrics(t);
        dmin = std::min(dmin, m.density);
        dmax = std::max(dmax, m.density);
        cmin = std::min(cmin, m.clustering_coefficient);
        cmax = std::max(cmax, m.clustering_coefficient);
        if (t.node_count() != 50 || !m.connected || std::abs(m.density - 0.083) > 0.005 + 1e-12
            || std::abs(m.clustering_coefficient - 0.37) > 0.05 + 1e-12)
            o.fail(fmt::format("seed {}: n={} connected={} density={:.4f} cc={:.4f}", seed, t.node_count(),
                               m.connected, m.density, m.clustering_coefficient));
    }
    if (o.pass)
        o.detail = fmt::format("seeds 1-10: density [{:.4f}, {:.4f}], cc [{:.4f}, {:.4f}], all connected", dmin, dmax,
                               cmin, cmax);
    return o;
}

oracle::Channels oracle_channels(const LinkChannelMap& m)
{
    return {m.channel.begin(), m.channel.end()};
}

// Random small mesh with at most 10 links and a random (possibly partial)
// channel map.
struct Case {
    MeshTopology topo;
    LinkChannelMap lcm;
};

Case random_case(std::mt19937_64& gen, std::size_t channels, bool allow_broken)
{
    Case c;
    do
        c.topo = oracle::random_small_topology(gen, 9, 10, 450.0);
    while (c.topo.link_count() == 0);
    std::uniform_int_distribution<ChannelId> ch(0, static_cast<ChannelId>(channels - 1));
    std::bernoulli_distribution broken(allow_broken ? 0.1 : 0.0);
    c.lcm.channel_count = channels;
    for (std::size_t l = 0; l < c.topo.link_count(); ++l)
        c.lcm.channel.push_back(broken(gen) ? std::nullopt : std::optional<ChannelId>(ch(gen)));
    if (c.lcm.resolved_count() == 0)
        c.lcm.channel[0] = 0;
    c.lcm.binding.assign(c.topo.link_count(), std::nullopt);
    return c;
}

// 3. TID, interference degree, X-link sets and CXLS against brute force.
Outcome oracle_equivalence()
{
    Outcome o;
    std::mt19937_64 gen(2024);
    std::size_t links = 0, sets = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Case c = random_case(gen, 1 + trial % 4, true);
        const unsigned x = 1 + static_cast<unsigned>(trial % 3);
        const ConflictGraph cg = build_emmcg(c.topo, x);
        const auto edges = oracle::conflict_edges(c.topo, x);
        const auto oc = oracle_channels(c.lcm);
        links += c.topo.link_count();
        if (total_interference_degree(cg, c.lcm) != oracle::tid(edges, oc))
            o.fail(fmt::format("graph {}: TID", trial));
        for (LinkId l = 0; l < c.topo.link_count(); ++l)
            if (c.lcm.resolved(l) && interference_degree(cg, c.lcm, l) != oracle::interference_degree(edges, oc, l))
                o.fail(fmt::format("graph {}: interference degree of link {}", trial, l));
        const auto got = enumerate_x_link_sets(c.topo, c.lcm, x);
        const auto want = oracle::x_link_sets(c.topo, oc, x);
        sets += want.size();
        if (std::set<XLinkSet>(got.begin(), got.end()) != want || got.size() != want.size())
            o.fail(fmt::format("graph {}: X-link sets", trial));
        if (cxls_wt(c.topo, c.lcm, cg, x) != oracle::cxls(c.topo, edges, oc, x))
            o.fail(fmt::format("graph {}: CXLS", trial));
    }
    if (o.pass)
        o.detail = fmt::format("100 graphs, {} links, {} X-link sets: all four quantities exact", links, sets);
    return o;
}

// 4. Permutation invariance, CDAL zero iff even, SINGLE maximal.
Outcome metric_invariants()
{
    Outcome o;
    std::mt19937_64 gen(4048);
    const int cases = 1200;
    for (int trial = 0; trial < cases; ++trial) {
        const std::size_t channels = 2 + trial % 4;
        const Case c = random_case(gen, channels, false);
        const ConflictGraph cg = build_emmcg(c.topo, 2);
        const CppmValues base = compute_cppms(c.topo, c.lcm, cg);

        std::vector<ChannelId> perm(channels);
        for (ChannelId i = 0; i < channels; ++i)
            perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        LinkChannelMap moved = c.lcm;
        for (auto& ch : moved.channel)
            ch = perm[*ch];
        const CppmValues pv = compute_cppms(c.topo, moved, cg);
        if (pv.tid != base.tid || std::abs(pv.cdal - base.cdal) > 1e-12 || pv.cxls != base.cxls)
            o.fail(fmt::format("case {}: relabelling changed a metric", trial));

        const auto loads = channel_loads(c.lcm);
        const bool even = std::all_of(loads.begin(), loads.end(), [&](std::size_t x) { return x == loads[0]; });
        if ((base.cdal == 0.0) != even)
            o.fail(fmt::format("case {}: CDAL zero/even mismatch", trial));

        LinkChannelMap single = c.lcm;
        for (auto& ch : single.channel)
            ch = 0;
        const CppmValues sv = compute_cppms(c.topo, single, cg);
        if (sv.tid < base.tid || sv.cxls < base.cxls)
            o.fail(fmt::format("case {}: SINGLE not maximal", trial));
    }
    if (o.pass)
        o.detail = fmt::format("{} randomized cases: relabel invariance, CDAL=0 iff even, SINGLE maximal", cases);
    return o;
}

// 5. (a) lone flow, (b) saturated collision, (c) SINGLE <= SPREAD on 10 seeds.
Outcome simulator_sanity()
{
    Outcome o;
    {
        MeshTopology t = fixture::path(4, 200.0, 2);
        ChannelAssignment ca;
        ca.scheme_name = "HAND";
        ca.channel_count = 4;
        ca.radio_channels = {{0, 0}, {0, 1}, {1, 2}, {2, 2}};
        const LinkChannelMap lcm = resolve_link_channels(t, ca);
        const SimResult r = simulate(t, lcm, build_emmcg(t, 2), {"a", {{0, 3}}}, SimParams{});
        if (r.pdr_pct != 100.0 || r.dfc != 0)
            o.fail(fmt::format("(a) pdr={} dfc={}", r.pdr_pct, r.dfc));
    }
    {
        const auto t = fixture::make_topology({{0, 0}, {200, 0}, {0, 100}, {200, 100}}, {{0, 1}, {2, 3}});
        const LinkChannelMap lcm = resolve_link_channels(t, fixture::uniform(t, 0));
        SimParams p;
        p.mode = TransportMode::udp;
        p.udp_tx_prob = 1.0;
        p.udp_interval_ms = 0.0;
        const SimResult r = simulate(t, lcm, build_emmcg(t, 2), {"b", {{0, 1}, {2, 3}}}, p);
        if (r.pdr_pct != 0.0 || r.packets_sent == 0)
            o.fail(fmt::format("(b) pdr={} sent={}", r.pdr_pct, r.packets_sent));
    }
    double worst_margin = INFINITY;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.generator.seed = seed;
        cfg.schemes = {Scheme::single, Scheme::spread};
        const ExperimentRun run = run_experiment(cfg);
        const double single = run.outcomes[0].npm.throughput_mbps;
        const double spread = run.outcomes[1].npm.throughput_mbps;
        worst_margin = std::min(worst_margin, spread - single);
        if (single > spread)
            o.fail(fmt::format("(c) seed {}: SINGLE {:.3f} > SPREAD {:.3f} Mbps", seed, single, spread));
    }
    if (o.pass)
        o.detail = fmt::format("(a) pdr 100, dfc 0; (b) pdr 0; (c) SPREAD - SINGLE >= {:.3f} Mbps on seeds 1-10",
                               worst_margin);
    return o;
}

std::map<std::string, std::string> snapshot(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            files[fs::relative(e.path(), root).string()] = read_text_file(e.path());
    return files;
}

// Shared by criteria 6 and 7: the default pipeline.
const ExperimentRun& default_run()
{
    static const ExperimentRun run = [] {
        ExperimentConfig cfg;
        cfg.out_dir = fs::temp_directory_path() / "wmnca_acceptance";
        fs::remove_all(cfg.out_dir);
        return run_experiment(cfg);
    }();
    return run;
}

// 6. Default pipeline is complete and byte-identical across two runs.
Outcome end_to_end()
{
    Outcome o;
    const ExperimentRun& first = default_run();
    const fs::path out = first.config.out_dir;
    write_experiment(first);
    const auto a = snapshot(out);
    fs::remove_all(out);
    const ExperimentRun second = run_experiment(first.config);
    write_experiment(second);
    const auto b = snapshot(out);

    if (first.outcomes.size() != 6)
        o.fail(fmt::format("{} schemes", first.outcomes.size()));
    for (const auto& s : first.outcomes)
        if (s.tcp.size() != 5 || s.udp.size() != 5)
            o.fail(fmt::format("{}: {} tcp / {} udp runs", scheme_name(s.scheme), s.tcp.size(), s.udp.size()));
    std::size_t series = 0;
    for (const auto& row : first.report.series)
        for (const auto& cell : row)
            series += cell.size() == 6;
    if (series != 12)
        o.fail(fmt::format("{} complete correlation series", series));
    std::size_t plots = 0;
    for (const auto& [name, text] : a)
        plots += name.rfind("report/plot_", 0) == 0;
    if (plots != 12)
        o.fail(fmt::format("{} plot files", plots));
    for (const char* f : {"report/pe.csv", "report/doc.csv", "results/metrics.csv", "results/sim_results.csv"})
        if (!a.contains(f))
            o.fail(fmt::format("missing {}", f));
    if (a != b)
        o.fail("second run differs");
    fs::remove_all(out);
    if (o.pass)
        o.detail = fmt::format("6 schemes x 5 cases x 2 modes; 12 PE/DoC cells, 12 series; {} files byte-identical",
                               a.size());
    return o;
}

// 7. Rank correlation of TID against averaged throughput (negative) and DFC (positive).
Outcome spearman_directions()
{
    Outcome o;
    const ExperimentRun& run = default_run();
    std::vector<double> tid, thr, dfc;
    for (const auto& s : run.outcomes) {
        tid.push_back(s.cppm.tid);
        thr.push_back(s.npm.throughput_mbps);
        dfc.push_back(s.npm.dfc);
    }
    const double rt = spearman(tid, thr);
    const double rd = spearman(tid, dfc);
    if (!(rt < 0))
        o.fail(fmt::format("rho(TID, Throughput) = {:.3f}, want < 0", rt));
    if (!(rd > 0)) {
        std::string vals;
        for (double d : dfc)
            vals += fmt::format(" {:g}", d);
        o.fail(fmt::format("rho(TID, DFC) = {:.3f}, want > 0 (DFC per scheme:{})", rd, vals));
    }
    if (o.pass)
        o.detail = fmt::format("rho(TID, Throughput) = {:.3f}, rho(TID, DFC) = {:.3f}", rt, rd);
    else
        o.detail += fmt::format(" [rho(TID, Throughput) = {:.3f}]", rt);
    return o;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {"DoC formula reproduction", doc_formula},
        {"topology targets", topology_targets},
        {"oracle equivalence", oracle_equivalence},
        {"metric invariants", metric_invariants},
        {"simulator sanity", simulator_sanity},
        {"end-to-end pipeline", end_to_end},
        {"TID rank-correlation directions", spearman_directions},
    };
    std::size_t only = 0;
    if (argc == 3 && std::string(argv[1]) == "--only")
        only = std::stoul(argv[2]);
    else if (argc != 1) {
        fmt::print(stderr, "usage: acceptance [--only N]\n");
        return 2;
    }
    if (only > criteria.size()) {
        fmt::print(stderr, "no criterion {}\n", only);
        return 2;
    }

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && only != i + 1)
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[i].run();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("{} [{}] {}: {} ({:.1f} s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, r.detail, secs);
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
