#include "wmn/experiment.hpp"

#include "wmn/io.hpp"
#include "wmn/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <set>
#include <sstream>

namespace wmn {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where)
{
    if (!j.is_object())
        throw Error(fmt::format("[config] `{}` must be an object", where));
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw Error(fmt::format("[config] unknown key `{}` in {}", key, where));
}

template <typename T>
void read_opt(const json& j, const char* key, T& out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        reject_unknown(j, {"seed", "topology", "channels", "ir_tr_ratio", "schemes", "flow_counts", "sim",
                           "evaluation", "out"},
                       "config");
        read_opt(j, "seed", cfg.seed);
        cfg.generator.seed = cfg.seed;
        if (j.contains("topology")) {
            const json& t = j.at("topology");
            reject_unknown(t, {"file", "generate"}, "topology");
            if (t.contains("file"))
                cfg.topology_file = t.at("file").get<std::string>();
            if (t.contains("generate")) {
                const json& g = t.at("generate");
                reject_unknown(g, {"nodes", "density", "density_tol", "cc", "cc_tol", "radios_per_node", "tx_range",
                                   "area", "steps_per_placement", "max_placements", "seed"},
                               "topology.generate");
                GenTargets& gt = cfg.generator;
                read_opt(g, "nodes", gt.node_count);
                read_opt(g, "density", gt.density_target);
                read_opt(g, "density_tol", gt.density_tol);
                read_opt(g, "cc", gt.cc_target);
                read_opt(g, "cc_tol", gt.cc_tol);
                read_opt(g, "radios_per_node", gt.radios_per_node);
                read_opt(g, "tx_range", gt.tx_range);
                read_opt(g, "steps_per_placement", gt.steps_per_placement);
                read_opt(g, "max_placements", gt.max_placements);
                read_opt(g, "seed", gt.seed);
                if (g.contains("area")) {
                    const auto area = g.at("area").get<std::vector<double>>();
                    if (area.size() != 2)
                        throw Error("[config] topology.generate.area must be [width, height]");
                    gt.area = {area[0], area[1]};
                }
            }
        }
        read_opt(j, "channels", cfg.channel_count);
        read_opt(j, "ir_tr_ratio", cfg.ir_tr_ratio);
        if (j.contains("schemes")) {
            cfg.schemes.clear();
            for (const auto& s : j.at("schemes"))
                cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
        }
        read_opt(j, "flow_counts", cfg.flow_counts);
        if (j.contains("sim")) {
            const json& s = j.at("sim");
            reject_unknown(s, {"phy_rate_mbps", "mss_bytes", "udp_packet_bytes", "file_bytes", "slot_us", "horizon_s",
                               "udp_interval_ms", "udp_tx_prob", "queue_limit", "tcp_hidden_interference",
                               "mac_retry_limit", "tcp_min_rto_ms"},
                           "sim");
            SimParams& p = cfg.sim;
            read_opt(s, "phy_rate_mbps", p.phy_rate_mbps);
            read_opt(s, "mss_bytes", p.mss_bytes);
            read_opt(s, "udp_packet_bytes", p.udp_packet_bytes);
            read_opt(s, "file_bytes", p.file_bytes);
            read_opt(s, "slot_us", p.slot_us);
            read_opt(s, "horizon_s", p.horizon_s);
            read_opt(s, "udp_interval_ms", p.udp_interval_ms);
            read_opt(s, "udp_tx_prob", p.udp_tx_prob);
            read_opt(s, "queue_limit", p.queue_limit);
            read_opt(s, "tcp_hidden_interference", p.tcp_hidden_interference);
            read_opt(s, "mac_retry_limit", p.mac_retry_limit);
            read_opt(s, "tcp_min_rto_ms", p.tcp_min_rto_ms);
        }
        if (j.contains("evaluation")) {
            const json& e = j.at("evaluation");
            reject_unknown(e, {"cppm_eps", "npm_eps_fraction"}, "evaluation");
            read_opt(e, "cppm_eps", cfg.eval.cppm_eps);
            read_opt(e, "npm_eps_fraction", cfg.eval.npm_eps_fraction);
        }
        if (j.contains("out"))
            cfg.out_dir = j.at("out").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(fmt::format("[config] {}", e.what()));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_text_file(path));
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    json j;
    j["seed"] = cfg.seed;
    const GenTargets& g = cfg.generator;
    json topo;
    if (cfg.topology_file)
        topo["file"] = cfg.topology_file->string();
    topo["generate"] = {{"nodes", g.node_count},
                        {"density", g.density_target},
                        {"density_tol", g.density_tol},
                        {"cc", g.cc_target},
                        {"cc_tol", g.cc_tol},
                        {"radios_per_node", g.radios_per_node},
                        {"tx_range", g.tx_range},
                        {"area", {g.area.width, g.area.height}},
                        {"steps_per_placement", g.steps_per_placement},
                        {"max_placements", g.max_placements},
                        {"seed", g.seed}};
    j["topology"] = topo;
    j["channels"] = cfg.channel_count;
    j["ir_tr_ratio"] = cfg.ir_tr_ratio;
    j["schemes"] = json::array();
    for (Scheme s : cfg.schemes)
        j["schemes"].push_back(std::string(scheme_name(s)));
    j["flow_counts"] = cfg.flow_counts;
    const SimParams& p = cfg.sim;
    j["sim"] = {{"phy_rate_mbps", p.phy_rate_mbps},
                {"mss_bytes", p.mss_bytes},
                {"udp_packet_bytes", p.udp_packet_bytes},
                {"file_bytes", p.file_bytes},
                {"slot_us", p.slot_us},
                {"horizon_s", p.horizon_s},
                {"udp_interval_ms", p.udp_interval_ms},
                {"udp_tx_prob", p.udp_tx_prob},
                {"queue_limit", p.queue_limit},
                {"tcp_hidden_interference", p.tcp_hidden_interference},
                {"mac_retry_limit", p.mac_retry_limit},
                {"tcp_min_rto_ms", p.tcp_min_rto_ms}};
    j["evaluation"] = {{"cppm_eps", cfg.eval.cppm_eps}, {"npm_eps_fraction", cfg.eval.npm_eps_fraction}};
    j["out"] = cfg.out_dir.string();
    return j.dump(2) + "\n";
}

std::uint64_t assignment_seed(std::uint64_t master)
{
    return mix_seed(master, 1);
}

std::uint64_t scenario_seed(std::uint64_t master, std::size_t test_case)
{
    return mix_seed(master, 100 + test_case);
}

std::uint64_t simulation_seed(std::uint64_t master, std::size_t test_case, TransportMode mode)
{
    return mix_seed(master, 200 + 2 * test_case + (mode == TransportMode::udp ? 1 : 0));
}

MeshTopology obtain_topology(const ExperimentConfig& cfg)
{
    if (cfg.topology_file)
        return load_topology(*cfg.topology_file);
    return generate_rwmn(cfg.generator);
}

SchemeOutcome assign_and_score(const MeshTopology& topo, const ConflictGraph& cg, Scheme scheme,
                               const ExperimentConfig& cfg)
{
    SchemeOutcome o{scheme, {}, {}, 0, {}, {}, {}, {}};
    o.assignment = run_ca_scheme(scheme, topo, cg, cfg.channel_count, assignment_seed(cfg.seed));
    o.lcm = resolve_surviving_links(topo, o.assignment);
    o.broken_links = o.lcm.link_count() - o.lcm.resolved_count();
    o.cppm = compute_cppms(topo, o.lcm, cg);
    return o;
}

NpmSummary summarize_modes(const std::vector<SimResult>& tcp, const std::vector<SimResult>& udp)
{
    const NpmSummary t = aggregate_npms(tcp);
    const NpmSummary u = aggregate_npms(udp);
    return {t.throughput_mbps, t.dfc, u.pdr_pct, u.eed_us};
}

ExperimentRun run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.schemes.size() < 2)
        throw Error("[cli] an evaluation needs at least 2 schemes");
    if (std::set<Scheme>(cfg.schemes.begin(), cfg.schemes.end()).size() != cfg.schemes.size())
        throw Error("[cli] duplicate scheme in scheme list");
    if (cfg.flow_counts.empty())
        throw Error("[cli] at least one test case (flow count) is required");

    ExperimentRun run;
    run.config = cfg;
    run.topology = obtain_topology(cfg);
    run.topology_metrics = global_metrics(run.topology);
    run.conflict_graph = build_emmcg(run.topology, cfg.ir_tr_ratio);

    // Scenarios depend on the topology only, so every scheme carries the same flows.
    for (std::size_t i = 0; i < cfg.flow_counts.size(); ++i)
        run.scenarios.push_back(build_scenario(run.topology, nullptr, cfg.flow_counts[i], scenario_seed(cfg.seed, i),
                                               fmt::format("case{}-{}flows", i + 1, cfg.flow_counts[i])));

    std::map<std::string, CppmValues> metrics;
    std::map<std::string, NpmSummary> npms;
    for (Scheme scheme : cfg.schemes) {
        SchemeOutcome o = assign_and_score(run.topology, run.conflict_graph, scheme, cfg);
        for (std::size_t i = 0; i < run.scenarios.size(); ++i) {
            for (TransportMode mode : {TransportMode::tcp, TransportMode::udp}) {
                SimParams p = cfg.sim;
                p.mode = mode;
                p.seed = simulation_seed(cfg.seed, i, mode);
                SimResult r = simulate(run.topology, o.lcm, run.conflict_graph, run.scenarios[i], p);
                (mode == TransportMode::tcp ? o.tcp : o.udp).push_back(std::move(r));
            }
        }
        o.npm = summarize_modes(o.tcp, o.udp);
        metrics[std::string(scheme_name(scheme))] = o.cppm;
        npms[std::string(scheme_name(scheme))] = o.npm;
        run.outcomes.push_back(std::move(o));
    }
    run.report = build_report(metrics, npms, cfg.eval);
    return run;
}

std::string results_csv_header()
{
    return "scheme,mode,test_case,throughput_mbps,dfc,pdr_pct,eed_us,seed\n";
}

std::string results_csv_row(std::string_view scheme, TransportMode mode, std::string_view test_case,
                            const SimResult& r, std::uint64_t seed)
{
    return fmt::format("{},{},{},{},{},{},{},{}\n", scheme, mode_name(mode), test_case, format_real(r.throughput_mbps),
                       r.dfc, format_real(r.pdr_pct), format_real(r.eed_us), seed);
}

std::string metrics_csv(const ExperimentRun& run)
{
    std::string s = "scheme,TID,CDAL,CXLS\n";
    for (const auto& o : run.outcomes)
        s += fmt::format("{},{},{},{}\n", scheme_name(o.scheme), format_real(o.cppm.tid), format_real(o.cppm.cdal),
                         format_real(o.cppm.cxls));
    return s;
}

std::string results_csv(const ExperimentRun& run)
{
    std::string s = results_csv_header();
    for (const auto& o : run.outcomes) {
        for (std::size_t i = 0; i < run.scenarios.size(); ++i) {
            s += results_csv_row(scheme_name(o.scheme), TransportMode::tcp, run.scenarios[i].label, o.tcp[i],
                                 simulation_seed(run.config.seed, i, TransportMode::tcp));
            s += results_csv_row(scheme_name(o.scheme), TransportMode::udp, run.scenarios[i].label, o.udp[i],
                                 simulation_seed(run.config.seed, i, TransportMode::udp));
        }
    }
    return s;
}

std::string format_doc_table(const EvaluationReport& report)
{
    std::string s = fmt::format("Degree of Confidence (%) over {} CAs\n", report.schemes.size());
    s += fmt::format("{:<12}", "NPM");
    for (Cppm c : kCppms)
        s += fmt::format("{:>10}", cppm_name(c));
    s += '\n';
    for (std::size_t n = 0; n < kNpms.size(); ++n) {
        s += fmt::format("{:<12}", npm_name(kNpms[n]));
        for (std::size_t c = 0; c < kCppms.size(); ++c)
            s += fmt::format("{:>10.2f}", report.doc[c][n]);
        s += '\n';
    }
    return s;
}

namespace {

std::string grid_csv(const EvaluationReport& r, bool doc)
{
    std::string s = "npm";
    for (Cppm c : kCppms)
        s += fmt::format(",{}", cppm_name(c));
    s += '\n';
    for (std::size_t n = 0; n < kNpms.size(); ++n) {
        s += npm_name(kNpms[n]);
        for (std::size_t c = 0; c < kCppms.size(); ++c)
            s += doc ? fmt::format(",{:.2f}", r.doc[c][n]) : fmt::format(",{}", r.pe[c][n]);
        s += '\n';
    }
    return s;
}

} // namespace

void write_experiment(const ExperimentRun& run)
{
    namespace fs = std::filesystem;
    const fs::path& out = run.config.out_dir;

    save_topology(out / "topology" / "topology.json", run.topology);
    {
        std::ostringstream os;
        write_global_metrics(os, run.topology_metrics);
        write_text_file(out / "topology" / "global_metrics.json", os.str());
    }
    {
        std::ostringstream os;
        write_edge_list(os, run.conflict_graph);
        write_text_file(out / "topology" / "conflict_graph.txt", os.str());
    }
    write_text_file(out / "config.json", config_to_json(run.config));

    for (const auto& o : run.outcomes) {
        std::ostringstream os;
        write_assignment(os, run.topology, o.assignment);
        write_text_file(out / "assignments" / fmt::format("{}.ca", scheme_name(o.scheme)), os.str());
    }

    write_text_file(out / "results" / "metrics.csv", metrics_csv(run));
    write_text_file(out / "results" / "sim_results.csv", results_csv(run));
    {
        std::string s = "scheme,throughput_mbps,dfc,pdr_pct,eed_us\n";
        for (const auto& o : run.outcomes)
            s += fmt::format("{},{},{},{},{}\n", scheme_name(o.scheme), format_real(o.npm.throughput_mbps),
                             format_real(o.npm.dfc), format_real(o.npm.pdr_pct), format_real(o.npm.eed_us));
        write_text_file(out / "results" / "npm_summary.csv", s);
    }

    write_text_file(out / "report" / "pe.csv", grid_csv(run.report, false));
    write_text_file(out / "report" / "doc.csv", grid_csv(run.report, true));
    for (std::size_t c = 0; c < kCppms.size(); ++c) {
        for (std::size_t n = 0; n < kNpms.size(); ++n) {
            std::string s = "metric_value,npm_value,scheme\n";
            for (const auto& p : run.report.series[c][n])
                s += fmt::format("{},{},{}\n", format_real(p.metric), format_real(p.npm), p.scheme);
            write_text_file(out / "report" / fmt::format("plot_{}_{}.csv", cppm_name(kCppms[c]), npm_name(kNpms[n])),
                            s);
        }
    }
}

} // namespace wmn
