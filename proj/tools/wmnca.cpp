// wmnca: topology generation, channel assignment, prediction metrics,
// simulation and CA-evaluation reports from one config.

#include "wmn/channel_assignment.hpp"
#include "wmn/conflict_graph.hpp"
#include "wmn/experiment.hpp"
#include "wmn/interference_metrics.hpp"
#include "wmn/io.hpp"
#include "wmn/netsim.hpp"
#include "wmn/topology.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace wmn;

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kRuntime = 3 };

// Flag values; unset optionals leave the config untouched.
struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> nodes;
    std::optional<double> density, density_tol, cc, cc_tol;
    std::optional<std::string> topology;
    std::optional<std::size_t> channels;
    std::optional<unsigned> ir_tr_ratio;
    std::vector<std::string> schemes;
    std::vector<std::size_t> flows;
    std::optional<std::string> ca;
    std::string mode = "both";
};

ExperimentConfig resolve_config(const Overrides& o)
{
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) {
        // The generator follows the master seed unless the config pinned it.
        if (cfg.generator.seed == cfg.seed)
            cfg.generator.seed = *o.seed;
        cfg.seed = *o.seed;
    }
    if (o.out)
        cfg.out_dir = *o.out;
    if (o.nodes)
        cfg.generator.node_count = *o.nodes;
    if (o.density)
        cfg.generator.density_target = *o.density;
    if (o.density_tol)
        cfg.generator.density_tol = *o.density_tol;
    if (o.cc)
        cfg.generator.cc_target = *o.cc;
    if (o.cc_tol)
        cfg.generator.cc_tol = *o.cc_tol;
    // The default clustering target describes the default 50-node network. A
    // custom size or density with no clustering target leaves clustering free.
    const GenTargets defaults;
    if ((o.nodes || o.density) && !o.cc && !o.cc_tol && cfg.generator.cc_target == defaults.cc_target
        && cfg.generator.cc_tol == defaults.cc_tol) {
        cfg.generator.cc_target = 0.5;
        cfg.generator.cc_tol = 0.5;
    }
    if (o.topology)
        cfg.topology_file = *o.topology;
    if (o.channels)
        cfg.channel_count = *o.channels;
    if (o.ir_tr_ratio)
        cfg.ir_tr_ratio = *o.ir_tr_ratio;
    if (!o.schemes.empty()) {
        cfg.schemes.clear();
        for (const auto& s : o.schemes)
            cfg.schemes.push_back(parse_scheme(s));
    }
    if (!o.flows.empty())
        cfg.flow_counts = o.flows;
    return cfg;
}

void add_common(CLI::App* sub, Overrides& o)
{
    sub->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
}

void add_generator(CLI::App* sub, Overrides& o)
{
    sub->add_option("--nodes", o.nodes, "node count");
    sub->add_option("--density", o.density, "target link density");
    sub->add_option("--density-tol", o.density_tol, "density tolerance");
    sub->add_option("--cc", o.cc, "target clustering coefficient");
    sub->add_option("--cc-tol", o.cc_tol, "clustering coefficient tolerance");
}

void add_topology(CLI::App* sub, Overrides& o, bool required)
{
    auto* opt = sub->add_option("--topology", o.topology, "topology JSON file")->check(CLI::ExistingFile);
    if (required)
        opt->required();
}

int cmd_generate(const ExperimentConfig& cfg)
{
    const MeshTopology topo = generate_rwmn(cfg.generator);
    const GlobalMetrics m = global_metrics(topo);
    save_topology(cfg.out_dir / "topology" / "topology.json", topo);
    std::ostringstream os;
    write_global_metrics(os, m);
    write_text_file(cfg.out_dir / "topology" / "global_metrics.json", os.str());
    fmt::print("nodes {} links {} density {:.4f} cc {:.4f} geo_diameter {:.1f} m hop_diameter {}\n",
               topo.node_count(), topo.link_count(), m.density, m.clustering_coefficient, m.geo_diameter,
               m.hop_diameter);
    fmt::print("wrote {}\n", (cfg.out_dir / "topology" / "topology.json").string());
    return kOk;
}

int cmd_assign(const ExperimentConfig& cfg)
{
    const MeshTopology topo = obtain_topology(cfg);
    const ConflictGraph cg = build_emmcg(topo, cfg.ir_tr_ratio);
    int status = kOk;
    for (Scheme s : cfg.schemes) {
        const ChannelAssignment ca = run_ca_scheme(s, topo, cg, cfg.channel_count, assignment_seed(cfg.seed));
        std::ostringstream os;
        write_assignment(os, topo, ca);
        const auto path = cfg.out_dir / "assignments" / fmt::format("{}.ca", scheme_name(s));
        write_text_file(path, os.str());
        const PreservationReport pr = check_topology_preservation(topo, ca);
        fmt::print("{:<7} {} broken link(s) -> {}\n", scheme_name(s), pr.broken.size(), path.string());
    }
    return status;
}

int cmd_metrics(const ExperimentConfig& cfg, const std::string& ca_file)
{
    const MeshTopology topo = obtain_topology(cfg);
    std::ifstream in(ca_file);
    if (!in)
        throw Error(fmt::format("[cli] cannot open {}", ca_file));
    const ChannelAssignment ca = read_assignment(in, topo);
    const LinkChannelMap lcm = resolve_link_channels(topo, ca);
    const ConflictGraph cg = build_emmcg(topo, cfg.ir_tr_ratio, lcm.binding);
    const CppmValues v = compute_cppms(topo, lcm, cg);
    fmt::print("TID CDAL CXLS\n{} {} {}\n", format_real(v.tid), format_real(v.cdal), format_real(v.cxls));
    return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& ca_file, const std::string& mode)
{
    const MeshTopology topo = obtain_topology(cfg);
    std::ifstream in(ca_file);
    if (!in)
        throw Error(fmt::format("[cli] cannot open {}", ca_file));
    const ChannelAssignment ca = read_assignment(in, topo);
    const LinkChannelMap lcm = resolve_surviving_links(topo, ca);
    const ConflictGraph cg = build_emmcg(topo, cfg.ir_tr_ratio);

    std::vector<TransportMode> modes;
    if (mode == "both")
        modes = {TransportMode::tcp, TransportMode::udp};
    else
        modes = {parse_mode(mode)};

    std::string csv = results_csv_header();
    for (std::size_t i = 0; i < cfg.flow_counts.size(); ++i) {
        const TrafficScenario sc =
            build_scenario(topo, nullptr, cfg.flow_counts[i], scenario_seed(cfg.seed, i),
                           fmt::format("case{}-{}flows", i + 1, cfg.flow_counts[i]));
        for (TransportMode m : modes) {
            SimParams p = cfg.sim;
            p.mode = m;
            p.seed = simulation_seed(cfg.seed, i, m);
            csv += results_csv_row(ca.scheme_name, m, sc.label, simulate(topo, lcm, cg, sc, p), p.seed);
        }
    }
    write_text_file(cfg.out_dir / "results" / "sim_results.csv", csv);
    fmt::print("{}", csv);
    return kOk;
}

int cmd_evaluate(const ExperimentConfig& cfg)
{
    const ExperimentRun run = run_experiment(cfg);
    write_experiment(run);
    fmt::print("{}", format_doc_table(run.report));
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Channel assignment evaluation for random wireless mesh networks"};
    app.require_subcommand(1);
    Overrides o;

    auto* gen = app.add_subcommand("generate", "generate a random mesh topology");
    add_common(gen, o);
    add_generator(gen, o);

    auto* assign = app.add_subcommand("assign", "run channel assignment schemes");
    add_common(assign, o);
    add_generator(assign, o);
    add_topology(assign, o, false);
    assign->add_option("--channels", o.channels, "orthogonal channel count");
    assign->add_option("--ir-tr-ratio", o.ir_tr_ratio, "interference to transmission range ratio");
    assign->add_option("--scheme,--schemes", o.schemes, "schemes to run")->delimiter(',');

    auto* metrics = app.add_subcommand("metrics", "print TID, CDAL and CXLS for an assignment");
    add_common(metrics, o);
    add_topology(metrics, o, true);
    metrics->add_option("--ca", o.ca, "assignment file")->required()->check(CLI::ExistingFile);
    metrics->add_option("--ir-tr-ratio", o.ir_tr_ratio, "interference to transmission range ratio");

    auto* sim = app.add_subcommand("simulate", "simulate traffic over an assignment");
    add_common(sim, o);
    add_topology(sim, o, true);
    sim->add_option("--ca", o.ca, "assignment file")->required()->check(CLI::ExistingFile);
    sim->add_option("--ir-tr-ratio", o.ir_tr_ratio, "interference to transmission range ratio");
    sim->add_option("--flows", o.flows, "flow counts, one test case each")->delimiter(',');
    sim->add_option("--mode", o.mode, "tcp, udp or both")->check(CLI::IsMember({"tcp", "udp", "both"}));

    auto* eval = app.add_subcommand("evaluate", "full pipeline and prediction report");
    add_common(eval, o);
    add_generator(eval, o);
    add_topology(eval, o, false);
    eval->add_option("--channels", o.channels, "orthogonal channel count");
    eval->add_option("--ir-tr-ratio", o.ir_tr_ratio, "interference to transmission range ratio");
    eval->add_option("--schemes,--scheme", o.schemes, "schemes to compare")->delimiter(',');
    eval->add_option("--flows", o.flows, "flow counts, one test case each")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const ExperimentConfig cfg = resolve_config(o);
        if (gen->parsed())
            return cmd_generate(cfg);
        if (assign->parsed())
            return cmd_assign(cfg);
        if (metrics->parsed())
            return cmd_metrics(cfg, *o.ca);
        if (sim->parsed())
            return cmd_simulate(cfg, *o.ca, o.mode);
        return cmd_evaluate(cfg);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
}
