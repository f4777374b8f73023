#pragma once

#include "wmn/channel_assignment.hpp"
#include "wmn/conflict_graph.hpp"
#include "wmn/evaluation.hpp"
#include "wmn/interference_metrics.hpp"
#include "wmn/netsim.hpp"
#include "wmn/topology.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wmn {

// One experiment, end to end. Defaults reproduce the reference setup: 50 nodes
// over 1500 x 1500 m, 3 radios of 250 m range, 4 channels, I_r:T_r = 2, flows
// {8, 12, 16, 20, 24} and the six preset schemes.
struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::optional<std::filesystem::path> topology_file;
    GenTargets generator;
    std::size_t channel_count = 4;
    unsigned ir_tr_ratio = 2;
    std::vector<Scheme> schemes{kPresetSchemes.begin(), kPresetSchemes.end()};
    std::vector<std::size_t> flow_counts{8, 12, 16, 20, 24};
    SimParams sim;
    EvalOptions eval;
    std::filesystem::path out_dir = "out";
};

// JSON config. Unknown keys are rejected; missing keys keep their defaults.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

// Stream seeds derived from the master seed.
std::uint64_t assignment_seed(std::uint64_t master);
std::uint64_t scenario_seed(std::uint64_t master, std::size_t test_case);
std::uint64_t simulation_seed(std::uint64_t master, std::size_t test_case, TransportMode mode);

struct SchemeOutcome {
    Scheme scheme;
    ChannelAssignment assignment;
    LinkChannelMap lcm;
    std::size_t broken_links = 0;
    CppmValues cppm;
    std::vector<SimResult> tcp; // per test case
    std::vector<SimResult> udp;
    NpmSummary npm;
};

struct ExperimentRun {
    ExperimentConfig config;
    MeshTopology topology;
    GlobalMetrics topology_metrics;
    ConflictGraph conflict_graph;
    std::vector<TrafficScenario> scenarios;
    std::vector<SchemeOutcome> outcomes;
    EvaluationReport report;
};

MeshTopology obtain_topology(const ExperimentConfig& cfg);

// Per-scheme assignment and prediction metrics only (no simulation).
SchemeOutcome assign_and_score(const MeshTopology& topo, const ConflictGraph& cg, Scheme scheme,
                               const ExperimentConfig& cfg);

// NPM summary across test cases: throughput and DFC from the TCP runs, PDR
// and EED from the UDP runs.
NpmSummary summarize_modes(const std::vector<SimResult>& tcp, const std::vector<SimResult>& udp);

ExperimentRun run_experiment(const ExperimentConfig& cfg);

// Writes topology/, assignments/, results/ and report/ under cfg.out_dir.
void write_experiment(const ExperimentRun& run);

// DoC grid as a fixed-width table: one row per network metric, one column per
// prediction metric.
std::string format_doc_table(const EvaluationReport& report);

std::string metrics_csv(const ExperimentRun& run);
std::string results_csv(const ExperimentRun& run);
std::string results_csv_header();
std::string results_csv_row(std::string_view scheme, TransportMode mode, std::string_view test_case,
                            const SimResult& r, std::uint64_t seed);

} // namespace wmn
