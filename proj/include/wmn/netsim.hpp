#pragma once

#include "wmn/conflict_graph.hpp"
#include "wmn/topology.hpp"
#include "wmn/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wmn {

enum class TransportMode { tcp, udp };

std::string_view mode_name(TransportMode m);
TransportMode parse_mode(std::string_view s);

struct Flow {
    NodeId src = 0;
    NodeId dst = 0;
};

struct TrafficScenario {
    std::string label;
    std::vector<Flow> flows;
};

inline constexpr int kMinFlowHops = 3;
inline constexpr int kMaxFlowHops = 11;

// n_flows distinct (src, dst) pairs drawn uniformly from the pairs whose
// min-hop distance over working links lies in [3, 11]. A null lcm means every
// topology link works. Throws InfeasibleError if fewer pairs are eligible.
TrafficScenario build_scenario(const MeshTopology& topo, const LinkChannelMap* lcm, std::size_t n_flows,
                               std::uint64_t seed, std::string label = {});

struct SimParams {
    TransportMode mode = TransportMode::tcp;
    double phy_rate_mbps = 54.0;
    std::size_t mss_bytes = 1024;
    std::size_t udp_packet_bytes = 512;
    std::size_t file_bytes = 1 << 20;
    double slot_us = 0.0;        // 0: one MSS transmission time at phy_rate_mbps
    double horizon_s = 60.0;
    double udp_interval_ms = 50.0; // 0: sources always backlogged
    double udp_tx_prob = 0.5;
    std::size_t queue_limit = 100; // per directed link, drop-tail
    // TCP: RTS/CTS only silences contenders whose endpoints are within
    // transmission range of each other; same-channel conflicts farther out (up
    // to the interference range) still collide. Off: every conflict is avoided.
    bool tcp_hidden_interference = true;
    unsigned mac_retry_limit = 7;
    double tcp_min_rto_ms = 1000.0;
    std::uint64_t seed = 1;

    double slot_duration_us() const;
};

struct FlowStats {
    int hops = 0; // 0 when no route exists
    bool completed = false;
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    double min_delay_us = 0.0;
    double completion_us = 0.0; // 0 unless completed
};

struct SimResult {
    double throughput_mbps = 0.0;
    std::size_t dfc = 0;
    double pdr_pct = 0.0;
    double eed_us = 0.0;

    std::uint64_t packets_sent = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t bytes_offered = 0;
    std::uint64_t bytes_delivered = 0;
    std::vector<FlowStats> flows;
};

// Slotted protocol-model contention simulation of the scenario over the links
// resolved in lcm (broken links carry nothing). Deterministic per params.seed.
SimResult simulate(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg,
                   const TrafficScenario& scenario, const SimParams& params);

struct NpmSummary {
    double throughput_mbps = 0.0;
    double dfc = 0.0;
    double pdr_pct = 0.0;
    double eed_us = 0.0;
};

// Arithmetic mean of each metric across test cases. Throws on empty input.
NpmSummary aggregate_npms(std::span<const SimResult> results);

} // namespace wmn
