#pragma once

#include "wmn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wmn {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& p, const Position& q);

struct Node {
    NodeId id = 0;
    Position pos;
};

struct Link {
    LinkId id = 0;
    NodeId a = 0;
    NodeId b = 0;
};

struct Area {
    double width = 1500.0;
    double height = 1500.0;
};

// The physical mesh: mesh routers, their radio count and the wireless links
// that will be used for communication.
struct MeshTopology {
    std::vector<Node> nodes;
    std::vector<Link> links;
    unsigned radios_per_node = 3;
    double tx_range = 250.0;
    Area area;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t link_count() const { return links.size(); }
    double link_length(LinkId l) const;
};

// Throws Error on broken structural invariants: non-dense ids, self links,
// duplicate links, links longer than tx_range, out-of-range endpoints.
// Connectivity is not required here (see validate_topology).
void check_structure(const MeshTopology& topo);

// Node -> neighbour nodes, ascending.
std::vector<std::vector<NodeId>> node_adjacency(const MeshTopology& topo);

// Node -> incident link ids, ascending.
std::vector<std::vector<LinkId>> incident_links(const MeshTopology& topo);

// Hop counts from src over the links for which alive[l] is true (all links
// when alive is empty). Unreachable nodes get -1.
std::vector<int> hop_distances(const MeshTopology& topo, NodeId src,
                               const std::vector<bool>& alive = {});

bool is_connected(const MeshTopology& topo);

// Global transitivity: 3 * triangles / connected triplets (0 when there are no triplets).
double clustering_coefficient(const std::vector<std::vector<NodeId>>& adjacency);

struct GlobalMetrics {
    double density = 0.0;
    double clustering_coefficient = 0.0;
    double geo_diameter = 0.0;
    double min_eccentricity = 0.0;
    int hop_diameter = 0; // over connected pairs only
    bool connected = false;
};

GlobalMetrics global_metrics(const MeshTopology& topo);

struct GenTargets {
    std::size_t node_count = 50;
    double density_target = 0.083;
    double density_tol = 0.005;
    double cc_target = 0.37;
    double cc_tol = 0.05;
    std::uint64_t seed = 42;

    unsigned radios_per_node = 3;
    double tx_range = 250.0;
    Area area;
    int steps_per_placement = 10000;
    int max_placements = 50;
};

// Random mesh whose density and clustering coefficient sit within the given
// tolerances. Deterministic per seed. Throws InfeasibleError when the targets
// cannot be met.
MeshTopology generate_rwmn(const GenTargets& targets);

struct TargetCheck {
    std::string name;
    double target = 0.0;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<TargetCheck> checks;
    bool connected = false;
    std::vector<std::string> problems;
    bool pass = false;
};

ValidationReport validate_topology(const MeshTopology& topo, const GenTargets& targets);

} // namespace wmn
