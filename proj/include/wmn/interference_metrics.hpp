#pragma once

#include "wmn/conflict_graph.hpp"
#include "wmn/topology.hpp"
#include "wmn/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wmn {

// Number of resolved links on each channel.
std::vector<std::size_t> channel_loads(const LinkChannelMap& lcm);

// Population standard deviation of per-channel link counts.
double cdal_cost(std::span<const std::size_t> loads);
// Throws when no link carries a channel.
double cdal_cost(const LinkChannelMap& lcm);

// A connected set of links (each shares a node with another member), sorted ascending.
using XLinkSet = std::vector<LinkId>;

// Every connected set of exactly x resolved links, each emitted once.
std::vector<XLinkSet> enumerate_x_link_sets(const MeshTopology& topo, const LinkChannelMap& lcm, unsigned x);

// Sum over all X-link sets of the number of member pairs that conflict in cg and
// share a channel. x must equal cg.ir_tr_ratio().
std::uint64_t cxls_wt(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg, unsigned x);

struct CppmValues {
    double tid = 0.0;
    double cdal = 0.0;
    double cxls = 0.0;
};

CppmValues compute_cppms(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg);

} // namespace wmn
