#pragma once

#include "wmn/topology.hpp"
#include "wmn/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace wmn {

// Edge kind bits. Every co-location edge is also a range edge: links sharing a
// node are at distance zero.
enum ConflictKind : std::uint8_t {
    kRangeConflict = 1,
    kColocationConflict = 2,
};

struct ConflictEdge {
    LinkId a = 0; // a < b
    LinkId b = 0;
    std::uint8_t kind = 0;
};

struct ConflictNeighbour {
    LinkId link = 0;
    std::uint8_t kind = 0;
};

// Enhanced multi-radio multi-channel conflict graph: one vertex per topology
// link (vertex id == LinkId), undirected conflict edges tagged by kind.
class ConflictGraph {
public:
    ConflictGraph() = default;
    ConflictGraph(std::size_t vertex_count, unsigned ir_tr_ratio, std::vector<ConflictEdge> edges);

    std::size_t vertex_count() const { return neighbours_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    unsigned ir_tr_ratio() const { return ir_tr_ratio_; }

    // Canonically sorted by (a, b).
    const std::vector<ConflictEdge>& edges() const { return edges_; }
    // Sorted by neighbour id.
    std::span<const ConflictNeighbour> neighbours(LinkId l) const { return neighbours_.at(l); }

    bool adjacent(LinkId a, LinkId b) const { return kind(a, b) != 0; }
    std::uint8_t kind(LinkId a, LinkId b) const;

private:
    unsigned ir_tr_ratio_ = 1;
    std::vector<ConflictEdge> edges_;
    std::vector<std::vector<ConflictNeighbour>> neighbours_;
};

// Range edge between distinct links when any endpoint of one lies within
// ir_tr_ratio * tx_range of any endpoint of the other. Co-location edge between
// links sharing a node; when bindings are given it additionally requires the
// two links to use different radios of the shared node.
ConflictGraph build_emmcg(const MeshTopology& topo, unsigned ir_tr_ratio,
                          std::span<const std::optional<RadioBinding>> bindings = {});

// Number of conflict-graph neighbours of `link` on the same channel.
// Throws if the link is not a vertex or has no channel.
std::size_t interference_degree(const ConflictGraph& cg, const LinkChannelMap& lcm, LinkId link);

// Number of conflicting pairs sharing a channel. Links without a channel
// (broken) take part in no conflict.
std::size_t total_interference_degree(const ConflictGraph& cg, const LinkChannelMap& lcm);

// `linkA linkB kind` per line, kind one of `range`, `range+colocation`.
void write_edge_list(std::ostream& os, const ConflictGraph& cg);
ConflictGraph read_edge_list(std::istream& is, std::size_t vertex_count, unsigned ir_tr_ratio);

} // namespace wmn
