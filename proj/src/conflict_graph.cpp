#include "wmn/conflict_graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace wmn {

ConflictGraph::ConflictGraph(std::size_t vertex_count, unsigned ir_tr_ratio, std::vector<ConflictEdge> edges)
    : ir_tr_ratio_(ir_tr_ratio), edges_(std::move(edges)), neighbours_(vertex_count)
{
    if (ir_tr_ratio_ == 0)
        throw Error("[conflict_graph] ir_tr_ratio must be a positive integer");
    for (auto& e : edges_) {
        if (e.a == e.b)
            throw Error(fmt::format("[conflict_graph] self edge on link {}", e.a));
        if (e.a >= vertex_count || e.b >= vertex_count)
            throw Error(fmt::format("[conflict_graph] edge {}-{} references unknown link", e.a, e.b));
        if (e.a > e.b)
            std::swap(e.a, e.b);
    }
    std::sort(edges_.begin(), edges_.end(), [](const ConflictEdge& x, const ConflictEdge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b)
            throw Error(fmt::format("[conflict_graph] duplicate edge {}-{}", edges_[i].a, edges_[i].b));
    for (const auto& e : edges_) {
        neighbours_[e.a].push_back({e.b, e.kind});
        neighbours_[e.b].push_back({e.a, e.kind});
    }
    for (auto& v : neighbours_)
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.link < y.link; });
}

std::uint8_t ConflictGraph::kind(LinkId a, LinkId b) const
{
    if (a >= neighbours_.size())
        return 0;
    const auto& nb = neighbours_[a];
    const auto it = std::lower_bound(nb.begin(), nb.end(), b,
                                     [](const ConflictNeighbour& n, LinkId id) { return n.link < id; });
    return it != nb.end() && it->link == b ? it->kind : 0;
}

ConflictGraph build_emmcg(const MeshTopology& topo, unsigned ir_tr_ratio,
                          std::span<const std::optional<RadioBinding>> bindings)
{
    if (ir_tr_ratio == 0)
        throw Error("[conflict_graph] ir_tr_ratio must be a positive integer");
    if (!bindings.empty() && bindings.size() != topo.link_count())
        throw Error("[conflict_graph] binding count does not match link count");

    const double ir = static_cast<double>(ir_tr_ratio) * topo.tx_range;
    std::vector<ConflictEdge> edges;
    for (LinkId i = 0; i < topo.link_count(); ++i) {
        const Link& li = topo.links[i];
        const NodeId ei[2] = {li.a, li.b};
        for (LinkId j = i + 1; j < topo.link_count(); ++j) {
            const Link& lj = topo.links[j];
            const NodeId ej[2] = {lj.a, lj.b};
            std::uint8_t kind = 0;
            for (int p = 0; p < 2; ++p) {
                for (int q = 0; q < 2; ++q) {
                    if (distance(topo.nodes[ei[p]].pos, topo.nodes[ej[q]].pos) <= ir)
                        kind |= kRangeConflict;
                    if (ei[p] != ej[q])
                        continue;
                    if (bindings.empty() || !bindings[i] || !bindings[j]) {
                        kind |= kColocationConflict;
                        continue;
                    }
                    const RadioId ri = p == 0 ? bindings[i]->radio_a : bindings[i]->radio_b;
                    const RadioId rj = q == 0 ? bindings[j]->radio_a : bindings[j]->radio_b;
                    if (ri != rj)
                        kind |= kColocationConflict;
                }
            }
            if (kind)
                edges.push_back({i, j, kind});
        }
    }
    return ConflictGraph(topo.link_count(), ir_tr_ratio, std::move(edges));
}

std::size_t interference_degree(const ConflictGraph& cg, const LinkChannelMap& lcm, LinkId link)
{
    if (link >= cg.vertex_count())
        throw Error(fmt::format("[conflict_graph] link {} absent from conflict graph", link));
    if (!lcm.resolved(link))
        throw Error(fmt::format("[conflict_graph] link {} has no channel", link));
    const ChannelId c = *lcm.channel[link];
    std::size_t id = 0;
    for (const auto& n : cg.neighbours(link))
        if (lcm.resolved(n.link) && *lcm.channel[n.link] == c)
            ++id;
    return id;
}

std::size_t total_interference_degree(const ConflictGraph& cg, const LinkChannelMap& lcm)
{
    if (lcm.link_count() != cg.vertex_count())
        throw Error("[conflict_graph] channel map does not cover the conflict graph");
    std::size_t tid = 0;
    for (const auto& e : cg.edges())
        if (lcm.resolved(e.a) && lcm.resolved(e.b) && *lcm.channel[e.a] == *lcm.channel[e.b])
            ++tid;
    return tid;
}

void write_edge_list(std::ostream& os, const ConflictGraph& cg)
{
    for (const auto& e : cg.edges()) {
        std::string kind;
        if (e.kind & kRangeConflict)
            kind = "range";
        if (e.kind & kColocationConflict)
            kind += kind.empty() ? "colocation" : "+colocation";
        os << e.a << ' ' << e.b << ' ' << kind << '\n';
    }
}

ConflictGraph read_edge_list(std::istream& is, std::size_t vertex_count, unsigned ir_tr_ratio)
{
    std::vector<ConflictEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        ConflictEdge e;
        std::string kind;
        if (!(ss >> e.a >> e.b >> kind))
            throw ParseError(fmt::format("[conflict_graph] line {}: expected `linkA linkB kind`", lineno), lineno);
        if (kind == "range")
            e.kind = kRangeConflict;
        else if (kind == "range+colocation")
            e.kind = kRangeConflict | kColocationConflict;
        else if (kind == "colocation")
            e.kind = kColocationConflict;
        else
            throw ParseError(fmt::format("[conflict_graph] line {}: unknown kind `{}`", lineno, kind), lineno);
        edges.push_back(e);
    }
    return ConflictGraph(vertex_count, ir_tr_ratio, std::move(edges));
}

} // namespace wmn
