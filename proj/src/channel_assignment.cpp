#include "wmn/channel_assignment.hpp"

#include "wmn/rng.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace wmn {

std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::bfs: return "BFS";
    case Scheme::mis: return "MIS";
    case Scheme::ec: return "EC";
    case Scheme::lp: return "LP";
    case Scheme::eizm: return "EIZM";
    case Scheme::ois: return "OIS";
    case Scheme::single: return "SINGLE";
    case Scheme::spread: return "SPREAD";
    }
    return "?";
}

Scheme parse_scheme(std::string_view label)
{
    std::string up(label);
    for (char& c : up)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Scheme s : {Scheme::bfs, Scheme::mis, Scheme::ec, Scheme::lp, Scheme::eizm, Scheme::ois,
                     Scheme::single, Scheme::spread})
        if (scheme_name(s) == up)
            return s;
    throw Error(fmt::format("[channel_assignment] unknown scheme `{}`", label));
}

namespace {

// Link-level channel plan under the radio budget: a node can touch at most
// radios_per_node distinct channels, one radio per channel.
class LinkPlan {
public:
    LinkPlan(const MeshTopology& topo, const ConflictGraph& cg, std::size_t channels, bool colocation_aware)
        : topo_(topo), cg_(cg), channels_(channels), colocation_aware_(colocation_aware),
          link_channel_(topo.link_count()), uses_(topo.node_count() * channels, 0),
          distinct_(topo.node_count(), 0)
    {
    }

    std::size_t channels() const { return channels_; }
    const std::optional<ChannelId>& channel(LinkId l) const { return link_channel_[l]; }

    // Whether l could carry c without exceeding either endpoint's radio budget.
    bool feasible(LinkId l, ChannelId c) const
    {
        const Link& link = topo_.links[l];
        return node_accepts(link.a, l, c) && node_accepts(link.b, l, c);
    }

    void assign(LinkId l, ChannelId c)
    {
        const Link& link = topo_.links[l];
        if (link_channel_[l]) {
            release(link.a, *link_channel_[l]);
            release(link.b, *link_channel_[l]);
        }
        acquire(link.a, c);
        acquire(link.b, c);
        link_channel_[l] = c;
    }

    // Same-channel conflict weight l would see on channel c.
    unsigned cost(LinkId l, ChannelId c) const
    {
        unsigned total = 0;
        for (const auto& n : cg_.neighbours(l))
            if (link_channel_[n.link] == c)
                total += weight(n.kind);
        return total;
    }

    unsigned weight(std::uint8_t kind) const
    {
        return colocation_aware_ && (kind & kColocationConflict) ? 2u : 1u;
    }

    // Cheapest feasible channel, ties to the lowest id.
    std::optional<ChannelId> cheapest(LinkId l) const
    {
        std::optional<ChannelId> best;
        unsigned best_cost = 0;
        for (ChannelId c = 0; c < channels_; ++c) {
            if (!feasible(l, c))
                continue;
            const unsigned k = cost(l, c);
            if (!best || k < best_cost) {
                best = c;
                best_cost = k;
            }
        }
        return best;
    }

    ChannelAssignment materialize(std::string name) const
    {
        ChannelAssignment ca;
        ca.scheme_name = std::move(name);
        ca.channel_count = channels_;
        ca.radio_channels.assign(topo_.node_count(), std::vector<ChannelId>(topo_.radios_per_node, 0));
        std::vector<std::vector<int>> radio_of(topo_.node_count(), std::vector<int>(channels_, -1));
        for (NodeId u = 0; u < topo_.node_count(); ++u) {
            RadioId r = 0;
            for (ChannelId c = 0; c < channels_; ++c) {
                if (uses_[u * channels_ + c] > 0) {
                    ca.radio_channels[u][r] = c;
                    radio_of[u][c] = static_cast<int>(r);
                    ++r;
                }
            }
        }
        ca.link_binding.resize(topo_.link_count());
        for (const Link& link : topo_.links) {
            if (const auto& c = link_channel_[link.id])
                ca.link_binding[link.id] = RadioBinding{static_cast<RadioId>(radio_of[link.a][*c]),
                                                        static_cast<RadioId>(radio_of[link.b][*c])};
        }
        return ca;
    }

private:
    bool node_accepts(NodeId u, LinkId l, ChannelId c) const
    {
        if (uses_[u * channels_ + c] > 0)
            return true;
        std::size_t distinct = distinct_[u];
        // Moving l away from its current channel may free a radio.
        if (const auto& cur = link_channel_[l]; cur && uses_[u * channels_ + *cur] == 1)
            --distinct;
        return distinct < topo_.radios_per_node;
    }

    void acquire(NodeId u, ChannelId c)
    {
        if (uses_[u * channels_ + c]++ == 0)
            ++distinct_[u];
    }

    void release(NodeId u, ChannelId c)
    {
        if (--uses_[u * channels_ + c] == 0)
            --distinct_[u];
    }

    const MeshTopology& topo_;
    const ConflictGraph& cg_;
    std::size_t channels_;
    bool colocation_aware_;
    std::vector<std::optional<ChannelId>> link_channel_;
    std::vector<unsigned> uses_;
    std::vector<std::size_t> distinct_;
};

void assign_cheapest(LinkPlan& plan, LinkId l)
{
    if (const auto c = plan.cheapest(l))
        plan.assign(l, *c);
}

// Desired channel when feasible, otherwise the cheapest feasible one.
void assign_preferred(LinkPlan& plan, LinkId l, ChannelId desired)
{
    if (plan.feasible(l, desired))
        plan.assign(l, desired);
    else
        assign_cheapest(plan, l);
}

void run_bfs(LinkPlan& plan, const MeshTopology& topo, Rng& rng)
{
    const auto adj = node_adjacency(topo);
    const auto inc = incident_links(topo);
    std::vector<bool> visited(topo.node_count(), false);
    const auto root = static_cast<NodeId>(rng.below(topo.node_count()));

    auto sweep = [&](NodeId start) {
        std::queue<NodeId> q;
        visited[start] = true;
        q.push(start);
        while (!q.empty()) {
            const NodeId u = q.front();
            q.pop();
            for (LinkId l : inc[u])
                if (!plan.channel(l))
                    assign_cheapest(plan, l);
            for (NodeId v : adj[u]) {
                if (!visited[v]) {
                    visited[v] = true;
                    q.push(v);
                }
            }
        }
    };
    sweep(root);
    for (NodeId u = 0; u < topo.node_count(); ++u)
        if (!visited[u])
            sweep(u);
}

// Peels greedy maximal independent sets off the residual conflict graph; set k
// gets channel k mod channels.
void run_independent_sets(LinkPlan& plan, const ConflictGraph& cg)
{
    const std::size_t n = cg.vertex_count();
    std::vector<bool> residual(n, true);
    std::size_t remaining = n;
    for (std::size_t round = 0; remaining > 0; ++round) {
        std::vector<unsigned> degree(n, 0);
        for (LinkId v = 0; v < n; ++v) {
            if (!residual[v])
                continue;
            for (const auto& nb : cg.neighbours(v))
                if (residual[nb.link])
                    degree[v] += plan.weight(nb.kind);
        }

        std::vector<bool> candidate = residual;
        std::vector<LinkId> set;
        for (;;) {
            std::optional<LinkId> pick;
            for (LinkId v = 0; v < n; ++v)
                if (candidate[v] && (!pick || degree[v] < degree[*pick]))
                    pick = v;
            if (!pick)
                break;
            set.push_back(*pick);
            candidate[*pick] = false;
            for (const auto& nb : cg.neighbours(*pick))
                candidate[nb.link] = false;
        }

        const auto desired = static_cast<ChannelId>(round % plan.channels());
        for (LinkId v : set) {
            assign_preferred(plan, v, desired);
            residual[v] = false;
            --remaining;
        }
    }
}

void run_edge_coloring(LinkPlan& plan, const MeshTopology& topo)
{
    std::vector<std::vector<bool>> used(topo.node_count());
    for (const Link& link : topo.links) {
        auto& ua = used[link.a];
        auto& ub = used[link.b];
        std::size_t color = 0;
        while ((color < ua.size() && ua[color]) || (color < ub.size() && ub[color]))
            ++color;
        for (auto* u : {&ua, &ub}) {
            if (u->size() <= color)
                u->resize(color + 1, false);
            (*u)[color] = true;
        }
        // First feasible channel in cyclic order from the colour's channel.
        const std::size_t k = plan.channels();
        for (std::size_t step = 0; step < k; ++step) {
            const auto c = static_cast<ChannelId>((color + step) % k);
            if (plan.feasible(link.id, c)) {
                plan.assign(link.id, c);
                break;
            }
        }
    }
}

// Starts with every link on channel 0 and re-channels one link at a time while
// that strictly lowers the weighted same-channel conflict total. Moves that
// would exceed a node's radio budget are rejected, so no link ever breaks.
void run_link_preserving(LinkPlan& plan, const MeshTopology& topo, Rng& rng)
{
    for (LinkId l = 0; l < topo.link_count(); ++l)
        plan.assign(l, 0);
    std::vector<LinkId> order(topo.link_count());
    std::iota(order.begin(), order.end(), 0);
    constexpr int kMaxPasses = 1000;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        rng.shuffle(order);
        bool moved = false;
        for (LinkId l : order) {
            const ChannelId cur = *plan.channel(l);
            ChannelId best = cur;
            unsigned best_cost = plan.cost(l, cur);
            for (ChannelId c = 0; c < plan.channels(); ++c) {
                if (c == cur || !plan.feasible(l, c))
                    continue;
                const unsigned k = plan.cost(l, c);
                if (k < best_cost) {
                    best = c;
                    best_cost = k;
                }
            }
            if (best != cur) {
                plan.assign(l, best);
                moved = true;
            }
        }
        if (!moved)
            break;
    }
}

void run_spread(LinkPlan& plan, const ConflictGraph& cg)
{
    std::vector<LinkId> order(cg.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
        return cg.neighbours(a).size() > cg.neighbours(b).size();
    });
    for (LinkId l : order)
        assign_cheapest(plan, l);
}

void check_shape(const MeshTopology& topo, const ChannelAssignment& ca)
{
    if (ca.channel_count == 0)
        throw Error("[channel_assignment] channel_count must be positive");
    if (ca.radio_channels.size() != topo.node_count())
        throw Error(fmt::format("[channel_assignment] assignment covers {} nodes, topology has {}",
                                ca.radio_channels.size(), topo.node_count()));
    for (NodeId u = 0; u < topo.node_count(); ++u) {
        if (ca.radio_channels[u].size() != topo.radios_per_node)
            throw Error(fmt::format("[channel_assignment] node {} has {} radios, expected {}", u,
                                    ca.radio_channels[u].size(), topo.radios_per_node));
        for (ChannelId c : ca.radio_channels[u])
            if (c >= ca.channel_count)
                throw Error(fmt::format("[channel_assignment] node {} uses channel {} outside [0, {})", u, c,
                                        ca.channel_count));
    }
    if (!ca.link_binding.empty() && ca.link_binding.size() != topo.link_count())
        throw Error("[channel_assignment] binding count does not match link count");
}

// Channel and radio pair of one link, or nullopt when broken.
std::optional<std::pair<ChannelId, RadioBinding>> resolve_one(const MeshTopology& topo,
                                                               const ChannelAssignment& ca, const Link& link)
{
    const auto& ra = ca.radio_channels[link.a];
    const auto& rb = ca.radio_channels[link.b];
    if (!ca.link_binding.empty()) {
        const auto& b = ca.link_binding[link.id];
        if (!b || b->radio_a >= ra.size() || b->radio_b >= rb.size() || ra[b->radio_a] != rb[b->radio_b])
            return std::nullopt;
        return std::pair{ra[b->radio_a], *b};
    }
    for (RadioId i = 0; i < topo.radios_per_node; ++i)
        for (RadioId j = 0; j < topo.radios_per_node; ++j)
            if (ra[i] == rb[j])
                return std::pair{ra[i], RadioBinding{i, j}};
    return std::nullopt;
}

} // namespace

ChannelAssignment run_ca_scheme(Scheme scheme, const MeshTopology& topo, const ConflictGraph& cg,
                                std::size_t channel_count, std::uint64_t seed)
{
    if (channel_count == 0)
        throw Error("[channel_assignment] channel_count must be >= 1");
    if (cg.vertex_count() != topo.link_count())
        throw Error("[channel_assignment] conflict graph was not built from this topology");

    const bool colocation_aware = scheme == Scheme::eizm || scheme == Scheme::ois;
    LinkPlan plan(topo, cg, channel_count, colocation_aware);
    Rng rng(seed);
    switch (scheme) {
    case Scheme::bfs:
        if (topo.node_count() > 0)
            run_bfs(plan, topo, rng);
        break;
    case Scheme::mis:
    case Scheme::ois:
        run_independent_sets(plan, cg);
        break;
    case Scheme::ec:
        run_edge_coloring(plan, topo);
        break;
    case Scheme::lp:
    case Scheme::eizm:
        run_link_preserving(plan, topo, rng);
        break;
    case Scheme::single:
        for (LinkId l = 0; l < topo.link_count(); ++l)
            plan.assign(l, 0);
        break;
    case Scheme::spread:
        run_spread(plan, cg);
        break;
    }
    return plan.materialize(std::string(scheme_name(scheme)));
}

PreservationReport check_topology_preservation(const MeshTopology& topo, const ChannelAssignment& ca)
{
    check_shape(topo, ca);
    PreservationReport r;
    for (const Link& link : topo.links)
        if (!resolve_one(topo, ca, link))
            r.broken.push_back(link.id);
    return r;
}

LinkChannelMap resolve_surviving_links(const MeshTopology& topo, const ChannelAssignment& ca)
{
    check_shape(topo, ca);
    LinkChannelMap lcm;
    lcm.channel_count = ca.channel_count;
    lcm.channel.resize(topo.link_count());
    lcm.binding.resize(topo.link_count());
    for (const Link& link : topo.links) {
        if (const auto r = resolve_one(topo, ca, link)) {
            lcm.channel[link.id] = r->first;
            lcm.binding[link.id] = r->second;
        }
    }
    return lcm;
}

LinkChannelMap resolve_link_channels(const MeshTopology& topo, const ChannelAssignment& ca)
{
    LinkChannelMap lcm = resolve_surviving_links(topo, ca);
    std::vector<LinkId> broken;
    for (LinkId l = 0; l < lcm.link_count(); ++l)
        if (!lcm.channel[l])
            broken.push_back(l);
    if (!broken.empty())
        throw Error(fmt::format("[channel_assignment] broken link(s), endpoints share no common channel: {}",
                                fmt::join(broken, ", ")));
    return lcm;
}

ChannelAssignment relabel_channels(const ChannelAssignment& ca, const std::vector<ChannelId>& perm)
{
    if (perm.size() != ca.channel_count)
        throw Error("[channel_assignment] permutation size differs from channel count");
    ChannelAssignment out = ca;
    for (auto& radios : out.radio_channels)
        for (ChannelId& c : radios)
            c = perm.at(c);
    return out;
}

void write_assignment(std::ostream& os, const MeshTopology& topo, const ChannelAssignment& ca)
{
    check_shape(topo, ca);
    os << "scheme " << (ca.scheme_name.empty() ? "CUSTOM" : ca.scheme_name) << '\n';
    os << "channels " << ca.channel_count << '\n';
    for (NodeId u = 0; u < topo.node_count(); ++u)
        for (RadioId r = 0; r < topo.radios_per_node; ++r)
            os << u << ' ' << r << ' ' << ca.radio_channels[u][r] << '\n';
    for (const Link& link : topo.links) {
        if (ca.link_binding.empty() || !ca.link_binding[link.id])
            continue;
        const auto& b = *ca.link_binding[link.id];
        os << link.id << ' ' << b.radio_a << ' ' << b.radio_b << ' ' << ca.radio_channels[link.a][b.radio_a]
           << '\n';
    }
}

ChannelAssignment read_assignment(std::istream& is, const MeshTopology& topo)
{
    ChannelAssignment ca;
    ca.radio_channels.assign(topo.node_count(), std::vector<ChannelId>(topo.radios_per_node, 0));
    std::vector<std::vector<bool>> seen(topo.node_count(), std::vector<bool>(topo.radios_per_node, false));
    struct LinkRow {
        LinkId link;
        RadioBinding b;
        ChannelId channel;
        std::size_t line;
    };
    std::vector<LinkRow> link_rows;

    auto fail = [](std::size_t line, const std::string& msg) -> ParseError {
        return ParseError(fmt::format("[channel_assignment] line {}: {}", line, msg), line);
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (tok[0] == "scheme") {
            if (tok.size() != 2)
                throw fail(lineno, "expected `scheme <label>`");
            ca.scheme_name = tok[1];
            continue;
        }
        auto number = [&](const std::string& t) {
            std::uint64_t v = 0;
            std::size_t pos = 0;
            try {
                v = std::stoull(t, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != t.size() || t.empty() || t[0] == '-')
                throw fail(lineno, fmt::format("`{}` is not a non-negative integer", t));
            return v;
        };
        if (tok[0] == "channels") {
            if (tok.size() != 2)
                throw fail(lineno, "expected `channels <count>`");
            ca.channel_count = number(tok[1]);
            if (ca.channel_count == 0)
                throw fail(lineno, "channel count must be positive");
            continue;
        }
        if (ca.channel_count == 0)
            throw fail(lineno, "`channels <count>` must precede assignment rows");
        if (tok.size() == 3) {
            const auto u = number(tok[0]);
            const auto r = number(tok[1]);
            const auto c = number(tok[2]);
            if (u >= topo.node_count())
                throw fail(lineno, fmt::format("unknown node {}", u));
            if (r >= topo.radios_per_node)
                throw fail(lineno, fmt::format("node {} has no radio {}", u, r));
            if (c >= ca.channel_count)
                throw fail(lineno, fmt::format("channel {} out of range [0, {})", c, ca.channel_count));
            if (seen[u][r])
                throw fail(lineno, fmt::format("radio {} of node {} assigned twice", r, u));
            seen[u][r] = true;
            ca.radio_channels[u][r] = static_cast<ChannelId>(c);
        } else if (tok.size() == 4) {
            const auto l = number(tok[0]);
            const auto ra = number(tok[1]);
            const auto rb = number(tok[2]);
            const auto c = number(tok[3]);
            if (l >= topo.link_count())
                throw fail(lineno, fmt::format("unknown link {}", l));
            if (ra >= topo.radios_per_node || rb >= topo.radios_per_node)
                throw fail(lineno, fmt::format("link {} binds a non-existent radio", l));
            if (c >= ca.channel_count)
                throw fail(lineno, fmt::format("channel {} out of range [0, {})", c, ca.channel_count));
            link_rows.push_back({static_cast<LinkId>(l),
                                 RadioBinding{static_cast<RadioId>(ra), static_cast<RadioId>(rb)},
                                 static_cast<ChannelId>(c), lineno});
        } else {
            throw fail(lineno, "expected `node radio channel` or `link radioA radioB channel`");
        }
    }
    if (ca.channel_count == 0)
        throw ParseError("[channel_assignment] missing `channels <count>`", lineno);
    for (NodeId u = 0; u < topo.node_count(); ++u)
        for (RadioId r = 0; r < topo.radios_per_node; ++r)
            if (!seen[u][r])
                throw ParseError(fmt::format("[channel_assignment] radio {} of node {} has no channel", r, u),
                                 lineno);
    if (!link_rows.empty()) {
        ca.link_binding.assign(topo.link_count(), std::nullopt);
        for (const auto& row : link_rows) {
            if (ca.link_binding[row.link])
                throw fail(row.line, fmt::format("link {} bound twice", row.link));
            const Link& link = topo.links[row.link];
            if (ca.radio_channels[link.a][row.b.radio_a] != row.channel
                || ca.radio_channels[link.b][row.b.radio_b] != row.channel)
                throw fail(row.line, fmt::format("broken link {}: bound radios are not both on channel {}",
                                                 row.link, row.channel));
            ca.link_binding[row.link] = row.b;
        }
    }
    return ca;
}

} // namespace wmn
