#include "wmn/topology.hpp"

#include "wmn/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

namespace wmn {

double distance(const Position& p, const Position& q)
{
    return std::hypot(p.x - q.x, p.y - q.y);
}

double MeshTopology::link_length(LinkId l) const
{
    return distance(nodes[links[l].a].pos, nodes[links[l].b].pos);
}

void check_structure(const MeshTopology& topo)
{
    const std::size_t n = topo.node_count();
    for (std::size_t i = 0; i < n; ++i)
        if (topo.nodes[i].id != i)
            throw Error(fmt::format("[topology] node at index {} has id {}", i, topo.nodes[i].id));
    if (topo.radios_per_node == 0)
        throw Error("[topology] radios_per_node must be positive");
    if (!(topo.tx_range > 0.0))
        throw Error("[topology] tx_range must be positive");

    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t i = 0; i < topo.link_count(); ++i) {
        const Link& l = topo.links[i];
        if (l.id != i)
            throw Error(fmt::format("[topology] link at index {} has id {}", i, l.id));
        if (l.a >= n || l.b >= n)
            throw Error(fmt::format("[topology] link {} references unknown node", l.id));
        if (l.a == l.b)
            throw Error(fmt::format("[topology] link {} is a self link", l.id));
        if (!seen.emplace(std::min(l.a, l.b), std::max(l.a, l.b)).second)
            throw Error(fmt::format("[topology] duplicate link {} ({}-{})", l.id, l.a, l.b));
        // Small slack so files written with rounded coordinates still load.
        if (topo.link_length(l.id) > topo.tx_range * (1.0 + 1e-9))
            throw Error(fmt::format("[topology] link {} is {:.3f} m long, beyond tx_range {}",
                                    l.id, topo.link_length(l.id), topo.tx_range));
    }
}

std::vector<std::vector<NodeId>> node_adjacency(const MeshTopology& topo)
{
    std::vector<std::vector<NodeId>> adj(topo.node_count());
    for (const Link& l : topo.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    for (auto& v : adj)
        std::sort(v.begin(), v.end());
    return adj;
}

std::vector<std::vector<LinkId>> incident_links(const MeshTopology& topo)
{
    std::vector<std::vector<LinkId>> inc(topo.node_count());
    for (const Link& l : topo.links) {
        inc[l.a].push_back(l.id);
        inc[l.b].push_back(l.id);
    }
    return inc;
}

std::vector<int> hop_distances(const MeshTopology& topo, NodeId src, const std::vector<bool>& alive)
{
    const auto inc = incident_links(topo);
    std::vector<int> dist(topo.node_count(), -1);
    std::queue<NodeId> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (LinkId l : inc[u]) {
            if (!alive.empty() && !alive[l])
                continue;
            const Link& link = topo.links[l];
            const NodeId v = link.a == u ? link.b : link.a;
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

bool is_connected(const MeshTopology& topo)
{
    if (topo.node_count() == 0)
        return true;
    const auto d = hop_distances(topo, 0);
    return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
}

double clustering_coefficient(const std::vector<std::vector<NodeId>>& adj)
{
    // Each triangle is seen once per corner; each corner contributes one closed triplet.
    std::uint64_t closed = 0;
    std::uint64_t triplets = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        const auto& nv = adj[v];
        const std::uint64_t d = nv.size();
        triplets += d * (d - 1) / 2;
        for (std::size_t i = 0; i < nv.size(); ++i)
            for (std::size_t j = i + 1; j < nv.size(); ++j)
                if (std::binary_search(adj[nv[i]].begin(), adj[nv[i]].end(), nv[j]))
                    ++closed;
    }
    return triplets == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triplets);
}

GlobalMetrics global_metrics(const MeshTopology& topo)
{
    GlobalMetrics m;
    const std::size_t n = topo.node_count();
    if (n >= 2)
        m.density = static_cast<double>(topo.link_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
    m.clustering_coefficient = clustering_coefficient(node_adjacency(topo));

    m.min_eccentricity = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ecc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                ecc = std::max(ecc, distance(topo.nodes[i].pos, topo.nodes[j].pos));
        m.geo_diameter = std::max(m.geo_diameter, ecc);
        if (n > 1)
            m.min_eccentricity = std::min(m.min_eccentricity, ecc);
    }

    m.connected = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (int d : hop_distances(topo, static_cast<NodeId>(i))) {
            if (d < 0)
                m.connected = false;
            else
                m.hop_diameter = std::max(m.hop_diameter, d);
        }
    }
    return m;
}

namespace {

struct Candidate {
    NodeId a;
    NodeId b;
};

// Edge subset of the in-range candidate graph, with incrementally maintained
// transitivity counters.
class EdgeState {
public:
    EdgeState(std::size_t n, std::vector<Candidate> cands)
        : n_(n), cands_(std::move(cands)), selected_(cands_.size(), false),
          adj_(n * n, 0), degree_(n, 0)
    {
    }

    std::size_t candidate_count() const { return cands_.size(); }
    std::size_t edge_count() const { return edges_; }
    bool selected(std::size_t c) const { return selected_[c]; }

    double cc() const
    {
        return triplets_ == 0 ? 0.0 : static_cast<double>(closed_) / static_cast<double>(triplets_);
    }

    void add(std::size_t c)
    {
        const auto [a, b] = cands_[c];
        const std::uint64_t common = common_neighbours(a, b);
        closed_ += 3 * common;
        triplets_ += degree_[a] + degree_[b];
        set(a, b, 1);
        ++degree_[a];
        ++degree_[b];
        selected_[c] = true;
        ++edges_;
    }

    void remove(std::size_t c)
    {
        const auto [a, b] = cands_[c];
        set(a, b, 0);
        --degree_[a];
        --degree_[b];
        const std::uint64_t common = common_neighbours(a, b);
        closed_ -= 3 * common;
        triplets_ -= degree_[a] + degree_[b];
        selected_[c] = false;
        --edges_;
    }

    bool connected() const
    {
        std::vector<char> seen(n_, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n_; ++v) {
                if (adj_[u * n_ + v] && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n_;
    }

private:
    void set(NodeId a, NodeId b, char v)
    {
        adj_[a * n_ + b] = v;
        adj_[b * n_ + a] = v;
    }

    std::uint64_t common_neighbours(NodeId a, NodeId b) const
    {
        std::uint64_t c = 0;
        for (std::size_t w = 0; w < n_; ++w)
            c += adj_[a * n_ + w] & adj_[b * n_ + w];
        return c;
    }

    std::size_t n_;
    std::vector<Candidate> cands_;
    std::vector<bool> selected_;
    std::vector<char> adj_;
    std::vector<std::uint64_t> degree_;
    std::size_t edges_ = 0;
    // closed triplets (3 per triangle) and connected triplets, sum of C(deg, 2)
    std::uint64_t closed_ = 0;
    std::uint64_t triplets_ = 0;
};

// Each new node is drawn uniformly from the area and kept only if it lands in
// range of an already placed node, so the candidate graph is always connected.
std::vector<Position> place_nodes(const GenTargets& t, Rng& rng)
{
    std::vector<Position> pos;
    pos.reserve(t.node_count);
    pos.push_back({rng.uniform(0.0, t.area.width), rng.uniform(0.0, t.area.height)});
    while (pos.size() < t.node_count) {
        const Position p{rng.uniform(0.0, t.area.width), rng.uniform(0.0, t.area.height)};
        for (const Position& q : pos) {
            if (distance(p, q) <= t.tx_range) {
                pos.push_back(p);
                break;
            }
        }
    }
    return pos;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
            x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

MeshTopology generate_rwmn(const GenTargets& t)
{
    if (t.node_count < 4)
        throw Error(fmt::format("[topology] node_count must be >= 4, got {}", t.node_count));
    if (t.density_target < 0.0 || t.density_target > 1.0 || t.cc_target < 0.0 || t.cc_target > 1.0)
        throw Error("[topology] density and clustering targets must lie in [0, 1]");
    if (t.density_tol < 0.0 || t.cc_tol < 0.0)
        throw Error("[topology] tolerances must be non-negative");
    if (t.radios_per_node == 0 || !(t.tx_range > 0.0) || !(t.area.width > 0.0) || !(t.area.height > 0.0))
        throw Error("[topology] radios, tx_range and area must be positive");

    const std::size_t n = t.node_count;
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    constexpr double kSlack = 1e-9;
    const auto max_links = static_cast<std::size_t>(std::floor((t.density_target + t.density_tol) * pairs + kSlack));
    const double low = (t.density_target - t.density_tol) * pairs - kSlack;
    const std::size_t min_links = std::max<std::size_t>(n - 1, low > 0.0 ? static_cast<std::size_t>(std::ceil(low)) : 0);
    if (max_links < n - 1)
        throw InfeasibleError(fmt::format(
            "[topology] unreachable: density below connectivity minimum "
            "(at most {} links allowed, a connected {}-node graph needs {})",
            max_links, n, n - 1));
    if (min_links > max_links)
        throw InfeasibleError("[topology] unreachable: density tolerance admits no link count");
    const std::size_t target_links = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(t.density_target * pairs)), min_links, max_links);

    const double dscale = std::max(t.density_tol, 1e-3);
    const double cscale = std::max(t.cc_tol, 1e-3);
    auto within = [&](const EdgeState& s) {
        const double d = static_cast<double>(s.edge_count()) / pairs;
        return std::abs(d - t.density_target) <= t.density_tol + kSlack
            && std::abs(s.cc() - t.cc_target) <= t.cc_tol + kSlack;
    };
    auto cost = [&](const EdgeState& s) {
        const double d = (static_cast<double>(s.edge_count()) / pairs - t.density_target) / dscale;
        const double c = (s.cc() - t.cc_target) / cscale;
        return d * d + c * c;
    };

    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_candidates = 0;
    for (int placement = 0; placement < t.max_placements; ++placement) {
        Rng rng(mix_seed(t.seed, static_cast<std::uint64_t>(placement)));
        const std::vector<Position> pos = place_nodes(t, rng);

        std::vector<Candidate> cands;
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                if (distance(pos[a], pos[b]) <= t.tx_range)
                    cands.push_back({a, b});
        best_candidates = std::max(best_candidates, cands.size());
        if (cands.size() < min_links)
            continue;

        EdgeState state(n, cands);
        {
            std::vector<std::size_t> order(cands.size());
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            UnionFind uf(n);
            for (std::size_t c : order)
                if (uf.unite(cands[c].a, cands[c].b))
                    state.add(c);
            for (std::size_t c : order)
                if (state.edge_count() < target_links && !state.selected(c))
                    state.add(c);
        }

        double current = cost(state);
        for (int step = 0; step < t.steps_per_placement && !within(state); ++step) {
            const std::size_t m = state.candidate_count();
            const double r = rng.uniform();
            const bool can_add = state.edge_count() < std::min(max_links, m);
            const bool can_remove = state.edge_count() > min_links;

            auto pick = [&](bool selected) {
                std::size_t c = rng.below(m);
                while (state.selected(c) != selected)
                    c = rng.below(m);
                return c;
            };

            if (r < 0.2 && can_add) {
                const std::size_t c = pick(false);
                state.add(c);
                const double next = cost(state);
                if (next <= current)
                    current = next;
                else
                    state.remove(c);
            } else if (r < 0.4 && can_remove) {
                const std::size_t c = pick(true);
                state.remove(c);
                const double next = cost(state);
                if (next <= current && state.connected())
                    current = next;
                else
                    state.add(c);
            } else if (state.edge_count() < m) {
                const std::size_t out = pick(true);
                const std::size_t in = pick(false);
                state.remove(out);
                state.add(in);
                const double next = cost(state);
                if (next <= current && state.connected()) {
                    current = next;
                } else {
                    state.remove(in);
                    state.add(out);
                }
            }
        }
        best_cost = std::min(best_cost, current);
        if (!within(state))
            continue;

        MeshTopology topo;
        topo.radios_per_node = t.radios_per_node;
        topo.tx_range = t.tx_range;
        topo.area = t.area;
        for (NodeId i = 0; i < n; ++i)
            topo.nodes.push_back({i, pos[i]});
        for (std::size_t c = 0; c < cands.size(); ++c)
            if (state.selected(c))
                topo.links.push_back({static_cast<LinkId>(topo.links.size()), cands[c].a, cands[c].b});
        return topo;
    }

    throw InfeasibleError(fmt::format(
        "[topology] unreachable: no placement met density {}±{} and clustering {}±{} "
        "within {} placements x {} steps (best normalised cost {:.4f}, most candidate links {})",
        t.density_target, t.density_tol, t.cc_target, t.cc_tol, t.max_placements,
        t.steps_per_placement, best_cost, best_candidates));
}

ValidationReport validate_topology(const MeshTopology& topo, const GenTargets& targets)
{
    ValidationReport r;
    try {
        check_structure(topo);
    } catch (const Error& e) {
        r.problems.emplace_back(e.what());
    }
    const GlobalMetrics m = global_metrics(topo);
    r.connected = m.connected;
    if (!m.connected)
        r.problems.emplace_back("not connected");
    if (topo.node_count() != targets.node_count)
        r.problems.push_back(fmt::format("node count {} differs from target {}", topo.node_count(), targets.node_count));

    auto check = [&](std::string name, double target, double tol, double measured) {
        r.checks.push_back({std::move(name), target, tol, measured,
                            std::abs(measured - target) <= tol + 1e-9});
    };
    check("density", targets.density_target, targets.density_tol, m.density);
    check("clustering_coefficient", targets.cc_target, targets.cc_tol, m.clustering_coefficient);

    r.pass = r.problems.empty()
        && std::all_of(r.checks.begin(), r.checks.end(), [](const TargetCheck& c) { return c.pass; });
    return r;
}

} // namespace wmn
