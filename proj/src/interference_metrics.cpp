#include "wmn/interference_metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace wmn {

std::vector<std::size_t> channel_loads(const LinkChannelMap& lcm)
{
    std::vector<std::size_t> loads(lcm.channel_count, 0);
    for (const auto& c : lcm.channel) {
        if (!c)
            continue;
        if (*c >= loads.size())
            throw Error(fmt::format("[interference_metrics] channel {} outside [0, {})", *c, loads.size()));
        ++loads[*c];
    }
    return loads;
}

double cdal_cost(std::span<const std::size_t> loads)
{
    if (loads.empty())
        throw Error("[interference_metrics] CDAL cost needs at least one channel");
    double mean = 0.0;
    for (std::size_t x : loads)
        mean += static_cast<double>(x);
    mean /= static_cast<double>(loads.size());
    double ss = 0.0;
    for (std::size_t x : loads)
        ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
    return std::sqrt(ss / static_cast<double>(loads.size()));
}

double cdal_cost(const LinkChannelMap& lcm)
{
    if (lcm.resolved_count() == 0)
        throw Error("[interference_metrics] CDAL cost of an empty link map");
    const auto loads = channel_loads(lcm);
    return cdal_cost(loads);
}

namespace {

// ESU enumeration (Wernicke) of connected vertex sets in the line graph.
class LinkSetEnumerator {
public:
    LinkSetEnumerator(std::vector<std::vector<LinkId>> adj, unsigned k) : adj_(std::move(adj)), k_(k) {}

    std::vector<XLinkSet> run()
    {
        in_set_.assign(adj_.size(), false);
        near_.assign(adj_.size(), 0);
        for (LinkId v = 0; v < adj_.size(); ++v) {
            if (!active(v))
                continue;
            root_ = v;
            std::vector<LinkId> ext;
            for (LinkId u : adj_[v])
                if (u > v)
                    ext.push_back(u);
            push(v);
            extend(ext);
            pop(v);
        }
        return std::move(out_);
    }

    void set_active(std::vector<bool> active) { active_ = std::move(active); }

private:
    bool active(LinkId v) const { return active_.empty() || active_[v]; }

    void push(LinkId v)
    {
        in_set_[v] = true;
        current_.push_back(v);
        ++near_[v];
        for (LinkId u : adj_[v])
            ++near_[u];
    }

    void pop(LinkId v)
    {
        in_set_[v] = false;
        current_.pop_back();
        --near_[v];
        for (LinkId u : adj_[v])
            --near_[u];
    }

    void extend(std::vector<LinkId> ext)
    {
        if (current_.size() == k_) {
            XLinkSet s = current_;
            std::sort(s.begin(), s.end());
            out_.push_back(std::move(s));
            return;
        }
        while (!ext.empty()) {
            const LinkId w = ext.back();
            ext.pop_back();
            // Exclusive neighbourhood of w: not in, nor adjacent to, the current set.
            std::vector<LinkId> next = ext;
            for (LinkId u : adj_[w])
                if (u > root_ && near_[u] == 0)
                    next.push_back(u);
            push(w);
            extend(std::move(next));
            pop(w);
        }
    }

    std::vector<std::vector<LinkId>> adj_;
    unsigned k_;
    std::vector<bool> active_;
    std::vector<bool> in_set_;
    std::vector<unsigned> near_;
    std::vector<LinkId> current_;
    LinkId root_ = 0;
    std::vector<XLinkSet> out_;
};

} // namespace

std::vector<XLinkSet> enumerate_x_link_sets(const MeshTopology& topo, const LinkChannelMap& lcm, unsigned x)
{
    if (x == 0)
        throw Error("[interference_metrics] X-link sets need x >= 1");
    if (lcm.link_count() != topo.link_count())
        throw Error("[interference_metrics] channel map does not match topology");

    const auto inc = incident_links(topo);
    std::vector<std::vector<LinkId>> adj(topo.link_count());
    for (const auto& links : inc)
        for (LinkId a : links)
            for (LinkId b : links)
                if (a != b && lcm.resolved(a) && lcm.resolved(b))
                    adj[a].push_back(b);
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    std::vector<bool> active(topo.link_count());
    for (LinkId l = 0; l < topo.link_count(); ++l)
        active[l] = lcm.resolved(l);

    LinkSetEnumerator e(std::move(adj), x);
    e.set_active(std::move(active));
    auto sets = e.run();
    std::sort(sets.begin(), sets.end());
    return sets;
}

std::uint64_t cxls_wt(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg, unsigned x)
{
    if (x != cg.ir_tr_ratio())
        throw Error(fmt::format("[interference_metrics] x = {} does not match the conflict graph's I_r:T_r = {}",
                                x, cg.ir_tr_ratio()));
    std::uint64_t total = 0;
    for (const XLinkSet& s : enumerate_x_link_sets(topo, lcm, x))
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (*lcm.channel[s[i]] == *lcm.channel[s[j]] && cg.adjacent(s[i], s[j]))
                    ++total;
    return total;
}

CppmValues compute_cppms(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg)
{
    CppmValues v;
    v.tid = static_cast<double>(total_interference_degree(cg, lcm));
    v.cdal = cdal_cost(lcm);
    v.cxls = static_cast<double>(cxls_wt(topo, lcm, cg, cg.ir_tr_ratio()));
    return v;
}

} // namespace wmn
