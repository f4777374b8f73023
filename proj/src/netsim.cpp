#include "wmn/netsim.hpp"

#include "wmn/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>

namespace wmn {

std::string_view mode_name(TransportMode m)
{
    return m == TransportMode::tcp ? "tcp" : "udp";
}

TransportMode parse_mode(std::string_view s)
{
    std::string low(s);
    for (char& c : low)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "tcp")
        return TransportMode::tcp;
    if (low == "udp")
        return TransportMode::udp;
    throw Error(fmt::format("[netsim] unknown transport mode `{}`", s));
}

double SimParams::slot_duration_us() const
{
    return slot_us > 0.0 ? slot_us : static_cast<double>(mss_bytes) * 8.0 / phy_rate_mbps;
}

namespace {

std::vector<bool> working_links(const MeshTopology& topo, const LinkChannelMap* lcm)
{
    std::vector<bool> alive(topo.link_count(), true);
    if (lcm)
        for (LinkId l = 0; l < topo.link_count(); ++l)
            alive[l] = lcm->resolved(l);
    return alive;
}

struct Hop {
    LinkId link;
    std::size_t unit; // directed link: 2 * link + (travelling b -> a)
};

// Min-hop route; BFS expands incident links in id order so ties are stable.
std::vector<Hop> shortest_route(const MeshTopology& topo, const std::vector<std::vector<LinkId>>& inc,
                                const std::vector<bool>& alive, NodeId src, NodeId dst)
{
    constexpr LinkId kNone = std::numeric_limits<LinkId>::max();
    std::vector<LinkId> via(topo.node_count(), kNone);
    std::vector<bool> seen(topo.node_count(), false);
    std::deque<NodeId> q{src};
    seen[src] = true;
    while (!q.empty() && !seen[dst]) {
        const NodeId u = q.front();
        q.pop_front();
        for (LinkId l : inc[u]) {
            if (!alive[l])
                continue;
            const Link& link = topo.links[l];
            const NodeId v = link.a == u ? link.b : link.a;
            if (!seen[v]) {
                seen[v] = true;
                via[v] = l;
                q.push_back(v);
            }
        }
    }
    if (!seen[dst])
        return {};
    std::vector<Hop> route;
    for (NodeId v = dst; v != src;) {
        const Link& link = topo.links[via[v]];
        const NodeId u = link.a == v ? link.b : link.a;
        route.push_back({link.id, 2 * static_cast<std::size_t>(link.id) + (u == link.a ? 0 : 1)});
        v = u;
    }
    std::reverse(route.begin(), route.end());
    return route;
}

struct Packet {
    std::uint32_t flow;
    std::uint32_t hop;
    std::uint32_t retries;
    std::int64_t created_slot;
    std::int64_t ready_slot; // MAC backoff: may not contend before this slot
};

struct FlowState {
    std::vector<Hop> route;
    // TCP
    std::uint64_t segments_done = 0;
    bool in_flight = false;
    std::int64_t resume_slot = 0;
    unsigned backoff = 0;
    // UDP
    std::uint64_t generated = 0;
    std::uint64_t resolved = 0; // delivered or lost
    std::int64_t finished_slot = -1;
    double delay_sum_us = 0.0;
};

} // namespace

TrafficScenario build_scenario(const MeshTopology& topo, const LinkChannelMap* lcm, std::size_t n_flows,
                               std::uint64_t seed, std::string label)
{
    const auto alive = working_links(topo, lcm);
    std::vector<Flow> eligible;
    for (NodeId s = 0; s < topo.node_count(); ++s) {
        const auto d = hop_distances(topo, s, alive);
        for (NodeId t = 0; t < topo.node_count(); ++t)
            if (t != s && d[t] >= kMinFlowHops && d[t] <= kMaxFlowHops)
                eligible.push_back({s, t});
    }
    if (eligible.empty())
        throw InfeasibleError("[netsim] no eligible pairs: no node pair is 3 to 11 hops apart");
    if (eligible.size() < n_flows)
        throw InfeasibleError(fmt::format("[netsim] only {} eligible pairs for {} flows", eligible.size(), n_flows));

    Rng rng(seed);
    // Partial Fisher-Yates: the first n_flows entries form the sample.
    for (std::size_t i = 0; i < n_flows; ++i)
        std::swap(eligible[i], eligible[i + rng.below(eligible.size() - i)]);
    eligible.resize(n_flows);
    if (label.empty())
        label = fmt::format("{}-flows", n_flows);
    return {std::move(label), std::move(eligible)};
}

SimResult simulate(const MeshTopology& topo, const LinkChannelMap& lcm, const ConflictGraph& cg,
                   const TrafficScenario& scenario, const SimParams& p)
{
    if (lcm.link_count() != topo.link_count() || cg.vertex_count() != topo.link_count())
        throw Error("[netsim] channel map / conflict graph do not match the topology");
    if (!(p.udp_tx_prob > 0.0 && p.udp_tx_prob <= 1.0))
        throw Error("[netsim] udp_tx_prob must lie in (0, 1]");
    if (!(p.phy_rate_mbps > 0.0) || !(p.horizon_s > 0.0) || p.mss_bytes == 0 || p.udp_packet_bytes == 0
        || p.file_bytes == 0 || p.queue_limit == 0 || p.udp_interval_ms < 0.0 || p.slot_us < 0.0)
        throw Error("[netsim] simulation parameters must be positive");

    const double slot_us = p.slot_duration_us();
    const auto horizon = static_cast<std::int64_t>(std::floor(p.horizon_s * 1e6 / slot_us));
    const bool tcp = p.mode == TransportMode::tcp;
    const std::size_t packet_bytes = tcp ? p.mss_bytes : p.udp_packet_bytes;
    const std::uint64_t packets_per_flow = (p.file_bytes + packet_bytes - 1) / packet_bytes;
    const auto rto_slots = std::max<std::int64_t>(1, std::llround(p.tcp_min_rto_ms * 1e3 / slot_us));
    const double interval_slots = p.udp_interval_ms * 1e3 / slot_us;

    // Link-level conflict tables: `collide` for any same-channel conflict,
    // `deferred` for the subset that TCP's RTS/CTS exchange resolves.
    const std::size_t nl = topo.link_count();
    std::vector<char> collide(nl * nl, 0);
    std::vector<char> deferred(nl * nl, 0);
    for (const auto& e : cg.edges()) {
        if (!lcm.resolved(e.a) || !lcm.resolved(e.b) || *lcm.channel[e.a] != *lcm.channel[e.b])
            continue;
        collide[e.a * nl + e.b] = collide[e.b * nl + e.a] = 1;
        bool heard = !p.tcp_hidden_interference;
        const Link& la = topo.links[e.a];
        const Link& lb = topo.links[e.b];
        for (NodeId u : {la.a, la.b})
            for (NodeId v : {lb.a, lb.b})
                heard = heard || distance(topo.nodes[u].pos, topo.nodes[v].pos) <= topo.tx_range;
        if (heard)
            deferred[e.a * nl + e.b] = deferred[e.b * nl + e.a] = 1;
    }
    auto conflicts = [&](const std::vector<char>& table, std::size_t u, std::size_t v) {
        const std::size_t a = u / 2;
        const std::size_t b = v / 2;
        return a == b || table[a * nl + b];
    };

    const auto alive = working_links(topo, &lcm);
    const auto inc = incident_links(topo);
    std::vector<FlowState> flows(scenario.flows.size());
    SimResult r;
    r.flows.resize(flows.size());
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const Flow& fl = scenario.flows[f];
        if (fl.src >= topo.node_count() || fl.dst >= topo.node_count() || fl.src == fl.dst)
            throw Error(fmt::format("[netsim] flow {} has invalid endpoints {} -> {}", f, fl.src, fl.dst));
        flows[f].route = shortest_route(topo, inc, alive, fl.src, fl.dst);
        r.flows[f].hops = static_cast<int>(flows[f].route.size());
        r.flows[f].min_delay_us = std::numeric_limits<double>::infinity();
        if (!flows[f].route.empty())
            r.bytes_offered += p.file_bytes;
    }

    Rng rng(p.seed);
    std::vector<std::deque<Packet>> queues(2 * nl);
    std::vector<std::size_t> source_backlog(flows.size(), 0);
    std::size_t queued = 0;

    auto lose = [&](const Packet& pkt, std::int64_t t) {
        FlowState& fs = flows[pkt.flow];
        if (tcp) {
            fs.in_flight = false;
            fs.resume_slot = t + 1 + (rto_slots << std::min(fs.backoff, 6u));
            ++fs.backoff;
        } else {
            ++fs.resolved;
        }
    };
    auto enqueue = [&](const Packet& pkt, std::int64_t t) {
        auto& q = queues[flows[pkt.flow].route[pkt.hop].unit];
        if (q.size() >= p.queue_limit) {
            lose(pkt, t);
            return;
        }
        q.push_back(pkt);
        ++queued;
        if (pkt.hop == 0)
            ++source_backlog[pkt.flow];
    };
    auto inject = [&](std::size_t f, std::int64_t t) {
        ++r.packets_sent;
        ++r.flows[f].sent;
        enqueue(Packet{static_cast<std::uint32_t>(f), 0, 0, t, t}, t);
    };

    // Next slot at which some source may inject; horizon when none will.
    auto next_injection = [&](std::int64_t t) {
        std::int64_t next = horizon;
        for (std::size_t f = 0; f < flows.size(); ++f) {
            const FlowState& fs = flows[f];
            if (fs.route.empty())
                continue;
            if (tcp) {
                if (fs.segments_done < packets_per_flow && !fs.in_flight)
                    next = std::min(next, std::max(t, fs.resume_slot));
            } else if (fs.generated < packets_per_flow) {
                if (interval_slots <= 0.0)
                    return t;
                next = std::min(next, std::max(t, static_cast<std::int64_t>(
                                                      std::ceil(static_cast<double>(fs.generated) * interval_slots))));
            }
        }
        return next;
    };

    std::vector<std::size_t> contenders;
    std::vector<std::size_t> transmitting;
    std::vector<char> failed;
    for (std::int64_t t = 0; t < horizon;) {
        if (queued == 0) {
            const std::int64_t next = next_injection(t);
            if (next >= horizon)
                break;
            t = next;
        }

        for (std::size_t f = 0; f < flows.size(); ++f) {
            FlowState& fs = flows[f];
            if (fs.route.empty())
                continue;
            if (tcp) {
                if (fs.segments_done < packets_per_flow && !fs.in_flight && t >= fs.resume_slot) {
                    fs.in_flight = true;
                    inject(f, t);
                }
            } else if (interval_slots <= 0.0) {
                if (fs.generated < packets_per_flow && source_backlog[f] == 0) {
                    ++fs.generated;
                    inject(f, t);
                }
            } else {
                while (fs.generated < packets_per_flow
                       && std::ceil(static_cast<double>(fs.generated) * interval_slots) <= static_cast<double>(t)) {
                    ++fs.generated;
                    inject(f, t);
                }
            }
        }

        contenders.clear();
        for (std::size_t u = 0; u < queues.size(); ++u)
            if (!queues[u].empty() && queues[u].front().ready_slot <= t)
                contenders.push_back(u);

        transmitting.clear();
        if (tcp) {
            rng.shuffle(contenders);
            for (std::size_t u : contenders) {
                bool blocked = false;
                for (std::size_t v : transmitting)
                    blocked = blocked || conflicts(deferred, u, v);
                if (!blocked)
                    transmitting.push_back(u);
            }
        } else {
            for (std::size_t u : contenders)
                if (rng.bernoulli(p.udp_tx_prob))
                    transmitting.push_back(u);
        }

        failed.assign(transmitting.size(), 0);
        for (std::size_t i = 0; i < transmitting.size(); ++i)
            for (std::size_t j = i + 1; j < transmitting.size(); ++j)
                if (conflicts(collide, transmitting[i], transmitting[j]))
                    failed[i] = failed[j] = 1;

        for (std::size_t i = 0; i < transmitting.size(); ++i) {
            auto& q = queues[transmitting[i]];
            Packet pkt = q.front();
            FlowState& fs = flows[pkt.flow];
            if (failed[i]) {
                if (tcp && ++q.front().retries <= p.mac_retry_limit) {
                    // Binary exponential backoff, contention window capped at 64 slots.
                    const std::uint64_t window = std::uint64_t{1} << std::min(q.front().retries, 6u);
                    q.front().ready_slot = t + 1 + static_cast<std::int64_t>(rng.below(window));
                    continue;
                }
                q.pop_front();
                --queued;
                if (pkt.hop == 0)
                    --source_backlog[pkt.flow];
                lose(pkt, t);
                continue;
            }
            q.pop_front();
            --queued;
            if (pkt.hop == 0)
                --source_backlog[pkt.flow];
            ++pkt.hop;
            pkt.retries = 0;
            pkt.ready_slot = t + 1;
            if (pkt.hop < fs.route.size()) {
                enqueue(pkt, t);
                continue;
            }
            const double delay = static_cast<double>(t + 1 - pkt.created_slot) * slot_us;
            FlowStats& st = r.flows[pkt.flow];
            ++st.delivered;
            st.min_delay_us = std::min(st.min_delay_us, delay);
            fs.delay_sum_us += delay;
            ++r.packets_delivered;
            if (tcp) {
                fs.in_flight = false;
                fs.backoff = 0;
                if (++fs.segments_done == packets_per_flow)
                    fs.finished_slot = t + 1;
            } else {
                ++fs.resolved;
            }
        }
        for (std::size_t f = 0; f < flows.size(); ++f) {
            FlowState& fs = flows[f];
            if (!tcp && fs.finished_slot < 0 && fs.generated == packets_per_flow && fs.resolved == packets_per_flow)
                fs.finished_slot = t + 1;
        }
        ++t;
    }

    const double horizon_us = static_cast<double>(horizon) * slot_us;
    double delay_sum = 0.0;
    double throughput_bits_per_us = 0.0;
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const FlowState& fs = flows[f];
        FlowStats& st = r.flows[f];
        st.completed = fs.finished_slot >= 0;
        if (st.completed)
            st.completion_us = static_cast<double>(fs.finished_slot) * slot_us;
        if (st.delivered == 0)
            st.min_delay_us = 0.0;
        delay_sum += fs.delay_sum_us;
        const std::uint64_t bits = st.delivered * packet_bytes * 8;
        r.bytes_delivered += st.delivered * packet_bytes;
        const double duration = st.completed ? static_cast<double>(fs.finished_slot) * slot_us : horizon_us;
        if (duration > 0.0)
            throughput_bits_per_us += static_cast<double>(bits) / duration;
        const bool disrupted = fs.route.empty() || (tcp ? !st.completed : st.delivered == 0);
        if (disrupted)
            ++r.dfc;
    }
    r.throughput_mbps = throughput_bits_per_us; // bits per microsecond == Mbit/s
    r.pdr_pct = r.packets_sent == 0 ? 0.0
                                    : 100.0 * static_cast<double>(r.packets_delivered)
                                          / static_cast<double>(r.packets_sent);
    r.eed_us = r.packets_delivered == 0 ? horizon_us : delay_sum / static_cast<double>(r.packets_delivered);
    // The last TCP segment can overshoot the file size; report file bytes at most.
    if (tcp)
        r.bytes_delivered = std::min(r.bytes_delivered, r.bytes_offered);
    return r;
}

NpmSummary aggregate_npms(std::span<const SimResult> results)
{
    if (results.empty())
        throw Error("[netsim] cannot aggregate an empty result set");
    NpmSummary s;
    for (const SimResult& r : results) {
        s.throughput_mbps += r.throughput_mbps;
        s.dfc += static_cast<double>(r.dfc);
        s.pdr_pct += r.pdr_pct;
        s.eed_us += r.eed_us;
    }
    const auto n = static_cast<double>(results.size());
    s.throughput_mbps /= n;
    s.dfc /= n;
    s.pdr_pct /= n;
    s.eed_us /= n;
    return s;
}

} // namespace wmn
