#pragma once

#include "wmn/channel_assignment.hpp"
#include "wmn/topology.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace fixture {

inline wmn::MeshTopology make_topology(std::initializer_list<wmn::Position> pos,
                                       std::initializer_list<std::pair<wmn::NodeId, wmn::NodeId>> links,
                                       unsigned radios = 3, double tx_range = 250.0)
{
    wmn::MeshTopology t;
    t.radios_per_node = radios;
    t.tx_range = tx_range;
    wmn::NodeId id = 0;
    for (const auto& p : pos)
        t.nodes.push_back({id++, p});
    wmn::LinkId lid = 0;
    for (const auto& [a, b] : links)
        t.links.push_back({lid++, a, b});
    return t;
}

// Nodes 0..n-1 on a horizontal line, `spacing` apart, consecutive nodes linked.
inline wmn::MeshTopology path(std::size_t n, double spacing = 250.0, unsigned radios = 3)
{
    wmn::MeshTopology t;
    t.radios_per_node = radios;
    for (std::size_t i = 0; i < n; ++i)
        t.nodes.push_back({static_cast<wmn::NodeId>(i), {spacing * static_cast<double>(i), 0.0}});
    for (std::size_t i = 0; i + 1 < n; ++i)
        t.links.push_back({static_cast<wmn::LinkId>(i), static_cast<wmn::NodeId>(i), static_cast<wmn::NodeId>(i + 1)});
    return t;
}

inline wmn::MeshTopology triangle()
{
    return make_topology({{0, 0}, {200, 0}, {100, 150}}, {{0, 1}, {1, 2}, {0, 2}});
}

inline wmn::MeshTopology k4()
{
    return make_topology({{0, 0}, {150, 0}, {0, 150}, {150, 150}}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

// Hub 0 with three leaves.
inline wmn::MeshTopology star3()
{
    return make_topology({{0, 0}, {200, 0}, {-200, 0}, {0, 200}}, {{0, 1}, {0, 2}, {0, 3}});
}

// Every radio of every node on one channel.
inline wmn::ChannelAssignment uniform(const wmn::MeshTopology& t, wmn::ChannelId c, std::size_t channels = 4)
{
    wmn::ChannelAssignment ca;
    ca.scheme_name = "TEST";
    ca.channel_count = channels;
    ca.radio_channels.assign(t.node_count(), std::vector<wmn::ChannelId>(t.radios_per_node, c));
    return ca;
}

// The default 50-node random mesh (seed 42), generated once per process.
inline const wmn::MeshTopology& default_rwmn()
{
    static const wmn::MeshTopology topo = wmn::generate_rwmn(wmn::GenTargets{});
    return topo;
}

} // namespace fixture
