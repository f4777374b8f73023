#pragma once

#include "wmn/conflict_graph.hpp"
#include "wmn/topology.hpp"
#include "wmn/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wmn {

enum class Scheme { bfs, mis, ec, lp, eizm, ois, single, spread };

// The six graph-theoretic schemes evaluated by default.
inline constexpr std::array<Scheme, 6> kPresetSchemes = {
    Scheme::bfs, Scheme::mis, Scheme::ec, Scheme::lp, Scheme::eizm, Scheme::ois,
};

std::string_view scheme_name(Scheme s);
// Accepts the upper-case labels (BFS, MIS, EC, LP, EIZM, OIS, SINGLE, SPREAD), case-insensitively.
Scheme parse_scheme(std::string_view label);

struct ChannelAssignment {
    std::string scheme_name;
    std::size_t channel_count = 0;
    // [node][radio] -> channel
    std::vector<std::vector<ChannelId>> radio_channels;
    // Radio pair serving each link, fixed at assignment time. Either empty (the
    // pair is then inferred as the lowest pair of radios sharing a channel) or
    // one entry per link; nullopt marks a link the scheme could not serve.
    std::vector<std::optional<RadioBinding>> link_binding;
};

// Runs one scheme. Every radio receives a channel and each node uses at most
// radios_per_node distinct channels; links are bound to the radio carrying
// their channel on either side. Deterministic per seed.
ChannelAssignment run_ca_scheme(Scheme scheme, const MeshTopology& topo, const ConflictGraph& cg,
                                std::size_t channel_count, std::uint64_t seed);

struct PreservationReport {
    std::vector<LinkId> broken;
    bool preserved() const { return broken.empty(); }
};

// Shape errors (wrong node/radio count, channel out of range) throw; links
// whose endpoint radios share no channel are reported, not thrown.
PreservationReport check_topology_preservation(const MeshTopology& topo, const ChannelAssignment& ca);

// Channel of every link. Throws Error("broken link ...") listing every link
// whose endpoints share no common channel.
LinkChannelMap resolve_link_channels(const MeshTopology& topo, const ChannelAssignment& ca);

// Same, but broken links are left without a channel instead of throwing.
LinkChannelMap resolve_surviving_links(const MeshTopology& topo, const ChannelAssignment& ca);

// Applies channel c -> perm[c] to every radio.
ChannelAssignment relabel_channels(const ChannelAssignment& ca, const std::vector<ChannelId>& perm);

// Text format: `scheme <label>`, `channels <k>`, then `node radio channel`
// rows and `link radioA radioB channel` rows, in canonical order.
void write_assignment(std::ostream& os, const MeshTopology& topo, const ChannelAssignment& ca);
// Parse errors carry the offending line number.
ChannelAssignment read_assignment(std::istream& is, const MeshTopology& topo);

} // namespace wmn
