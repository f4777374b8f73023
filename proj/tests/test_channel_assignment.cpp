#include "fixtures.hpp"
#include "oracles.hpp"

#include "wmn/channel_assignment.hpp"
#include "wmn/conflict_graph.hpp"
#include "wmn/interference_metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace wmn;

namespace {

constexpr std::array<Scheme, 8> kAll = {Scheme::bfs, Scheme::mis,    Scheme::ec,     Scheme::lp,
                                        Scheme::eizm, Scheme::ois, Scheme::single, Scheme::spread};

void check_shape(const MeshTopology& t, const ChannelAssignment& ca, std::size_t channels)
{
    REQUIRE(ca.radio_channels.size() == t.node_count());
    CHECK(ca.channel_count == channels);
    for (const auto& radios : ca.radio_channels) {
        REQUIRE(radios.size() == t.radios_per_node);
        for (ChannelId c : radios)
            CHECK(c < channels);
    }
    if (ca.link_binding.empty())
        return;
    REQUIRE(ca.link_binding.size() == t.link_count());
    for (LinkId l = 0; l < t.link_count(); ++l) {
        if (!ca.link_binding[l])
            continue;
        const auto& b = *ca.link_binding[l];
        CHECK(ca.radio_channels[t.links[l].a][b.radio_a] == ca.radio_channels[t.links[l].b][b.radio_b]);
    }
}

} // namespace

TEST_CASE("scheme labels parse case-insensitively")
{
    for (Scheme s : kAll) {
        CHECK(parse_scheme(scheme_name(s)) == s);
        std::string low(scheme_name(s));
        std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
        CHECK(parse_scheme(low) == s);
    }
    CHECK_THROWS_AS(parse_scheme("GREEDY"), Error);
}

TEST_CASE("SINGLE puts every radio on channel 0 and TID equals the conflict edge count")
{
    const auto t = fixture::k4();
    const ConflictGraph cg = build_emmcg(t, 2);
    const ChannelAssignment ca = run_ca_scheme(Scheme::single, t, cg, 4, 1);
    for (const auto& radios : ca.radio_channels)
        for (ChannelId c : radios)
            CHECK(c == 0);
    const LinkChannelMap lcm = resolve_link_channels(t, ca);
    for (const auto& c : lcm.channel)
        CHECK(c == 0u);
    CHECK(total_interference_degree(cg, lcm) == cg.edge_count());
    CHECK(check_topology_preservation(t, ca).preserved());
}

TEST_CASE("EC gives the three links of a star three distinct channels")
{
    const auto t = fixture::star3();
    const ConflictGraph cg = build_emmcg(t, 2);
    const LinkChannelMap lcm = resolve_link_channels(t, run_ca_scheme(Scheme::ec, t, cg, 4, 1));
    std::set<ChannelId> used;
    for (const auto& c : lcm.channel)
        used.insert(*c);
    CHECK(used.size() == 3);
}

TEST_CASE("endpoints without a common channel are a broken link")
{
    const auto t = fixture::make_topology({{0, 0}, {100, 0}}, {{0, 1}}, 1);
    ChannelAssignment ca;
    ca.scheme_name = "TEST";
    ca.channel_count = 4;
    ca.radio_channels = {{1}, {2}};
    const PreservationReport r = check_topology_preservation(t, ca);
    CHECK_FALSE(r.preserved());
    CHECK(r.broken == std::vector<LinkId>{0});
    try {
        resolve_link_channels(t, ca);
        FAIL("expected a broken-link error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("broken link") != std::string::npos);
    }
    const LinkChannelMap partial = resolve_surviving_links(t, ca);
    CHECK_FALSE(partial.resolved(0));
}

TEST_CASE("binding inference picks the lowest radio pair sharing a channel")
{
    const auto t = fixture::path(2, 100.0, 2);
    ChannelAssignment ca;
    ca.scheme_name = "TEST";
    ca.channel_count = 4;
    ca.radio_channels = {{3, 1}, {1, 3}};
    const LinkChannelMap lcm = resolve_link_channels(t, ca);
    REQUIRE(lcm.binding[0]);
    CHECK(*lcm.binding[0] == RadioBinding{0, 1});
    CHECK(lcm.channel[0] == 3u);
}

TEST_CASE("every scheme is total, deterministic and keeps links bound on their channel")
{
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 40; ++trial) {
        const MeshTopology t = oracle::random_small_topology(gen, 12, 25, 600.0);
        const ConflictGraph cg = build_emmcg(t, 2);
        const std::size_t channels = 1 + static_cast<std::size_t>(trial % 5);
        for (Scheme s : kAll) {
            const ChannelAssignment a = run_ca_scheme(s, t, cg, channels, 77 + trial);
            const ChannelAssignment b = run_ca_scheme(s, t, cg, channels, 77 + trial);
            check_shape(t, a, channels);
            CHECK(a.radio_channels == b.radio_channels);
            CHECK(a.link_binding == b.link_binding);
            CHECK(a.scheme_name == scheme_name(s));
        }
    }
}

TEST_CASE("LP never breaks a link, nor does any scheme when radios outnumber half the channels")
{
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 40; ++trial) {
        const MeshTopology t = oracle::random_small_topology(gen, 12, 25, 600.0);
        const ConflictGraph cg = build_emmcg(t, 2);
        for (std::size_t channels : {2u, 4u, 6u}) {
            CHECK(check_topology_preservation(t, run_ca_scheme(Scheme::lp, t, cg, channels, trial)).preserved());
            CHECK(check_topology_preservation(t, run_ca_scheme(Scheme::eizm, t, cg, channels, trial)).preserved());
            // radios_per_node (3) >= channel_count.
            if (channels <= t.radios_per_node)
                CHECK(check_topology_preservation(t, run_ca_scheme(Scheme::ec, t, cg, channels, trial)).preserved());
        }
        // With 3 radios and 4 channels any two nodes' channel sets intersect.
        for (Scheme s : kAll)
            CHECK(check_topology_preservation(t, run_ca_scheme(s, t, cg, 4, trial)).preserved());
    }
}

TEST_CASE("SPREAD never has more same-channel conflicts than SINGLE")
{
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 60; ++trial) {
        const MeshTopology t = oracle::random_small_topology(gen, 12, 25, 600.0);
        const ConflictGraph cg = build_emmcg(t, 2);
        const auto single = resolve_surviving_links(t, run_ca_scheme(Scheme::single, t, cg, 4, trial));
        const auto spread = resolve_surviving_links(t, run_ca_scheme(Scheme::spread, t, cg, 4, trial));
        CHECK(total_interference_degree(cg, spread) <= total_interference_degree(cg, single));
    }
}

TEST_CASE("LP on the default mesh preserves every link and beats SINGLE")
{
    const MeshTopology& t = fixture::default_rwmn();
    const ConflictGraph cg = build_emmcg(t, 2);
    const ChannelAssignment lp = run_ca_scheme(Scheme::lp, t, cg, 4, 1);
    CHECK(check_topology_preservation(t, lp).preserved());
    const LinkChannelMap lcm = resolve_link_channels(t, lp);
    const auto single = resolve_link_channels(t, run_ca_scheme(Scheme::single, t, cg, 4, 1));
    CHECK(total_interference_degree(cg, lcm) < total_interference_degree(cg, single));
}

TEST_CASE("relabelling channels leaves every prediction metric unchanged")
{
    const MeshTopology& t = fixture::default_rwmn();
    const ConflictGraph cg = build_emmcg(t, 2);
    std::vector<ChannelId> perm{0, 1, 2, 3};
    std::mt19937_64 gen(3);
    for (Scheme s : kPresetSchemes) {
        const ChannelAssignment ca = run_ca_scheme(s, t, cg, 4, 5);
        const CppmValues base = compute_cppms(t, resolve_link_channels(t, ca), cg);
        for (int k = 0; k < 3; ++k) {
            std::shuffle(perm.begin(), perm.end(), gen);
            const CppmValues moved = compute_cppms(t, resolve_link_channels(t, relabel_channels(ca, perm)), cg);
            CHECK(moved.tid == base.tid);
            CHECK(moved.cdal == doctest::Approx(base.cdal));
            CHECK(moved.cxls == base.cxls);
        }
    }
}

TEST_CASE("assignment file round-trips")
{
    const MeshTopology& t = fixture::default_rwmn();
    const ConflictGraph cg = build_emmcg(t, 2);
    for (Scheme s : kAll) {
        const ChannelAssignment ca = run_ca_scheme(s, t, cg, 4, 2);
        std::stringstream ss;
        write_assignment(ss, t, ca);
        const ChannelAssignment back = read_assignment(ss, t);
        CHECK(back.scheme_name == ca.scheme_name);
        CHECK(back.channel_count == ca.channel_count);
        CHECK(back.radio_channels == ca.radio_channels);
        CHECK(back.link_binding == ca.link_binding);
        std::stringstream again;
        write_assignment(again, t, back);
        std::stringstream first;
        write_assignment(first, t, ca);
        CHECK(again.str() == first.str());
    }
}

TEST_CASE("assignment parse errors name the offending line")
{
    const auto t = fixture::path(2, 100.0, 1);
    auto parse_line = [&](const std::string& text) -> std::size_t {
        std::istringstream is(text);
        try {
            read_assignment(is, t);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(parse_line("scheme X\nchannels 4\n0 0 1\n1 0 7\n") == 4);
    CHECK(parse_line("scheme X\nchannels 4\n0 0 1\n# comment\n1 0 x\n") == 5);
    CHECK(parse_line("scheme X\n0 0 1\n") == 2);
    CHECK(parse_line("scheme X\nchannels 4\n0 0 1\n0 0 1\n") == 4);
    CHECK(parse_line("scheme X\nchannels 4\n0 0 1\n1 0 1\n0 0 0 2\n") == 5);

    std::istringstream out_of_range("scheme X\nchannels 4\n0 0 1\n1 0 7\n");
    try {
        read_assignment(out_of_range, t);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
}
