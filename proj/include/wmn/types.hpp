#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmn {

// Dense identifiers. Node i lives at topology.nodes[i], link i at topology.links[i].
using NodeId = std::uint32_t;
using RadioId = std::uint32_t;
using LinkId = std::uint32_t;
using ChannelId = std::uint32_t;

// Base of every error raised by the toolkit. The message carries a module tag
// such as "[topology]".
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested targets cannot be met (generator budget exhausted, no eligible flows, ...).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Radios serving one link: radio_a belongs to link.a, radio_b to link.b.
struct RadioBinding {
    RadioId radio_a = 0;
    RadioId radio_b = 0;

    bool operator==(const RadioBinding&) const = default;
};

// A topology link bound to a concrete radio pair.
struct RadioLink {
    LinkId id = 0;
    NodeId node_a = 0;
    RadioId radio_a = 0;
    NodeId node_b = 0;
    RadioId radio_b = 0;
};

// Channel of every link, indexed by LinkId. A link without a channel is
// broken: its endpoints share no common channel and it carries no traffic.
struct LinkChannelMap {
    std::size_t channel_count = 0;
    std::vector<std::optional<ChannelId>> channel;
    std::vector<std::optional<RadioBinding>> binding;

    std::size_t link_count() const { return channel.size(); }
    bool resolved(LinkId l) const { return l < channel.size() && channel[l].has_value(); }
    std::size_t resolved_count() const;
    std::optional<RadioLink> radio_link(LinkId l, NodeId a, NodeId b) const;
};

inline std::size_t LinkChannelMap::resolved_count() const
{
    std::size_t n = 0;
    for (const auto& c : channel)
        if (c)
            ++n;
    return n;
}

inline std::optional<RadioLink> LinkChannelMap::radio_link(LinkId l, NodeId a, NodeId b) const
{
    if (l >= binding.size() || !binding[l])
        return std::nullopt;
    return RadioLink{l, a, binding[l]->radio_a, b, binding[l]->radio_b};
}

} // namespace wmn
