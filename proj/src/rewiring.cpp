#include "dynrbn/rewiring.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynrbn {

std::string_view to_string(DynamismMode mode)
{
    return mode == DynamismMode::full ? "full" : "standard";
}

std::string_view to_string(Addressing addressing)
{
    return addressing == Addressing::relative ? "relative" : "absolute";
}

DynamismMode parse_dynamism_mode(std::string_view text)
{
    if (text == "standard")
        return DynamismMode::standard;
    if (text == "full")
        return DynamismMode::full;
    throw std::invalid_argument("unknown dynamism mode '" + std::string(text) + "'");
}

Addressing parse_addressing(std::string_view text)
{
    if (text == "absolute")
        return Addressing::absolute;
    if (text == "relative")
        return Addressing::relative;
    throw std::invalid_argument("unknown addressing '" + std::string(text) + "'");
}

void RewireTables::randomize_node(std::size_t node, Addressing addressing, Rng &rng)
{
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto &e : row(node, r))
            e = addressing == Addressing::absolute
                    ? static_cast<std::int32_t>(rng.below(nodes_))
                    : static_cast<std::int32_t>(rng.between(-relative_offset_limit, relative_offset_limit));
}

void RewireTables::randomize(Addressing addressing, Rng &rng)
{
    for (std::size_t i = 0; i < nodes_; ++i)
        randomize_node(i, addressing, rng);
}

bool RewireTables::in_bounds(Addressing addressing) const noexcept
{
    if (addressing == Addressing::absolute)
        return std::all_of(entries_.begin(), entries_.end(), [this](std::int32_t e) {
            return e >= 0 && static_cast<std::size_t>(e) < nodes_;
        });
    return std::all_of(entries_.begin(), entries_.end(), [](std::int32_t e) {
        return e >= -relative_offset_limit && e <= relative_offset_limit;
    });
}

std::size_t DynamismSpec::dynamic_count() const noexcept
{
    return static_cast<std::size_t>(std::count(dynamic.begin(), dynamic.end(), std::uint8_t{1}));
}

void LiveNetwork::validate() const
{
    const std::size_t n = state.size();
    if (functions.nodes() != n || topology.nodes() != n || structure_topology.nodes() != n ||
        dyn.dynamic.size() != n || dyn.tables.nodes() != n)
        throw std::invalid_argument("live network components disagree on node count");
    if (functions.in_degree() != topology.degree() || dyn.tables.in_degree() != topology.degree())
        throw std::invalid_argument("live network components disagree on in-degree B");
    if (dyn.tables.structure_in_degree() != structure_topology.degree())
        throw std::invalid_argument("live network components disagree on structure in-degree B'");
    if (!topology.in_bounds() || !structure_topology.in_bounds())
        throw std::invalid_argument("source id out of range");
    if (!dyn.tables.in_bounds(dyn.addressing))
        throw std::invalid_argument("rewiring table entry out of range");
}

LiveNetwork make_static(const RandomNetwork &net, std::size_t structure_in_degree)
{
    const std::size_t n = net.start.size();
    return LiveNetwork{net.functions,
                       net.topology,
                       Topology(n, structure_in_degree),
                       DynamismSpec{std::vector<std::uint8_t>(n, 0),
                                    RewireTables(n, net.topology.degree(), structure_in_degree),
                                    DynamismMode::standard, Addressing::absolute},
                       net.start};
}

namespace {

// Writes new ids into `sources`; returns true if anything changed.
bool apply_entries(std::span<NodeId> sources, std::span<const std::int32_t> entries, Addressing addressing,
                   std::size_t nodes)
{
    bool changed = false;
    for (std::size_t k = 0; k < sources.size(); ++k)
    {
        NodeId next;
        if (addressing == Addressing::absolute)
        {
            next = static_cast<NodeId>(entries[k]);
        }
        else
        {
            const auto r = static_cast<std::int64_t>(nodes);
            next = static_cast<NodeId>((((static_cast<std::int64_t>(sources[k]) + entries[k]) % r) + r) % r);
        }
        changed |= next != sources[k];
        sources[k] = next;
    }
    return changed;
}

} // namespace

std::size_t rewire_in_place(LiveNetwork &net, const StateVector &s)
{
    const auto &tables = net.dyn.tables;
    const bool full = net.dyn.mode == DynamismMode::full;
    const std::size_t n = net.state.size();
    std::size_t events = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!net.dyn.dynamic[i])
            continue;
        // A node's row only depends on its own structure sources, so
        // rewriting them in place cannot affect another node's row.
        const std::size_t r = row_index(net.structure_topology.sources(i), s);
        bool changed = apply_entries(net.topology.sources(i), tables.transcription_entries(i, r), net.dyn.addressing, n);
        if (full)
            changed |= apply_entries(net.structure_topology.sources(i), tables.structure_entries(i, r),
                                     net.dyn.addressing, n);
        events += changed;
    }
    return events;
}

RewireOutcome rewire_step(const LiveNetwork &net, const StateVector &s)
{
    LiveNetwork copy = net;
    const std::size_t events = rewire_in_place(copy, s);
    return RewireOutcome{std::move(copy.topology), std::move(copy.structure_topology), events};
}

std::size_t lifecycle_step(LiveNetwork &net, StateVector &scratch)
{
    step_into(net.functions, net.topology, net.state, scratch);
    const std::size_t events = rewire_in_place(net, net.state);
    std::swap(net.state, scratch);
    return events;
}

std::size_t lifecycle_step(LiveNetwork &net)
{
    StateVector scratch(net.state.size());
    return lifecycle_step(net, scratch);
}

} // namespace dynrbn
