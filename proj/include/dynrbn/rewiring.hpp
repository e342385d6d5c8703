#pragma once

#include "dynrbn/rbn.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dynrbn {

enum class DynamismMode
{
    standard, // rewiring rewrites the B transcription sources only
    full,     // rewiring also rewrites the node's own B' structure sources
};

enum class Addressing
{
    absolute, // table entries are node ids
    relative, // table entries are offsets added (mod R) to the current id
};

inline constexpr int relative_offset_limit = 5;

std::string_view to_string(DynamismMode mode);
std::string_view to_string(Addressing addressing);
DynamismMode parse_dynamism_mode(std::string_view text);
Addressing parse_addressing(std::string_view text);

/// Rewiring tables for every node. Each node has 2^B' rows indexed by the
/// states of its structure sources (first source most significant). A row
/// holds B transcription entries followed by B' structure entries; the
/// structure entries are only read in full mode.
class RewireTables
{
public:
    RewireTables() = default;
    RewireTables(std::size_t nodes, std::size_t in_degree, std::size_t structure_in_degree)
        : nodes_(nodes)
        , in_degree_(in_degree)
        , structure_in_degree_(structure_in_degree)
        , rows_(std::size_t{1} << structure_in_degree)
        , entries_(nodes * rows_ * (in_degree + structure_in_degree), 0)
    {
    }

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t in_degree() const noexcept { return in_degree_; }
    std::size_t structure_in_degree() const noexcept { return structure_in_degree_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t row_width() const noexcept { return in_degree_ + structure_in_degree_; }

    std::span<const std::int32_t> row(std::size_t node, std::size_t r) const noexcept
    {
        return {entries_.data() + (node * rows_ + r) * row_width(), row_width()};
    }
    std::span<std::int32_t> row(std::size_t node, std::size_t r) noexcept
    {
        return {entries_.data() + (node * rows_ + r) * row_width(), row_width()};
    }

    std::span<const std::int32_t> transcription_entries(std::size_t node, std::size_t r) const noexcept
    {
        return row(node, r).first(in_degree_);
    }
    std::span<const std::int32_t> structure_entries(std::size_t node, std::size_t r) const noexcept
    {
        return row(node, r).last(structure_in_degree_);
    }

    /// Draws every entry of one node's table: ids in [0, R) or offsets in
    /// [-5, 5] depending on addressing.
    void randomize_node(std::size_t node, Addressing addressing, Rng &rng);
    void randomize(Addressing addressing, Rng &rng);

    /// True when all entries are valid for the given addressing.
    bool in_bounds(Addressing addressing) const noexcept;

    bool operator==(const RewireTables &) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t in_degree_ = 0;
    std::size_t structure_in_degree_ = 0;
    std::size_t rows_ = 1;
    std::vector<std::int32_t> entries_;
};

/// Dynamic flags and rewiring data. Tables exist for every node and are
/// simply dormant while a node's flag is off.
struct DynamismSpec
{
    std::vector<std::uint8_t> dynamic;
    RewireTables tables;
    DynamismMode mode = DynamismMode::standard;
    Addressing addressing = Addressing::absolute;

    std::size_t dynamic_count() const noexcept;
};

/// A network in the middle of its lifecycle. topology and
/// structure_topology change only through rewiring.
struct LiveNetwork
{
    BooleanFunctions functions;
    Topology topology;
    Topology structure_topology;
    DynamismSpec dyn;
    StateVector state;

    /// Throws std::invalid_argument if dimensions or ids are inconsistent.
    void validate() const;
};

/// Wraps a static network with no dynamic nodes.
LiveNetwork make_static(const RandomNetwork &net, std::size_t structure_in_degree);

struct RewireOutcome
{
    Topology topology;
    Topology structure_topology;
    std::size_t events = 0; // nodes whose source lists changed
};

/// Rewiring read from state `s`, without touching `net`.
RewireOutcome rewire_step(const LiveNetwork &net, const StateVector &s);

/// Same as rewire_step but applied to net in place; returns the event count.
std::size_t rewire_in_place(LiveNetwork &net, const StateVector &s);

/// One cycle: s(t+1) from topology(t), then rewiring driven by s(t).
/// `scratch` is reused storage. Returns the rewiring event count.
std::size_t lifecycle_step(LiveNetwork &net, StateVector &scratch);
std::size_t lifecycle_step(LiveNetwork &net);

} // namespace dynrbn
