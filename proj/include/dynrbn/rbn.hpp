#pragma once

#include "dynrbn/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dynrbn {

using NodeId = std::uint32_t;

// Upper bound on in-degree; a node's truth table has 2^B rows.
inline constexpr std::size_t max_in_degree = 20;

/// Shape of a network: R nodes, B transcription inputs per node and B'
/// structure-regulation inputs per dynamic node. B' must equal B unless
/// allow_unequal_degrees is set.
struct RbnConfig
{
    std::size_t nodes = 100;
    std::size_t in_degree = 2;
    std::size_t structure_in_degree = 2;
    bool allow_unequal_degrees = false;

    static RbnConfig uniform(std::size_t nodes, std::size_t degree) { return {nodes, degree, degree, false}; }

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

class StateVector
{
public:
    StateVector() = default;
    explicit StateVector(std::size_t n, std::uint8_t value = 0) : bits_(n, value) {}
    explicit StateVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    std::uint8_t &operator[](std::size_t i) noexcept { return bits_[i]; }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    bool operator==(const StateVector &) const = default;
    auto operator<=>(const StateVector &) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Per-node ordered source lists, all of the same length. Duplicates and
/// self-references are legal.
class Topology
{
public:
    Topology() = default;
    Topology(std::size_t nodes, std::size_t degree) : nodes_(nodes), degree_(degree), ids_(nodes * degree, 0) {}

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t degree() const noexcept { return degree_; }

    std::span<const NodeId> sources(std::size_t node) const noexcept { return {ids_.data() + node * degree_, degree_}; }
    std::span<NodeId> sources(std::size_t node) noexcept { return {ids_.data() + node * degree_, degree_}; }

    std::span<const NodeId> flat() const noexcept { return ids_; }

    /// True when every id is in [0, nodes()).
    bool in_bounds() const noexcept;

    bool operator==(const Topology &) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t degree_ = 0;
    std::vector<NodeId> ids_;
};

/// Truth tables for every node of a network. Row r of node i is the output
/// for the input pattern whose first source is the most significant bit.
class BooleanFunctions
{
public:
    BooleanFunctions() = default;
    BooleanFunctions(std::size_t nodes, std::size_t in_degree)
        : nodes_(nodes), rows_(std::size_t{1} << in_degree), in_degree_(in_degree), bits_(nodes * rows_, 0)
    {
    }

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t in_degree() const noexcept { return in_degree_; }
    std::size_t rows() const noexcept { return rows_; }

    std::span<const std::uint8_t> table(std::size_t node) const noexcept { return {bits_.data() + node * rows_, rows_}; }
    std::span<std::uint8_t> table(std::size_t node) noexcept { return {bits_.data() + node * rows_, rows_}; }

    std::uint8_t output(std::size_t node, std::size_t row) const noexcept { return bits_[node * rows_ + row]; }
    void flip(std::size_t node, std::size_t row) noexcept { bits_[node * rows_ + row] ^= 1; }

    bool operator==(const BooleanFunctions &) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t rows_ = 1;
    std::size_t in_degree_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Row of a truth table selected by the states of `sources` in `s`, first
/// source most significant.
inline std::size_t row_index(std::span<const NodeId> sources, const StateVector &s) noexcept
{
    std::size_t row = 0;
    for (NodeId src : sources)
        row = (row << 1) | s[src];
    return row;
}

struct RandomNetwork
{
    BooleanFunctions functions;
    Topology topology;
    StateVector start;
};

/// Uniform random network: sources drawn with replacement over [0, R),
/// function bits and start states fair coin flips.
RandomNetwork build_network(const RbnConfig &config, std::uint64_t seed);
RandomNetwork build_network(const RbnConfig &config, Rng &rng);

void randomize_topology(Topology &topology, Rng &rng);
void randomize_functions(BooleanFunctions &functions, Rng &rng);
void randomize_states(StateVector &states, Rng &rng);

inline std::uint8_t node_update(const BooleanFunctions &functions, const Topology &topology, const StateVector &s,
                                std::size_t node) noexcept
{
    return functions.output(node, row_index(topology.sources(node), s));
}

/// Synchronous update; `next` is resized as needed and must not alias `s`.
void step_into(const BooleanFunctions &functions, const Topology &topology, const StateVector &s, StateVector &next);

StateVector step(const BooleanFunctions &functions, const Topology &topology, const StateVector &s);

/// Hamming distance divided by the vector length.
double changed_fraction(const StateVector &prev, const StateVector &next);

struct Attractor
{
    std::size_t transient = 0; // step index of the first state on the cycle
    std::size_t period = 0;
};

/// Follows the trajectory for up to max_steps updates of a static network
/// and reports the first state revisit, if any.
std::optional<Attractor> find_attractor(const BooleanFunctions &functions, const Topology &topology,
                                        const StateVector &start, std::size_t max_steps);

} // namespace dynrbn
