#include "dynrbn/rbn.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace dynrbn {

void RbnConfig::validate() const
{
    if (nodes == 0)
        throw std::invalid_argument("network needs at least one node");
    if (nodes > std::size_t{1} << 31)
        throw std::invalid_argument("node count too large");
    if (in_degree == 0 || in_degree > nodes)
        throw std::invalid_argument("in-degree B must satisfy 1 <= B <= R (B=" + std::to_string(in_degree) +
                                    ", R=" + std::to_string(nodes) + ")");
    if (in_degree > max_in_degree)
        throw std::invalid_argument("in-degree B exceeds supported maximum of " + std::to_string(max_in_degree));
    if (structure_in_degree == 0 || structure_in_degree > nodes || structure_in_degree > max_in_degree)
        throw std::invalid_argument("structure in-degree B' must satisfy 1 <= B' <= min(R, " +
                                    std::to_string(max_in_degree) + ")");
    if (!allow_unequal_degrees && structure_in_degree != in_degree)
        throw std::invalid_argument("B' must equal B unless unequal degrees are explicitly allowed");
}

bool Topology::in_bounds() const noexcept
{
    return std::all_of(ids_.begin(), ids_.end(), [this](NodeId id) { return id < nodes_; });
}

void randomize_topology(Topology &topology, Rng &rng)
{
    for (std::size_t i = 0; i < topology.nodes(); ++i)
        for (auto &src : topology.sources(i))
            src = static_cast<NodeId>(rng.below(topology.nodes()));
}

void randomize_functions(BooleanFunctions &functions, Rng &rng)
{
    for (std::size_t i = 0; i < functions.nodes(); ++i)
        for (auto &bit : functions.table(i))
            bit = rng.coin() ? 1 : 0;
}

void randomize_states(StateVector &states, Rng &rng)
{
    for (auto &bit : states.bits())
        bit = rng.coin() ? 1 : 0;
}

RandomNetwork build_network(const RbnConfig &config, Rng &rng)
{
    config.validate();
    RandomNetwork net{BooleanFunctions(config.nodes, config.in_degree), Topology(config.nodes, config.in_degree),
                      StateVector(config.nodes)};
    randomize_topology(net.topology, rng);
    randomize_functions(net.functions, rng);
    randomize_states(net.start, rng);
    return net;
}

RandomNetwork build_network(const RbnConfig &config, std::uint64_t seed)
{
    Rng rng(seed);
    return build_network(config, rng);
}

void step_into(const BooleanFunctions &functions, const Topology &topology, const StateVector &s, StateVector &next)
{
    const std::size_t n = s.size();
    if (next.size() != n)
        next = StateVector(n);
    for (std::size_t i = 0; i < n; ++i)
        next[i] = node_update(functions, topology, s, i);
}

StateVector step(const BooleanFunctions &functions, const Topology &topology, const StateVector &s)
{
    StateVector next(s.size());
    step_into(functions, topology, s, next);
    return next;
}

double changed_fraction(const StateVector &prev, const StateVector &next)
{
    if (prev.size() != next.size())
        throw std::invalid_argument("changed_fraction: state vectors differ in length (" +
                                    std::to_string(prev.size()) + " vs " + std::to_string(next.size()) + ")");
    if (prev.size() == 0)
        return 0.0;
    std::size_t diff = 0;
    for (std::size_t i = 0; i < prev.size(); ++i)
        diff += prev[i] != next[i];
    return static_cast<double>(diff) / static_cast<double>(prev.size());
}

std::optional<Attractor> find_attractor(const BooleanFunctions &functions, const Topology &topology,
                                        const StateVector &start, std::size_t max_steps)
{
    std::map<StateVector, std::size_t> seen;
    StateVector current = start;
    StateVector next;
    seen.emplace(current, 0);
    for (std::size_t t = 1; t <= max_steps; ++t)
    {
        step_into(functions, topology, current, next);
        std::swap(current, next);
        auto [it, inserted] = seen.emplace(current, t);
        if (!inserted)
            return Attractor{it->second, t - it->second};
    }
    return std::nullopt;
}

} // namespace dynrbn
