#pragma once

#include "dynrbn/random.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dynrbn {

using TraitVector = std::vector<std::uint8_t>;

/// Random-neighbour NK landscape. Trait i contributes
/// tables[i][index(t_i, t_links[i][0], ..., t_links[i][K-1])] with its own
/// trait as the most significant bit; fitness is the mean contribution.
class NkLandscape
{
public:
    NkLandscape() = default;
    NkLandscape(std::size_t n, std::size_t k);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t table_size() const noexcept { return std::size_t{1} << (k_ + 1); }

    std::span<const std::uint32_t> links(std::size_t trait) const noexcept { return {links_.data() + trait * k_, k_}; }
    std::span<std::uint32_t> links(std::size_t trait) noexcept { return {links_.data() + trait * k_, k_}; }
    std::span<const double> table(std::size_t trait) const noexcept
    {
        return {tables_.data() + trait * table_size(), table_size()};
    }
    std::span<double> table(std::size_t trait) noexcept { return {tables_.data() + trait * table_size(), table_size()}; }

    /// Throws std::invalid_argument if links or table values break the
    /// landscape invariants.
    void validate() const;

    bool operator==(const NkLandscape &) const = default;

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<std::uint32_t> links_;
    std::vector<double> tables_;
};

NkLandscape generate_landscape(std::size_t n, std::size_t k, std::uint64_t seed);

/// Mean of per-trait table lookups. Throws on a length mismatch.
double fitness(const NkLandscape &land, std::span<const std::uint8_t> traits);

/// Fitness without bounds checks, for inner loops.
double fitness_unchecked(const NkLandscape &land, std::span<const std::uint8_t> traits) noexcept;

inline constexpr std::size_t max_exhaustive_traits = 20;

/// Trait vectors are encoded as integers with trait i at bit i.
struct LandscapeAnalysis
{
    double global_optimum = 0.0;
    std::uint32_t global_optimum_at = 0;
    std::vector<std::uint32_t> local_optima; // ascending; no 1-bit neighbour strictly fitter
    std::vector<double> fitness_by_code;     // fitness of every encoded vector
};

LandscapeAnalysis exhaustive_analysis(const NkLandscape &land);

TraitVector decode_traits(std::uint32_t code, std::size_t n);
std::uint32_t encode_traits(std::span<const std::uint8_t> traits);

/// Versioned text format:
///   nk-landscape 1
///   n <N> k <K>
///   trait <i> links <l_1> ... <l_K> table <v_0> ... <v_{2^(K+1)-1}>
/// Table values are written as C99 hex floats so reading is exact.
void write_landscape(std::ostream &out, const NkLandscape &land);
NkLandscape read_landscape(std::istream &in);
std::string landscape_to_string(const NkLandscape &land);

/// FNV-1a 64 over the serialized form.
std::uint64_t landscape_checksum(const NkLandscape &land);

} // namespace dynrbn
