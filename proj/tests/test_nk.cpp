#include "dynrbn/nk.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace dynrbn;

namespace {

std::vector<int> as_ints(const TraitVector &t)
{
    return {t.begin(), t.end()};
}

} // namespace

TEST_CASE("landscape shape for K=0 and forced links for N=2, K=1")
{
    const auto land = generate_landscape(10, 0, 1);
    for (std::size_t i = 0; i < 10; ++i)
    {
        CHECK(land.links(i).empty());
        CHECK(land.table(i).size() == 2);
    }
    const auto pair = generate_landscape(2, 1, 1);
    CHECK(pair.links(0)[0] == 1);
    CHECK(pair.links(1)[0] == 0);
    CHECK(pair.table(0).size() == 4);
}

TEST_CASE("landscape generation is deterministic and respects invariants")
{
    CHECK(generate_landscape(10, 3, 77) == generate_landscape(10, 3, 77));
    CHECK_FALSE(generate_landscape(10, 3, 77) == generate_landscape(10, 3, 78));
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const std::size_t n = 1 + seed % 12;
        const std::size_t k = seed % n;
        const auto land = generate_landscape(n, k, seed);
        CHECK_NOTHROW(land.validate());
        for (std::size_t i = 0; i < n; ++i)
        {
            std::set<std::uint32_t> distinct(land.links(i).begin(), land.links(i).end());
            CHECK(distinct.size() == k);
            CHECK(distinct.count(static_cast<std::uint32_t>(i)) == 0);
            for (double v : land.table(i))
            {
                CHECK(v >= 0.0);
                CHECK(v < 1.0);
            }
        }
    }
    CHECK_THROWS_AS(generate_landscape(5, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_landscape(0, 0, 1), std::invalid_argument);
}

TEST_CASE("fitness lookups")
{
    NkLandscape constant(4, 2);
    for (std::size_t i = 0; i < 4; ++i)
        std::fill(constant.table(i).begin(), constant.table(i).end(), 0.375);
    for (std::uint32_t code = 0; code < 16; ++code)
        CHECK(fitness(constant, decode_traits(code, 4)) == 0.375);

    NkLandscape single(1, 0);
    single.table(0)[0] = 0.3;
    single.table(0)[1] = 0.7;
    CHECK(fitness(single, TraitVector{1}) == 0.7);
    CHECK(fitness(single, TraitVector{0}) == 0.3);

    CHECK_THROWS_AS(fitness(single, TraitVector{1, 0}), std::invalid_argument);
}

TEST_CASE("own trait is the most significant bit of the table index")
{
    NkLandscape land(2, 1);
    land.links(0)[0] = 1;
    land.links(1)[0] = 0;
    auto t0 = land.table(0);
    t0[0] = 0.0, t0[1] = 0.25, t0[2] = 0.5, t0[3] = 0.75;
    // trait 0 = 1, trait 1 = 0 -> index 0b10 for trait 0
    CHECK(land.table(0)[0b10] == 0.5);
    NkLandscape only0 = land;
    std::fill(only0.table(1).begin(), only0.table(1).end(), 0.0);
    CHECK(fitness(only0, TraitVector{1, 0}) == 0.25);
    CHECK(fitness(only0, TraitVector{0, 1}) == 0.125);
}

TEST_CASE("N=3, K=1 fitness matches the double-loop oracle on every vector")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto land = generate_landscape(3, 1, seed);
        for (std::uint32_t code = 0; code < 8; ++code)
        {
            const auto t = decode_traits(code, 3);
            CHECK(fitness(land, t) == doctest::Approx(oracle::nk_fitness(land, as_ints(t))).epsilon(1e-14));
        }
    }
}

TEST_CASE("fitness matches the oracle exhaustively for N <= 10 and stays in [0,1]")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        const std::size_t n = 1 + seed % 10;
        const auto land = generate_landscape(n, seed % n, 1000 + seed);
        for (std::uint32_t code = 0; code < (1u << n); ++code)
        {
            const auto t = decode_traits(code, n);
            const double f = fitness(land, t);
            REQUIRE(std::abs(f - oracle::nk_fitness(land, as_ints(t))) <= 1e-12);
            REQUIRE(f >= 0.0);
            REQUIRE(f <= 1.0);
        }
    }
}

TEST_CASE("raising a table entry only affects the vectors that index it")
{
    auto land = generate_landscape(6, 2, 5);
    auto raised = land;
    const std::size_t trait = 3, entry = 5;
    raised.table(trait)[entry] = std::min(1.0, land.table(trait)[entry] + 0.2);
    for (std::uint32_t code = 0; code < 64; ++code)
    {
        const auto t = decode_traits(code, 6);
        std::size_t idx = t[trait];
        for (auto j : land.links(trait))
            idx = idx * 2 + t[j];
        if (idx == entry)
            CHECK(fitness(raised, t) >= fitness(land, t));
        else
            CHECK(fitness(raised, t) == fitness(land, t));
    }
}

TEST_CASE("exhaustive analysis: K=0 is unimodal and constant landscapes are flat")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto a = exhaustive_analysis(generate_landscape(8, 0, seed));
        CHECK(a.local_optima.size() == 1);
        CHECK(a.local_optima.front() == a.global_optimum_at);
    }
    NkLandscape flat(5, 2);
    for (std::size_t i = 0; i < 5; ++i)
        std::fill(flat.table(i).begin(), flat.table(i).end(), 0.5);
    CHECK(exhaustive_analysis(flat).local_optima.size() == 32);
    CHECK_THROWS_AS(exhaustive_analysis(NkLandscape(21, 0)), std::invalid_argument);
}

TEST_CASE("N=8, K=4 local optima match brute-force re-enumeration")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto land = generate_landscape(8, 4, seed);
        const auto a = exhaustive_analysis(land);
        std::vector<std::uint32_t> expected;
        double best = -1.0;
        for (std::uint32_t code = 0; code < 256; ++code)
        {
            auto t = as_ints(decode_traits(code, 8));
            const double f = oracle::nk_fitness(land, t);
            best = std::max(best, f);
            bool local = true;
            for (int i = 0; i < 8; ++i)
            {
                auto u = t;
                u[i] = 1 - u[i];
                if (oracle::nk_fitness(land, u) > f)
                    local = false;
            }
            if (local)
                expected.push_back(code);
        }
        CHECK(a.local_optima == expected);
        CHECK(a.global_optimum == doctest::Approx(best).epsilon(1e-14));
        CHECK(expected.size() > 1);
    }
}

TEST_CASE("K=0: greedy one-bit climbing reaches the global optimum from every start")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto land = generate_landscape(7, 0, 300 + seed);
        const auto a = exhaustive_analysis(land);
        for (std::uint32_t start = 0; start < 128; ++start)
        {
            std::uint32_t cur = start;
            for (bool improved = true; improved;)
            {
                improved = false;
                for (int i = 0; i < 7; ++i)
                    if (a.fitness_by_code[cur ^ (1u << i)] > a.fitness_by_code[cur])
                    {
                        cur ^= 1u << i;
                        improved = true;
                    }
            }
            CHECK(cur == a.global_optimum_at);
        }
    }
}

TEST_CASE("landscape text format round-trips exactly")
{
    const auto land = generate_landscape(10, 4, 123);
    std::stringstream ss;
    write_landscape(ss, land);
    const auto back = read_landscape(ss);
    CHECK(back == land);
    CHECK(landscape_checksum(back) == landscape_checksum(land));
    CHECK(landscape_checksum(generate_landscape(10, 4, 124)) != landscape_checksum(land));

    const auto text = landscape_to_string(generate_landscape(2, 1, 1));
    CHECK(text.rfind("nk-landscape 1\nn 2 k 1\ntrait 0 links 1 table 0x", 0) == 0);
}

TEST_CASE("malformed landscape files are rejected")
{
    auto parse = [](const std::string &s) {
        std::istringstream in(s);
        return read_landscape(in);
    };
    CHECK_THROWS(parse("nk-landscape 2\nn 1 k 0\n"));
    CHECK_THROWS(parse("nk-landscape 1\nn 1 k 0\ntrait 0 links table 0x1p-1\n"));
    CHECK_THROWS(parse("nk-landscape 1\nn 2 k 1\ntrait 0 links 0 table 0x0p+0 0x0p+0 0x0p+0 0x0p+0\n"
                       "trait 1 links 0 table 0x0p+0 0x0p+0 0x0p+0 0x0p+0\n"));
    CHECK_THROWS(parse("nk-landscape 1\nn 1 k 0\ntrait 0 links table 0x1p+1 0x0p+0\n"));
    CHECK_NOTHROW(parse("nk-landscape 1\nn 1 k 0\ntrait 0 links table 0x1p-1 0x0p+0\n"));
}
