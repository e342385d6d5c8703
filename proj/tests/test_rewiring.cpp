#include "dynrbn/evolution.hpp"
#include "dynrbn/rewiring.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace dynrbn;

namespace {

LiveNetwork empty_live(std::size_t r, std::size_t b, std::size_t bp)
{
    return LiveNetwork{BooleanFunctions(r, b), Topology(r, b), Topology(r, bp),
                       DynamismSpec{std::vector<std::uint8_t>(r, 0), RewireTables(r, b, bp), DynamismMode::standard,
                                    Addressing::absolute},
                       StateVector(r)};
}

LiveNetwork random_live(std::size_t r, std::size_t b, double p_dynamic, DynamismMode mode, Addressing addressing,
                        std::uint64_t seed)
{
    VariantConfig v;
    v.p_dynamic_init = p_dynamic;
    v.mode = mode;
    v.addressing = addressing;
    return instantiate(init_genome(RbnConfig::uniform(r, b), v, seed), v);
}

// Six-node network in which the third node (index 2) reads nodes 3 and 4,
// uses nodes 0 and 1 for structure, and whose first rewiring row moves its
// inputs to nodes 5 and 2 and its structure inputs to nodes 1 and 3.
LiveNetwork six_node_example(DynamismMode mode)
{
    auto net = empty_live(6, 2, 2);
    net.dyn.mode = mode;
    net.dyn.dynamic[2] = 1;
    auto src = net.topology.sources(2);
    src[0] = 3, src[1] = 4;
    auto ssrc = net.structure_topology.sources(2);
    ssrc[0] = 0, ssrc[1] = 1;
    net.functions.table(2)[0] = 1;
    auto row0 = net.dyn.tables.row(2, 0);
    row0[0] = 5, row0[1] = 2, row0[2] = 1, row0[3] = 3;
    // Other rows keep the current wiring.
    for (std::size_t r = 1; r < 4; ++r)
    {
        auto row = net.dyn.tables.row(2, r);
        row[0] = 3, row[1] = 4, row[2] = 0, row[3] = 1;
    }
    return net;
}

} // namespace

TEST_CASE("six-node example: structure inputs at 0 move the transcription inputs")
{
    auto net = six_node_example(DynamismMode::standard);
    const auto outcome = rewire_step(net, net.state);
    CHECK(outcome.events == 1);
    CHECK(outcome.topology.sources(2)[0] == 5);
    CHECK(outcome.topology.sources(2)[1] == 2);
    CHECK(outcome.structure_topology.sources(2)[0] == 0);
    CHECK(outcome.structure_topology.sources(2)[1] == 1);

    const auto events = lifecycle_step(net);
    CHECK(events == 1);
    CHECK(net.state[2] == 1);
    CHECK(net.topology.sources(2)[0] == 5);
    CHECK(net.topology.sources(2)[1] == 2);
}

TEST_CASE("six-node example in full mode also moves the structure inputs")
{
    auto net = six_node_example(DynamismMode::full);
    lifecycle_step(net);
    CHECK(net.state[2] == 1);
    CHECK(net.topology.sources(2)[0] == 5);
    CHECK(net.topology.sources(2)[1] == 2);
    CHECK(net.structure_topology.sources(2)[0] == 1);
    CHECK(net.structure_topology.sources(2)[1] == 3);
}

TEST_CASE("a row equal to the current sources is an identity rewiring")
{
    auto net = six_node_example(DynamismMode::full);
    net.state[0] = 1; // selects row 2, which keeps the wiring
    const auto before = net.topology;
    const auto outcome = rewire_step(net, net.state);
    CHECK(outcome.events == 0);
    CHECK(outcome.topology == before);
}

TEST_CASE("rewire_step reads the supplied state, not the network's")
{
    auto net = six_node_example(DynamismMode::standard);
    StateVector s(6);
    s[1] = 1; // row 1: keep wiring
    CHECK(rewire_step(net, s).events == 0);
    CHECK(rewire_step(net, net.state).events == 1);
}

TEST_CASE("rewiring reads s(t) and takes effect at t+1")
{
    // Node 1 copies node 0 when wired to it, node 2 when rewired. Node 0 is
    // constant 1, node 2 constant 0. Node 1 is dynamic, its structure
    // source is node 0: row 0 keeps node 0, row 1 switches to node 2.
    auto net = empty_live(3, 1, 1);
    net.functions.table(0)[0] = 1, net.functions.table(0)[1] = 1;
    net.functions.table(1)[1] = 1;
    net.topology.sources(1)[0] = 0;
    net.dyn.dynamic[1] = 1;
    net.structure_topology.sources(1)[0] = 0;
    net.dyn.tables.row(1, 0)[0] = 0;
    net.dyn.tables.row(1, 1)[0] = 2;

    // t=0: s = 000. Node 1 reads node 0 (=0). Rewiring reads s(0)[0] = 0: keep.
    CHECK(lifecycle_step(net) == 0);
    CHECK(net.state == StateVector(std::vector<std::uint8_t>{1, 0, 0}));
    // t=1: node 1 still reads node 0 (=1) and becomes 1; rewiring sees
    // s(1)[0] = 1 and switches to node 2 for the next cycle.
    CHECK(lifecycle_step(net) == 1);
    CHECK(net.state == StateVector(std::vector<std::uint8_t>{1, 1, 0}));
    CHECK(net.topology.sources(1)[0] == 2);
    // t=2: node 1 now reads node 2 (=0).
    lifecycle_step(net);
    CHECK(net.state == StateVector(std::vector<std::uint8_t>{1, 0, 0}));
}

TEST_CASE("without dynamic nodes the lifecycle reduces to the static network")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        auto net = random_live(40, 1 + seed % 4, 0.0, DynamismMode::full, Addressing::absolute, seed);
        REQUIRE(net.dyn.dynamic_count() == 0);
        StateVector s = net.state;
        const Topology topo = net.topology;
        for (int t = 0; t < 100; ++t)
        {
            CHECK(lifecycle_step(net) == 0);
            s = step(net.functions, topo, s);
            REQUIRE(net.state == s);
        }
        CHECK(net.topology == topo);
    }
}

TEST_CASE("identity tables leave the trajectory equal to the static one")
{
    auto net = random_live(30, 2, 1.0, DynamismMode::full, Addressing::absolute, 3);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t r = 0; r < net.dyn.tables.rows(); ++r)
        {
            auto row = net.dyn.tables.row(i, r);
            row[0] = static_cast<std::int32_t>(net.topology.sources(i)[0]);
            row[1] = static_cast<std::int32_t>(net.topology.sources(i)[1]);
            row[2] = static_cast<std::int32_t>(net.structure_topology.sources(i)[0]);
            row[3] = static_cast<std::int32_t>(net.structure_topology.sources(i)[1]);
        }
    StateVector s = net.state;
    const Topology topo = net.topology;
    for (int t = 0; t < 50; ++t)
    {
        CHECK(lifecycle_step(net) == 0);
        s = step(net.functions, topo, s);
        REQUIRE(net.state == s);
    }
}

TEST_CASE("four-node network with one dynamic node follows the oracle for 10 steps")
{
    auto net = empty_live(4, 1, 1);
    // 0: NOT 3, 1: copy 0, 2: copy 1, 3: NOT 2 (will be rewired)
    const int fn[4][2] = {{1, 0}, {0, 1}, {0, 1}, {1, 0}};
    const NodeId src[4] = {3, 0, 1, 2};
    for (std::size_t i = 0; i < 4; ++i)
    {
        net.functions.table(i)[0] = fn[i][0];
        net.functions.table(i)[1] = fn[i][1];
        net.topology.sources(i)[0] = src[i];
    }
    net.dyn.dynamic[3] = 1;
    net.structure_topology.sources(3)[0] = 1;
    net.dyn.tables.row(3, 0)[0] = 2;
    net.dyn.tables.row(3, 1)[0] = 0;
    net.state = StateVector(std::vector<std::uint8_t>{1, 0, 0, 1});

    oracle::Net o = oracle::from_live(net);
    int fired = 0;
    for (int t = 0; t < 10; ++t)
    {
        const int expected_events = oracle::cycle(o);
        fired += expected_events;
        CHECK(lifecycle_step(net) == static_cast<std::size_t>(expected_events));
        for (int i = 0; i < 4; ++i)
        {
            CHECK(net.state[i] == o.state[i]);
            CHECK(net.topology.sources(i)[0] == static_cast<NodeId>(o.src[i][0]));
        }
    }
    CHECK(fired > 0);
}

TEST_CASE("random dynamic networks agree with the oracle in every mode")
{
    for (auto mode : {DynamismMode::standard, DynamismMode::full})
        for (auto addressing : {Addressing::absolute, Addressing::relative})
            for (std::uint64_t seed = 0; seed < 5; ++seed)
            {
                auto net = random_live(12, 1 + seed % 3, 0.5, mode, addressing, 100 + seed);
                oracle::Net o = oracle::from_live(net);
                for (int t = 0; t < 30; ++t)
                {
                    const auto expected = oracle::cycle(o);
                    REQUIRE(lifecycle_step(net) == static_cast<std::size_t>(expected));
                    for (int i = 0; i < 12; ++i)
                    {
                        REQUIRE(net.state[i] == o.state[i]);
                        for (std::size_t k = 0; k < net.topology.degree(); ++k)
                            REQUIRE(net.topology.sources(i)[k] == static_cast<NodeId>(o.src[i][k]));
                        for (std::size_t k = 0; k < net.structure_topology.degree(); ++k)
                            REQUIRE(net.structure_topology.sources(i)[k] == static_cast<NodeId>(o.ssrc[i][k]));
                    }
                }
            }
}

TEST_CASE("source ids stay in bounds under repeated rewiring")
{
    for (auto addressing : {Addressing::absolute, Addressing::relative})
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            auto net = random_live(25, 2, 0.7, DynamismMode::full, addressing, seed);
            for (int t = 0; t < 200; ++t)
                lifecycle_step(net);
            CHECK(net.topology.in_bounds());
            CHECK(net.structure_topology.in_bounds());
            CHECK_NOTHROW(net.validate());
        }
}

TEST_CASE("relative addressing wraps modulo R and zero offsets are the identity")
{
    auto net = empty_live(6, 2, 1);
    net.dyn.addressing = Addressing::relative;
    net.dyn.dynamic[0] = 1;
    net.topology.sources(0)[0] = 5;
    net.topology.sources(0)[1] = 0;
    net.dyn.tables.row(0, 0)[0] = 3;
    net.dyn.tables.row(0, 0)[1] = -1;
    auto outcome = rewire_step(net, net.state);
    CHECK(outcome.topology.sources(0)[0] == 2);
    CHECK(outcome.topology.sources(0)[1] == 5);
    CHECK(outcome.events == 1);

    net.dyn.tables.row(0, 0)[0] = 0;
    net.dyn.tables.row(0, 0)[1] = 0;
    outcome = rewire_step(net, net.state);
    CHECK(outcome.topology == net.topology);
    CHECK(outcome.events == 0);
}

TEST_CASE("randomized tables respect their addressing bounds")
{
    Rng rng(1);
    RewireTables t(7, 2, 2);
    t.randomize(Addressing::relative, rng);
    CHECK(t.in_bounds(Addressing::relative));
    t.randomize(Addressing::absolute, rng);
    CHECK(t.in_bounds(Addressing::absolute));
    CHECK(t.rows() == 4);
    CHECK(t.row_width() == 4);
}

TEST_CASE("live network validation catches inconsistent parts")
{
    auto net = six_node_example(DynamismMode::standard);
    CHECK_NOTHROW(net.validate());
    net.topology.sources(0)[0] = 6;
    CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    net = six_node_example(DynamismMode::standard);
    net.dyn.dynamic.pop_back();
    CHECK_THROWS_AS(net.validate(), std::invalid_argument);
}
