#include "dofkit/demand_graph.hpp"
#include "dofkit/error.hpp"
#include "dofkit/schemes.hpp"
#include "dofkit/topology.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace dofkit;
using Mode = Topology::Mode;

namespace {

std::vector<int> identity_encoding(int K)
{
    std::vector<int> e(K);
    std::iota(e.begin(), e.end(), 1);
    return e;
}

DemandGraph identity_graph(int K, int L, Mode mode)
{
    return build_demand_graph(make_locally_connected(K, L, mode), MessageAssignment::single(identity_encoding(K)));
}

// Random encoding with each message at a transmitter its receiver hears.
std::vector<int> random_encoding(const Topology& t, std::mt19937& rng)
{
    std::vector<int> e(t.K());
    for (int i = 1; i <= t.K(); ++i) {
        auto heard = transmitters_heard_by(t, i);
        e[i - 1] = heard[rng() % heard.size()];
    }
    return e;
}

} // namespace

TEST_CASE("build_demand_graph examples")
{
    auto g1 = identity_graph(5, 1, Mode::truncated);
    for (int u = 1; u <= 5; ++u) {
        for (int v = 1; v <= 5; ++v) {
            if (u != v) CHECK(g1.has_edge(u, v) == (u < v || u > v + 1));
        }
    }
    CHECK(g1.has_edge(1, 2));
    CHECK_FALSE(g1.has_edge(2, 1));
    CHECK(is_acyclic_subset(g1, {1, 2}));

    auto g2 = identity_graph(6, 2, Mode::truncated);
    CHECK(g2.has_edge(1, 4));
    CHECK(g2.has_edge(4, 1));
    CHECK_FALSE(is_acyclic_subset(g2, {1, 2, 3, 4}));
    CHECK(is_acyclic_subset(g2, {1, 2, 3}));
}

TEST_CASE("build_demand_graph errors")
{
    auto t = make_locally_connected(4, 1, Mode::truncated);
    CHECK_THROWS_AS(build_demand_graph(t, MessageAssignment::full_cooperation(4)), UnsupportedAssignment);
    CHECK_THROWS_AS(build_demand_graph(t, MessageAssignment::single({2, 2, 3, 4})), InvalidAssignment);
}

TEST_CASE("demand graph edges match the edge rule")
{
    std::mt19937 rng(2);
    for (int round = 0; round < 40; ++round) {
        const int K = 2 + static_cast<int>(rng() % 8);
        const int L = static_cast<int>(rng() % K);
        auto t = make_locally_connected(K, L, rng() % 2 ? Mode::cyclic : Mode::truncated);
        auto enc = random_encoding(t, rng);
        auto g = build_demand_graph(t, MessageAssignment::single(enc));
        auto adj = oracle::demand_adjacency(t, enc);
        for (int u = 1; u <= K; ++u) {
            CHECK_FALSE(g.has_edge(u, u));
            for (int v = 1; v <= K; ++v) CHECK(g.has_edge(u, v) == adj[u - 1][v - 1]);
        }
    }
}

TEST_CASE("is_acyclic_subset examples")
{
    auto g = identity_graph(6, 2, Mode::truncated);
    CHECK(is_acyclic_subset(g, {}));
    CHECK_FALSE(is_acyclic_subset(g, {1, 4}));
    CHECK(is_acyclic_subset(g, {2, 3, 4}));
    CHECK_THROWS_AS(is_acyclic_subset(g, {7}), InvalidParameter);
}

TEST_CASE("acyclicity agrees with DFS on every subset of random graphs")
{
    std::mt19937 rng(9);
    for (int round = 0; round < 30; ++round) {
        const int K = 1 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> edges;
        for (int u = 1; u <= K; ++u) {
            for (int v = 1; v <= K; ++v) {
                if (u != v && rng() % 3 == 0) edges.emplace_back(u, v);
            }
        }
        auto g = DemandGraph::from_edges(K, edges);
        oracle::AdjMatrix adj(K, std::vector<bool>(K, false));
        for (auto [u, v] : edges) adj[u - 1][v - 1] = true;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
            std::vector<int> zero_based;
            for (int v : mask_to_nodes(mask)) zero_based.push_back(v - 1);
            CHECK(is_acyclic_mask(g, mask) == !oracle::has_cycle(adj, zero_based));
        }
    }
}

TEST_CASE("dof_upper_bound_lp examples")
{
    // Both values come from the vertex-enumeration oracle.
    auto cyc = identity_graph(4, 2, Mode::cyclic);
    CHECK(oracle::demand_bound(oracle::demand_adjacency(make_locally_connected(4, 2, Mode::cyclic),
                                                        identity_encoding(4))) == Rational(4, 3));
    CHECK(dof_upper_bound_lp(cyc).value == Rational(4, 3));

    auto tr = identity_graph(3, 1, Mode::truncated);
    CHECK(oracle::demand_bound(oracle::demand_adjacency(make_locally_connected(3, 1, Mode::truncated),
                                                        identity_encoding(3))) == Rational(2));
    CHECK(dof_upper_bound_lp(tr).value == Rational(2));

    CHECK(dof_upper_bound_lp(identity_graph(1, 0, Mode::truncated)).value == Rational(1));
}

TEST_CASE("maximal acyclic subsets are acyclic and maximal")
{
    auto g = identity_graph(8, 2, Mode::cyclic);
    auto subsets = maximal_acyclic_subsets(g);
    CHECK_FALSE(subsets.empty());
    for (auto s : subsets) {
        CHECK(is_acyclic_mask(g, s));
        for (int v = 0; v < 8; ++v) {
            if (!(s >> v & 1)) CHECK_FALSE(is_acyclic_mask(g, s | (std::uint64_t{1} << v)));
        }
    }
}

TEST_CASE("LP bound matches the oracle on random graphs")
{
    std::mt19937 rng(21);
    for (int round = 0; round < 25; ++round) {
        const int K = 1 + static_cast<int>(rng() % 4);
        std::vector<std::pair<int, int>> edges;
        oracle::AdjMatrix adj(K, std::vector<bool>(K, false));
        for (int u = 1; u <= K; ++u) {
            for (int v = 1; v <= K; ++v) {
                if (u != v && rng() % 2) {
                    edges.emplace_back(u, v);
                    adj[u - 1][v - 1] = true;
                }
            }
        }
        auto g = DemandGraph::from_edges(K, edges);
        auto b = dof_upper_bound_lp(g);
        CHECK(b.value == oracle::demand_bound(adj));
        CHECK(verify_certificate(g, b));
    }
}

TEST_CASE("certificates verify and tampering is caught")
{
    auto t = make_locally_connected(8, 2, Mode::cyclic);
    auto best = best_assignment_upper_bound(t);
    REQUIRE(best.assignment.has_value());
    auto g = build_demand_graph(t, *best.assignment);
    auto b = dof_upper_bound_lp(g);
    CHECK(b.value == Rational(4));
    CHECK(verify_certificate(g, b));

    auto inflated = b;
    inflated.value += 1;
    CHECK_FALSE(verify_certificate(g, inflated));

    auto weakened = b;
    weakened.certificate.pop_back();
    Rational total = 0;
    for (const auto& term : weakened.certificate) total += term.weight;
    weakened.value = total;
    CHECK_FALSE(verify_certificate(g, weakened));

    auto cyclic_term = b;
    cyclic_term.certificate.front().subset = {1, 4};
    CHECK_FALSE(verify_certificate(g, cyclic_term));
}

TEST_CASE("removing an edge never increases the bound")
{
    std::mt19937 rng(4);
    for (int round = 0; round < 20; ++round) {
        const int K = 3 + static_cast<int>(rng() % 5);
        const int L = 1 + static_cast<int>(rng() % (K - 1));
        auto t = make_locally_connected(K, L, rng() % 2 ? Mode::cyclic : Mode::truncated);
        auto g = build_demand_graph(t, MessageAssignment::single(random_encoding(t, rng)));
        auto edges = g.edges();
        if (edges.empty()) continue;
        auto [u, v] = edges[rng() % edges.size()];
        CHECK(dof_upper_bound_lp(g.without_edge(u, v)).value <= dof_upper_bound_lp(g).value);
    }
}

TEST_CASE("bound dominates the best schedule of the same assignment")
{
    // Weak duality, every assignment of small instances.
    for (int K = 2; K <= 6; ++K) {
        for (int L = 0; L < K && L <= 3; ++L) {
            for (Mode mode : {Mode::truncated, Mode::cyclic}) {
                auto t = make_locally_connected(K, L, mode);
                std::vector<std::vector<int>> heard;
                for (int i = 1; i <= K; ++i) heard.push_back(transmitters_heard_by(t, i));
                std::vector<std::size_t> pos(K, 0);
                for (;;) {
                    std::vector<int> enc(K);
                    for (int i = 0; i < K; ++i) enc[i] = heard[i][pos[i]];
                    auto a = MessageAssignment::single(enc);
                    auto bound = dof_upper_bound_lp(build_demand_graph(t, a)).value;
                    auto plan = optimal_schedule_for_assignment(t, a);
                    CHECK(plan.result.sum_dof <= bound);
                    int i = K - 1;
                    while (i >= 0 && pos[i] + 1 == heard[i].size()) pos[i--] = 0;
                    if (i < 0) break;
                    ++pos[i];
                }
            }
        }
    }
}

TEST_CASE("best_assignment_upper_bound examples")
{
    auto b8 = best_assignment_upper_bound(make_locally_connected(8, 2, Mode::cyclic));
    CHECK(b8.value == Rational(4));
    REQUIRE(b8.assignment.has_value());
    CHECK(dof_upper_bound_lp(build_demand_graph(make_locally_connected(8, 2, Mode::cyclic), *b8.assignment)).value ==
          Rational(4));

    CHECK(best_assignment_upper_bound(make_locally_connected(6, 1, Mode::cyclic)).value == Rational(4));
    for (int K = 1; K <= 6; ++K) {
        CHECK(best_assignment_upper_bound(make_locally_connected(K, 0, Mode::truncated)).value == Rational(K));
    }
    CHECK_THROWS_AS(best_assignment_upper_bound(make_locally_connected(13, 1, Mode::cyclic)), ResourceLimit);
}

TEST_CASE("best bound over assignments equals 2K/(L+2) on cyclic K = L + 2 and 2(L + 2)")
{
    for (int L = 1; L <= 3; ++L) {
        for (int mult : {1, 2}) {
            const int K = mult * (L + 2);
            if (K > 10) continue;
            auto b = best_assignment_upper_bound(make_locally_connected(K, L, Mode::cyclic));
            CHECK_MESSAGE(b.value == oracle::ratio(2 * K, L + 2), "K=" << K << " L=" << L);
        }
    }
}

TEST_CASE("best bound matches plain enumeration of every assignment")
{
    for (int K = 2; K <= 7; ++K) {
        for (int L = 1; L < K && L <= 3; ++L) {
            for (Mode mode : {Mode::truncated, Mode::cyclic}) {
                auto t = make_locally_connected(K, L, mode);
                Rational best = 0;
                std::vector<std::vector<int>> heard;
                for (int i = 1; i <= K; ++i) heard.push_back(transmitters_heard_by(t, i));
                std::vector<std::size_t> pos(K, 0);
                for (;;) {
                    std::vector<int> enc(K);
                    for (int i = 0; i < K; ++i) enc[i] = heard[i][pos[i]];
                    best = std::max(best, dof_upper_bound_lp(build_demand_graph(t, MessageAssignment::single(enc))).value);
                    int i = K - 1;
                    while (i >= 0 && pos[i] + 1 == heard[i].size()) pos[i--] = 0;
                    if (i < 0) break;
                    ++pos[i];
                }
                CHECK_MESSAGE(best_assignment_upper_bound(t).value == best,
                              "K=" << K << " L=" << L << " mode=" << to_string(mode));
            }
        }
    }
}
