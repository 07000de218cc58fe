#include "dofkit/demand_graph.hpp"
#include "dofkit/error.hpp"
#include "dofkit/schemes.hpp"
#include "dofkit/topology.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dofkit;
using Mode = Topology::Mode;

namespace {

ServedSet served(std::vector<Service> s)
{
    return ServedSet{std::move(s)};
}

void check_plan_schedulable(const Topology& t, const TdmaPlan& plan)
{
    for (const auto& e : plan.schedule.entries) CHECK(is_schedulable(t, e.served));
    CHECK_NOTHROW(validate_schedule(t, plan.schedule, &plan.assignment));
    CHECK(schedule_dof(t, plan.schedule).sum_dof == plan.result.sum_dof);
}

} // namespace

TEST_CASE("MessageAssignment validation")
{
    CHECK_THROWS_AS(MessageAssignment({{1}, {}}, 1), InvalidAssignment);
    CHECK_THROWS_AS(MessageAssignment({{1}, {3}}, 1), InvalidAssignment);
    CHECK_THROWS_AS(MessageAssignment({{1, 2}, {2}}, 1), InvalidAssignment);
    MessageAssignment a({{2, 1, 2}, {2}}, 2);
    CHECK(a.transmit_set(1) == std::vector<int>{1, 2});
    CHECK(a.holds(1, 1));
    CHECK_FALSE(a.holds(2, 1));
    CHECK_FALSE(a.is_single());
    CHECK_THROWS_AS(a.single_encoding(), UnsupportedAssignment);
    CHECK(MessageAssignment::single({2, 1}).single_encoding() == std::vector<int>{2, 1});
}

TEST_CASE("is_schedulable examples")
{
    auto t6 = make_locally_connected(6, 2, Mode::truncated);
    CHECK(is_schedulable(t6, served({{2, 1}, {4, 3}, {6, 5}})));
    CHECK(is_schedulable(t6, served({})));
    auto t3 = make_locally_connected(3, 1, Mode::truncated);
    CHECK_FALSE(is_schedulable(t3, served({{1, 1}, {2, 2}})));
    // Shared server and an unreachable server.
    CHECK_FALSE(is_schedulable(t6, served({{2, 1}, {3, 1}})));
    CHECK_FALSE(is_schedulable(t6, served({{1, 2}})));
    CHECK_THROWS_AS(is_schedulable(t6, served({{7, 1}})), InvalidParameter);
    CHECK_THROWS_AS(is_schedulable(t6, served({{2, 1}, {2, 2}})), InvalidParameter);
}

TEST_CASE("schedule_dof examples")
{
    auto t = make_locally_connected(9, 0, Mode::truncated);
    TdmaSchedule one{{{served({{1, 1}, {2, 2}, {3, 3}}), Rational(1)}}};
    CHECK(schedule_dof(t, one).sum_dof == 3);

    TdmaSchedule halves{{{served({{1, 1}, {2, 2}}), Rational(1, 2)}, {served({{3, 3}, {4, 4}}), Rational(1, 2)}}};
    CHECK(schedule_dof(t, halves).sum_dof == 2);
    auto per = halves.per_message_dof(9);
    CHECK(per[0] == Rational(1, 2));
    CHECK(per[4] == 0);

    auto c = canonical_tdma(make_locally_connected(6, 2, Mode::truncated));
    auto r = schedule_dof(make_locally_connected(6, 2, Mode::truncated), c.schedule);
    CHECK(r.sum_dof == 3);
    CHECK(r.per_user == Rational(1, 2));
}

TEST_CASE("invalid schedules are rejected")
{
    auto t = make_locally_connected(4, 1, Mode::truncated);
    TdmaSchedule over{{{served({{1, 1}}), Rational(2, 3)}, {served({{2, 2}}), Rational(2, 3)}}};
    CHECK_THROWS_AS(schedule_dof(t, over), InvalidSchedule);
    TdmaSchedule zero{{{served({{1, 1}}), Rational(0)}}};
    CHECK_THROWS_AS(schedule_dof(t, zero), InvalidSchedule);
    TdmaSchedule clash{{{served({{1, 1}, {2, 2}}), Rational(1)}}};
    CHECK_THROWS_AS(schedule_dof(t, clash), InvalidSchedule);
    TdmaSchedule unheld{{{served({{1, 1}}), Rational(1)}}};
    auto a = MessageAssignment::single({2, 2, 3, 4});
    CHECK_THROWS_AS(validate_schedule(t, unheld, &a), InvalidSchedule);
}

TEST_CASE("canonical_tdma examples")
{
    auto t6 = make_locally_connected(6, 2, Mode::truncated);
    auto p6 = canonical_tdma(t6);
    REQUIRE(p6.schedule.entries.size() == 1);
    CHECK(p6.schedule.entries[0].served == served({{2, 1}, {4, 3}, {6, 5}}));
    CHECK(p6.result.per_user == Rational(1, 2));
    CHECK(p6.result.method == DofMethod::canonical);

    CHECK(canonical_tdma(make_locally_connected(6, 1, Mode::cyclic)).result.per_user == Rational(2, 3));
    CHECK(canonical_tdma(make_locally_connected(12, 4, Mode::cyclic)).result.per_user == Rational(1, 3));
    CHECK_THROWS_AS(canonical_tdma(Topology::from_edges(2, {{1, 1}, {2, 2}})), InvalidParameter);
}

TEST_CASE("canonical_tdma L = 2 serves floor(K/2) truncated and K/2 cyclic")
{
    for (int K = 3; K <= 40; ++K) {
        auto tr = make_locally_connected(K, 2, Mode::truncated);
        auto ptr = canonical_tdma(tr);
        CHECK(ptr.result.sum_dof == K / 2);
        check_plan_schedulable(tr, ptr);
        if (K % 2 == 0 && K >= 4) {
            auto cy = make_locally_connected(K, 2, Mode::cyclic);
            auto pcy = canonical_tdma(cy);
            CHECK(pcy.result.sum_dof == K / 2);
            check_plan_schedulable(cy, pcy);
        }
    }
}

TEST_CASE("canonical_tdma reaches 2/(L+2) on cyclic multiples of L + 2")
{
    for (int L = 0; L <= 6; ++L) {
        for (int mult = 1; mult <= 4; ++mult) {
            const int K = mult * (L + 2);
            auto t = make_locally_connected(K, L, Mode::cyclic);
            auto p = canonical_tdma(t);
            check_plan_schedulable(t, p);
            if (L >= 1) CHECK_MESSAGE(p.result.per_user == oracle::ratio(2, L + 2), "K=" << K << " L=" << L);
        }
    }
}

TEST_CASE("every canonical schedule is schedulable")
{
    for (int K = 1; K <= 30; ++K) {
        for (int L = 0; L < K && L <= 6; ++L) {
            for (Mode mode : {Mode::truncated, Mode::cyclic}) {
                auto t = make_locally_connected(K, L, mode);
                check_plan_schedulable(t, canonical_tdma(t));
            }
        }
    }
}

TEST_CASE("optimal_tdma examples")
{
    auto t8 = make_locally_connected(8, 2, Mode::cyclic);
    auto p8 = optimal_tdma(t8, 1);
    CHECK(p8.result.sum_dof == 4);
    CHECK(p8.result.per_user == Rational(1, 2));
    check_plan_schedulable(t8, p8);

    CHECK(optimal_tdma(make_locally_connected(6, 1, Mode::cyclic), 1).result.sum_dof == 4);
    CHECK(optimal_tdma(make_locally_connected(1, 0, Mode::cyclic), 1).result.sum_dof == 1);
    CHECK_THROWS_AS(optimal_tdma(make_locally_connected(17, 1, Mode::cyclic), 1), ResourceLimit);
    CHECK_THROWS_AS(optimal_tdma(t8, 0), InvalidParameter);
}

TEST_CASE("optimal_tdma matches enumeration of every assignment")
{
    for (int K = 1; K <= 6; ++K) {
        for (int L = 0; L < K && L <= 3; ++L) {
            for (Mode mode : {Mode::truncated, Mode::cyclic}) {
                auto t = make_locally_connected(K, L, mode);
                auto p = optimal_tdma(t, 1);
                CHECK_MESSAGE(p.result.sum_dof == oracle::optimal_tdma_by_assignment_enumeration(t),
                              "K=" << K << " L=" << L << " mode=" << to_string(mode));
                check_plan_schedulable(t, p);
            }
        }
    }
}

TEST_CASE("optimal_tdma is the same for every budget")
{
    // Each served set uses one server per message, so larger transmit sets
    // cannot raise the best schedulable set; the oracle lets every message
    // use any transmitter it hears.
    for (int K = 2; K <= 6; ++K) {
        for (int L = 1; L < K && L <= 3; ++L) {
            auto t = make_locally_connected(K, L, Mode::cyclic);
            std::vector<std::vector<int>> allowed;
            for (int i = 1; i <= K; ++i) allowed.push_back(transmitters_heard_by(t, i));
            const int free_choice = oracle::max_schedulable(t, allowed);
            Rational prev = 0;
            for (int M = 1; M <= 3; ++M) {
                auto p = optimal_tdma(t, M);
                CHECK(p.result.sum_dof >= prev);
                CHECK(p.result.sum_dof == free_choice);
                prev = p.result.sum_dof;
            }
        }
    }
}

TEST_CASE("fixed-assignment schedule LP matches the oracle")
{
    for (int K = 2; K <= 6; ++K) {
        for (int L = 1; L < K && L <= 2; ++L) {
            auto t = make_locally_connected(K, L, Mode::truncated);
            std::vector<int> enc(K);
            for (int i = 1; i <= K; ++i) enc[i - 1] = i;
            auto a = MessageAssignment::single(enc);
            std::vector<std::vector<int>> allowed;
            for (int i = 1; i <= K; ++i) allowed.push_back({i});
            auto p = optimal_schedule_for_assignment(t, a);
            CHECK(p.result.sum_dof == oracle::max_schedulable(t, allowed));
            check_plan_schedulable(t, p);
        }
    }
}

TEST_CASE("TDMA against the best bound for K <= 8, L <= 3")
{
    // Truncated: always tight. Cyclic: tight when L + 2 divides K; otherwise
    // the bound can sit strictly above (K=5, L=2 gives 2 against 5/2).
    for (int K = 2; K <= 8; ++K) {
        for (int L = 1; L < K && L <= 3; ++L) {
            for (Mode mode : {Mode::truncated, Mode::cyclic}) {
                auto t = make_locally_connected(K, L, mode);
                auto p = optimal_tdma(t, 1);
                auto b = best_assignment_upper_bound(t);
                const bool must_be_tight = mode == Mode::truncated || K % (L + 2) == 0;
                CHECK_MESSAGE(p.result.sum_dof <= b.value, "K=" << K << " L=" << L << " mode=" << to_string(mode));
                if (must_be_tight) {
                    CHECK_MESSAGE(p.result.sum_dof == b.value,
                                  "K=" << K << " L=" << L << " mode=" << to_string(mode));
                }
            }
        }
    }
    auto t5 = make_locally_connected(5, 2, Mode::cyclic);
    CHECK(optimal_tdma(t5, 1).result.sum_dof == 2);
    CHECK(best_assignment_upper_bound(t5).value == Rational(5, 2));
}

TEST_CASE("rotating an optimal cyclic plan gives another optimal plan")
{
    for (int L = 1; L <= 3; ++L) {
        const int K = 2 * (L + 2);
        auto t = make_locally_connected(K, L, Mode::cyclic);
        auto p = optimal_tdma(t, 1);
        auto enc = p.assignment.single_encoding();
        auto rot = [K](int x) { return x % K + 1; };
        std::vector<int> rotated(K);
        for (int i = 1; i <= K; ++i) rotated[rot(i) - 1] = rot(enc[i - 1]);
        TdmaSchedule sched;
        for (const auto& e : p.schedule.entries) {
            ServedSet s;
            for (auto sv : e.served.services) s.services.push_back({rot(sv.message), rot(sv.server)});
            std::sort(s.services.begin(), s.services.end());
            sched.entries.push_back({s, e.fraction});
        }
        auto a = MessageAssignment::single(rotated);
        CHECK_NOTHROW(validate_schedule(t, sched, &a));
        CHECK(schedule_dof(t, sched).sum_dof == p.result.sum_dof);
        CHECK(optimal_schedule_for_assignment(t, a).result.sum_dof == p.result.sum_dof);
    }
}

TEST_CASE("optimal_tdma is deterministic and picks the smallest encoding among optima")
{
    auto t = make_locally_connected(6, 1, Mode::cyclic);
    auto a = optimal_tdma(t, 1);
    auto b = optimal_tdma(t, 1);
    CHECK(a.assignment == b.assignment);
    auto best = a.result.sum_dof;
    auto chosen = a.assignment.single_encoding();
    std::vector<std::vector<int>> heard;
    for (int i = 1; i <= 6; ++i) heard.push_back(transmitters_heard_by(t, i));
    std::vector<std::size_t> pos(6, 0);
    for (;;) {
        std::vector<int> enc(6);
        for (int i = 0; i < 6; ++i) enc[i] = heard[i][pos[i]];
        if (enc >= chosen) break;
        std::vector<std::vector<int>> allowed;
        for (int v : enc) allowed.push_back({v});
        CHECK(oracle::max_schedulable(t, allowed) < best);
        int i = 5;
        while (i >= 0 && pos[i] + 1 == heard[i].size()) pos[i--] = 0;
        if (i < 0) break;
        ++pos[i];
    }
}
