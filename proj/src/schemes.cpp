#include "dofkit/schemes.hpp"

#include "dofkit/error.hpp"
#include "dofkit/simplex.hpp"
#include "dofkit/topology.hpp"

#include <algorithm>
#include <bitset>
#include <optional>
#include <string>

namespace dofkit {

std::vector<Rational> TdmaSchedule::per_message_dof(int K) const
{
    std::vector<Rational> d(static_cast<std::size_t>(K));
    for (const auto& e : entries) {
        for (const auto& s : e.served.services) {
            if (s.message < 1 || s.message > K) {
                throw InvalidSchedule("served message " + std::to_string(s.message) + " outside 1.." +
                                      std::to_string(K));
            }
            d[s.message - 1] += e.fraction;
        }
    }
    return d;
}

Rational TdmaSchedule::total_fraction() const
{
    Rational total = 0;
    for (const auto& e : entries) total += e.fraction;
    return total;
}

std::string to_string(DofMethod m)
{
    switch (m) {
    case DofMethod::tdma_search: return "tdma-search";
    case DofMethod::canonical: return "canonical";
    case DofMethod::lp_bound: return "lp-bound";
    case DofMethod::linear_sim: return "linear-sim";
    }
    return "?";
}

DofResult make_dof_result(const Rational& sum_dof, int K, DofMethod method)
{
    if (K < 1) throw InvalidParameter("DoF result needs K >= 1");
    Rational sum = sum_dof;
    sum.canonicalize();
    if (sgn(sum) < 0 || sum > K) {
        throw InvalidParameter("sum DoF " + to_string(sum) + " outside [0, K]");
    }
    DofResult r;
    r.sum_dof = sum;
    r.K = K;
    r.per_user = sum / K;
    r.per_user.canonicalize();
    r.method = method;
    return r;
}

bool is_schedulable(const Topology& t, const ServedSet& s)
{
    std::uint64_t messages = 0;
    std::uint64_t servers = 0;
    for (const auto& sv : s.services) {
        if (sv.message < 1 || sv.message > t.K() || sv.server < 1 || sv.server > t.K()) {
            throw InvalidParameter("served set index outside 1.." + std::to_string(t.K()));
        }
        const std::uint64_t mbit = std::uint64_t{1} << (sv.message - 1);
        if (messages & mbit) {
            throw InvalidParameter("message " + std::to_string(sv.message) + " appears twice in a served set");
        }
        messages |= mbit;
    }
    for (const auto& sv : s.services) {
        if (!t.connected(sv.message, sv.server)) return false;
        const std::uint64_t tbit = std::uint64_t{1} << (sv.server - 1);
        if (servers & tbit) return false;
        servers |= tbit;
    }
    for (const auto& sv : s.services) {
        const std::uint64_t others = messages & ~(std::uint64_t{1} << (sv.message - 1));
        if (t.receivers_reached_by(sv.server) & others) return false;
    }
    return true;
}

void validate_schedule(const Topology& t, const TdmaSchedule& sched, const MessageAssignment* a)
{
    if (a) validate_assignment(t, *a, false);
    for (std::size_t e = 0; e < sched.entries.size(); ++e) {
        const auto& entry = sched.entries[e];
        if (sgn(entry.fraction) <= 0 || entry.fraction > 1) {
            throw InvalidSchedule("entry " + std::to_string(e) + " has fraction " + to_string(entry.fraction) +
                                  " outside (0, 1]");
        }
        bool ok = false;
        try {
            ok = is_schedulable(t, entry.served);
        } catch (const InvalidParameter& err) {
            throw InvalidSchedule("entry " + std::to_string(e) + ": " + err.what());
        }
        if (!ok) throw InvalidSchedule("entry " + std::to_string(e) + " is not schedulable");
        if (a) {
            for (const auto& sv : entry.served.services) {
                if (!a->holds(sv.message, sv.server)) {
                    throw InvalidSchedule("transmitter " + std::to_string(sv.server) + " does not hold message " +
                                          std::to_string(sv.message));
                }
            }
        }
    }
    if (sched.total_fraction() > 1) {
        throw InvalidSchedule("time fractions sum to " + to_string(sched.total_fraction()) + " > 1");
    }
}

DofResult schedule_dof(const Topology& t, const TdmaSchedule& sched)
{
    validate_schedule(t, sched);
    Rational sum = 0;
    for (const auto& d : sched.per_message_dof(t.K())) sum += d;
    return make_dof_result(sum, t.K(), DofMethod::tdma_search);
}

namespace {

int wrap(int idx, int K) { return ((idx - 1) % K + K) % K + 1; }

TdmaPlan one_shot_plan(const Topology& t, ServedSet served, const std::vector<int>& encoding,
                       std::optional<int> budget, DofMethod method)
{
    std::sort(served.services.begin(), served.services.end());
    TdmaPlan plan;
    std::vector<std::vector<int>> sets;
    for (int tx : encoding) sets.push_back({tx});
    plan.assignment = MessageAssignment(std::move(sets), budget);
    const auto count = static_cast<int>(served.services.size());
    if (count > 0) plan.schedule.entries.push_back({std::move(served), Rational(1)});
    validate_schedule(t, plan.schedule, &plan.assignment);
    plan.result = make_dof_result(Rational(count), t.K(), method);
    return plan;
}

} // namespace

TdmaPlan canonical_tdma(const Topology& t)
{
    if (!t.is_locally_connected()) {
        throw InvalidParameter("canonical TDMA pattern needs a locally connected topology");
    }
    const int K = t.K();
    const int L = t.L();
    const bool cyclic = t.mode() == Topology::Mode::cyclic;

    std::vector<Service> candidates;
    std::vector<int> encoding(static_cast<std::size_t>(K));
    if (L == 2) {
        // T_i = {i-1}; odd transmitters serve the even messages.
        for (int i = 1; i <= K; ++i) encoding[i - 1] = i == 1 && !cyclic ? 1 : wrap(i - 1, K);
        for (int i = 2; i <= K; i += 2) candidates.push_back({i, i - 1});
    } else {
        // Blocks of L+2 users: the first served by its own transmitter, the
        // last by the transmitter after the first.
        for (int i = 1; i <= K; ++i) encoding[i - 1] = i;
        for (int b = 0; b < K; b += L + 2) {
            candidates.push_back({b + 1, b + 1});
            if (b + L + 2 <= K) candidates.push_back({b + L + 2, b + 2});
        }
    }

    ServedSet served;
    for (const auto& c : candidates) {
        if (c.message > K) continue;
        ServedSet trial = served;
        trial.services.push_back(c);
        if (is_schedulable(t, trial)) {
            served = std::move(trial);
            encoding[c.message - 1] = c.server;
        }
    }
    return one_shot_plan(t, std::move(served), encoding, 1, DofMethod::canonical);
}

namespace {

constexpr std::size_t kMaxPairs = 256;
using PairSet = std::bitset<kMaxPairs>;

// Candidate (message, server) pairs; two pairs conflict when they cannot share
// a served set. Schedulable served sets are exactly the independent sets.
class PairConflictGraph {
public:
    PairConflictGraph(const Topology& t, const MessageAssignment* a)
    {
        const int K = t.K();
        by_message_.resize(static_cast<std::size_t>(K));
        for (int i = 1; i <= K; ++i) {
            for (int tx : transmitters_heard_by(t, i)) {
                if (a && !a->holds(i, tx)) continue;
                if (pairs_.size() == kMaxPairs) throw ResourceLimit("too many (message, server) pairs");
                by_message_[i - 1].set(pairs_.size());
                pairs_.push_back({i, tx});
            }
        }
        conflicts_.resize(pairs_.size());
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            for (std::size_t q = 0; q < pairs_.size(); ++q) {
                if (p == q) continue;
                const auto& a1 = pairs_[p];
                const auto& b1 = pairs_[q];
                if (a1.message == b1.message || a1.server == b1.server || t.connected(a1.message, b1.server) ||
                    t.connected(b1.message, a1.server)) {
                    conflicts_[p].set(q);
                }
            }
        }
    }

    std::size_t size() const { return pairs_.size(); }
    const Service& pair(std::size_t p) const { return pairs_[p]; }
    const PairSet& conflicts(std::size_t p) const { return conflicts_[p]; }
    const PairSet& of_message(int i) const { return by_message_[i - 1]; }

    PairSet all() const
    {
        PairSet s;
        for (std::size_t p = 0; p < pairs_.size(); ++p) s.set(p);
        return s;
    }

    int max_independent(const PairSet& candidates) const
    {
        int best = 0;
        branch(candidates, 0, best);
        return best;
    }

    /// Every inclusion-maximal independent set.
    void maximal_independent(PairSet chosen, PairSet open, PairSet excluded, std::vector<PairSet>& out) const
    {
        if (open.none()) {
            // Maximal iff no excluded pair is compatible with everything chosen.
            for (std::size_t p = 0; p < pairs_.size(); ++p) {
                if (excluded.test(p) && (conflicts_[p] & chosen).none()) return;
            }
            out.push_back(chosen);
            return;
        }
        std::size_t v = first(open);
        PairSet with = chosen;
        with.set(v);
        PairSet open_with = open & ~conflicts_[v];
        open_with.reset(v);
        maximal_independent(with, open_with, excluded & ~conflicts_[v], out);
        PairSet open_without = open;
        open_without.reset(v);
        PairSet excl = excluded;
        excl.set(v);
        maximal_independent(chosen, open_without, excl, out);
    }

private:
    static std::size_t first(const PairSet& s)
    {
        return s._Find_first();
    }

    void branch(PairSet candidates, int current, int& best) const
    {
        for (;;) {
            if (candidates.none()) {
                best = std::max(best, current);
                return;
            }
            if (current + static_cast<int>(candidates.count()) <= best) return;
            std::size_t min_v = 0, max_v = 0;
            std::size_t min_deg = kMaxPairs + 1, max_deg = 0;
            for (std::size_t v = first(candidates); v < kMaxPairs; v = candidates._Find_next(v)) {
                const std::size_t deg = (conflicts_[v] & candidates).count();
                if (deg < min_deg) min_deg = deg, min_v = v;
                if (deg >= max_deg) max_deg = deg, max_v = v;
            }
            if (min_deg <= 1) {
                // Taking a vertex of degree <= 1 is never worse.
                candidates &= ~conflicts_[min_v];
                candidates.reset(min_v);
                ++current;
                continue;
            }
            PairSet with = candidates & ~conflicts_[max_v];
            with.reset(max_v);
            branch(with, current + 1, best);
            candidates.reset(max_v);
        }
    }

    std::vector<Service> pairs_;
    std::vector<PairSet> conflicts_;
    std::vector<PairSet> by_message_;
};

// Depth-first search over messages in index order with transmitters tried in
// ascending order, so the first completion reaching `target` has the
// lexicographically smallest encoding. Unserved messages sit at their smallest
// connected transmitter.
class LexMinSearch {
public:
    LexMinSearch(const Topology& t, const PairConflictGraph& g, int target)
        : t_(t), g_(g), target_(target), encoding_(static_cast<std::size_t>(t.K()))
    {
    }

    bool run() { return visit(1, g_.all(), 0); }

    const std::vector<int>& encoding() const { return encoding_; }
    const ServedSet& served() const { return served_; }

private:
    bool visit(int i, PairSet open, int served_count)
    {
        if (i > t_.K()) return served_count == target_;
        if (served_count + g_.max_independent(open) < target_) return false;
        const PairSet mine = open & g_.of_message(i);
        const PairSet rest = open & ~g_.of_message(i);
        const auto heard = transmitters_heard_by(t_, i);
        for (std::size_t k = 0; k < heard.size(); ++k) {
            const int tx = heard[k];
            for (std::size_t p = 0; p < g_.size(); ++p) {
                if (!mine.test(p) || g_.pair(p).server != tx) continue;
                encoding_[i - 1] = tx;
                served_.services.push_back(g_.pair(p));
                if (visit(i + 1, rest & ~g_.conflicts(p), served_count + 1)) return true;
                served_.services.pop_back();
            }
            if (k == 0) {
                encoding_[i - 1] = tx;
                if (visit(i + 1, rest, served_count)) return true;
            }
        }
        return false;
    }

    const Topology& t_;
    const PairConflictGraph& g_;
    int target_;
    std::vector<int> encoding_;
    ServedSet served_;
};

void check_limit(int K, int limit, const char* what)
{
    if (K > limit) {
        throw ResourceLimit(std::string(what) + ": K=" + std::to_string(K) + " exceeds the limit of " +
                            std::to_string(limit));
    }
}

} // namespace

TdmaPlan optimal_tdma(const Topology& t, int M, int limit)
{
    if (M < 1) throw InvalidParameter("cooperation budget M must be positive");
    check_limit(t.K(), std::min(limit, kOptimalTdmaMaxUsers), "optimal_tdma");
    // For a fixed assignment the schedule LP puts all time on one largest
    // schedulable set, and such a set needs only one transmitter per message,
    // so the optimum over assignments is the largest schedulable set over all
    // connected (message, server) pairs, whatever M is.
    const PairConflictGraph g(t, nullptr);
    const int target = g.max_independent(g.all());
    LexMinSearch search(t, g, target);
    if (!search.run()) {
        throw std::logic_error("optimal_tdma: lexicographic search missed the optimum");
    }
    return one_shot_plan(t, search.served(), search.encoding(), M, DofMethod::tdma_search);
}

std::vector<ServedSet> maximal_served_sets(const Topology& t, const MessageAssignment& a, int limit)
{
    check_limit(t.K(), limit, "maximal_served_sets");
    validate_assignment(t, a, false);
    const PairConflictGraph g(t, &a);
    std::vector<PairSet> sets;
    g.maximal_independent(PairSet{}, g.all(), PairSet{}, sets);
    std::vector<ServedSet> out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        ServedSet served;
        for (std::size_t p = 0; p < g.size(); ++p) {
            if (s.test(p)) served.services.push_back(g.pair(p));
        }
        std::sort(served.services.begin(), served.services.end());
        if (!served.services.empty()) out.push_back(std::move(served));
    }
    return out;
}

TdmaPlan optimal_schedule_for_assignment(const Topology& t, const MessageAssignment& a, int limit)
{
    const auto sets = maximal_served_sets(t, a, limit);
    TdmaPlan plan;
    plan.assignment = a;
    if (sets.empty()) {
        plan.result = make_dof_result(Rational(0), t.K(), DofMethod::tdma_search);
        return plan;
    }
    std::vector<Rational> objective;
    std::vector<Rational> row;
    for (const auto& s : sets) {
        objective.emplace_back(static_cast<long>(s.services.size()));
        row.emplace_back(1);
    }
    const auto sol = maximize_packing_lp(objective, {row}, {Rational(1)});
    for (std::size_t k = 0; k < sets.size(); ++k) {
        if (sgn(sol.primal[k]) > 0) plan.schedule.entries.push_back({sets[k], sol.primal[k]});
    }
    validate_schedule(t, plan.schedule, &a);
    plan.result = make_dof_result(sol.value, t.K(), DofMethod::tdma_search);
    return plan;
}

} // namespace dofkit
