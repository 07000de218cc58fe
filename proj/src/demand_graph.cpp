#include "dofkit/demand_graph.hpp"

#include "dofkit/error.hpp"
#include "dofkit/simplex.hpp"
#include "dofkit/topology.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace dofkit {

namespace {

constexpr int kSubsetEnumerationCeiling = 20;

std::uint64_t bit(int node) { return std::uint64_t{1} << (node - 1); }

std::uint64_t full_mask(int K) { return K >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << K) - 1; }

// Peels sources until none remain; acyclic iff everything is peeled.
bool acyclic_by_peeling(const std::vector<std::uint64_t>& in, std::uint64_t subset)
{
    bool progress = true;
    while (subset && progress) {
        progress = false;
        for (std::uint64_t rest = subset; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            if ((in[v] & subset) == 0) {
                subset &= ~(std::uint64_t{1} << v);
                progress = true;
            }
        }
    }
    return subset == 0;
}

// acyclic[S] for all S over K nodes: S is acyclic iff it has a source v and
// S \ {v} is acyclic.
std::vector<char> acyclic_table(const std::vector<std::uint64_t>& in, int K)
{
    const std::size_t count = std::size_t{1} << K;
    std::vector<char> acyclic(count, 0);
    acyclic[0] = 1;
    for (std::size_t s = 1; s < count; ++s) {
        for (std::uint64_t rest = s; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            if ((in[v] & s) == 0) {
                acyclic[s] = acyclic[s & ~(std::size_t{1} << v)];
                break;
            }
        }
    }
    return acyclic;
}

std::vector<std::uint64_t> maximal_from_table(const std::vector<char>& acyclic, int K)
{
    std::vector<std::uint64_t> maximal;
    for (std::size_t s = 0; s < acyclic.size(); ++s) {
        if (!acyclic[s]) continue;
        bool is_max = true;
        for (int v = 0; v < K && is_max; ++v) {
            const std::size_t b = std::size_t{1} << v;
            if (!(s & b) && acyclic[s | b]) is_max = false;
        }
        if (is_max) maximal.push_back(s);
    }
    return maximal;
}

DofBound solve_bound_lp(const std::vector<std::uint64_t>& in, int K)
{
    const auto maximal = maximal_from_table(acyclic_table(in, K), K);
    std::vector<std::vector<Rational>> rows;
    rows.reserve(maximal.size());
    for (std::uint64_t s : maximal) {
        std::vector<Rational> row(static_cast<std::size_t>(K));
        for (int v = 0; v < K; ++v) row[v] = ((s >> v) & 1U) ? 1 : 0;
        rows.push_back(std::move(row));
    }
    const auto sol = maximize_packing_lp(std::vector<Rational>(static_cast<std::size_t>(K), Rational(1)), rows,
                                         std::vector<Rational>(maximal.size(), Rational(1)));
    DofBound bound;
    bound.value = sol.value;
    for (std::size_t r = 0; r < maximal.size(); ++r) {
        if (sgn(sol.dual[r]) > 0) bound.certificate.push_back({mask_to_nodes(maximal[r]), sol.dual[r]});
    }
    return bound;
}

void check_limit(int K, int limit, const char* what)
{
    const int cap = std::min(limit, kSubsetEnumerationCeiling);
    if (K > cap) {
        throw ResourceLimit(std::string(what) + ": K=" + std::to_string(K) + " exceeds the limit of " +
                            std::to_string(cap));
    }
}

} // namespace

DemandGraph::DemandGraph(int K) : out_(static_cast<std::size_t>(K), 0), in_(static_cast<std::size_t>(K), 0) {}

void DemandGraph::check_node(int v) const
{
    if (v < 1 || v > K()) {
        throw InvalidParameter("node " + std::to_string(v) + " outside 1.." + std::to_string(K()));
    }
}

DemandGraph DemandGraph::from_edges(int K, const std::vector<std::pair<int, int>>& edges)
{
    if (K < 1 || K > 64) throw InvalidParameter("demand graph needs 1 <= K <= 64");
    DemandGraph g(K);
    for (auto [u, v] : edges) {
        g.check_node(u);
        g.check_node(v);
        if (u == v) throw InvalidParameter("demand graph has no self-loops");
        g.out_[u - 1] |= bit(v);
        g.in_[v - 1] |= bit(u);
    }
    return g;
}

bool DemandGraph::has_edge(int u, int v) const
{
    check_node(u);
    check_node(v);
    return (out_[u - 1] >> (v - 1)) & 1U;
}

std::uint64_t DemandGraph::in_mask(int v) const
{
    check_node(v);
    return in_[v - 1];
}

std::uint64_t DemandGraph::out_mask(int u) const
{
    check_node(u);
    return out_[u - 1];
}

std::vector<std::pair<int, int>> DemandGraph::edges() const
{
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= K(); ++u) {
        for (int v : mask_to_nodes(out_[u - 1])) out.emplace_back(u, v);
    }
    return out;
}

DemandGraph DemandGraph::without_edge(int u, int v) const
{
    check_node(u);
    check_node(v);
    DemandGraph g = *this;
    g.out_[u - 1] &= ~bit(v);
    g.in_[v - 1] &= ~bit(u);
    g.assignment_.reset();
    return g;
}

DemandGraph build_demand_graph(const Topology& t, const MessageAssignment& a)
{
    if (!a.is_single()) {
        throw UnsupportedAssignment("demand graph needs exactly one transmitter per message (M = 1)");
    }
    validate_assignment(t, a, true);
    const int K = t.K();
    DemandGraph g(K);
    for (int v = 1; v <= K; ++v) {
        const std::uint64_t deaf = ~t.receivers_reached_by(a.transmit_set(v).front()) & full_mask(K) & ~bit(v);
        g.in_[v - 1] = deaf;
        for (int u : mask_to_nodes(deaf)) g.out_[u - 1] |= bit(v);
    }
    g.assignment_ = a;
    return g;
}

std::vector<int> mask_to_nodes(std::uint64_t mask)
{
    std::vector<int> nodes;
    while (mask) {
        nodes.push_back(std::countr_zero(mask) + 1);
        mask &= mask - 1;
    }
    return nodes;
}

std::uint64_t nodes_to_mask(const std::vector<int>& nodes)
{
    std::uint64_t m = 0;
    for (int v : nodes) {
        if (v < 1 || v > 64) throw InvalidParameter("node index " + std::to_string(v) + " out of range");
        m |= bit(v);
    }
    return m;
}

bool is_acyclic_mask(const DemandGraph& g, std::uint64_t subset)
{
    if (subset & ~full_mask(g.K())) throw InvalidParameter("subset contains nodes outside 1..K");
    std::vector<std::uint64_t> in(static_cast<std::size_t>(g.K()));
    for (int v = 1; v <= g.K(); ++v) in[v - 1] = g.in_mask(v);
    return acyclic_by_peeling(in, subset);
}

bool is_acyclic_subset(const DemandGraph& g, const std::vector<int>& subset)
{
    for (int v : subset) {
        if (v < 1 || v > g.K()) {
            throw InvalidParameter("node " + std::to_string(v) + " outside 1.." + std::to_string(g.K()));
        }
    }
    return is_acyclic_mask(g, nodes_to_mask(subset));
}

std::vector<std::uint64_t> maximal_acyclic_subsets(const DemandGraph& g, int limit)
{
    check_limit(g.K(), limit, "maximal_acyclic_subsets");
    std::vector<std::uint64_t> in(static_cast<std::size_t>(g.K()));
    for (int v = 1; v <= g.K(); ++v) in[v - 1] = g.in_mask(v);
    return maximal_from_table(acyclic_table(in, g.K()), g.K());
}

DofBound dof_upper_bound_lp(const DemandGraph& g, int limit)
{
    check_limit(g.K(), limit, "dof_upper_bound_lp");
    std::vector<std::uint64_t> in(static_cast<std::size_t>(g.K()));
    for (int v = 1; v <= g.K(); ++v) in[v - 1] = g.in_mask(v);
    DofBound bound = solve_bound_lp(in, g.K());
    bound.assignment = g.assignment();
    return bound;
}

bool verify_certificate(const DemandGraph& g, const DofBound& bound)
{
    std::vector<Rational> cover(static_cast<std::size_t>(g.K()));
    Rational total = 0;
    for (const auto& term : bound.certificate) {
        if (sgn(term.weight) < 0 || !is_acyclic_subset(g, term.subset)) return false;
        for (int v : term.subset) cover[v - 1] += term.weight;
        total += term.weight;
    }
    if (total != bound.value) return false;
    return std::all_of(cover.begin(), cover.end(), [](const Rational& c) { return c >= 1; });
}

namespace {

// Upper bound on the LP from a partition into acyclic runs of consecutive
// nodes: covering every node with c acyclic sets proves value <= c.
int consecutive_partition_bound(const std::vector<std::uint64_t>& in, int K)
{
    int best = K;
    for (int start = 0; start < K; ++start) {
        int parts = 1;
        std::uint64_t run = 0;
        for (int k = 0; k < K && parts < best; ++k) {
            const int v = (start + k) % K;
            const std::uint64_t grown = run | (std::uint64_t{1} << v);
            if (acyclic_by_peeling(in, grown)) {
                run = grown;
            } else {
                ++parts;
                run = std::uint64_t{1} << v;
            }
        }
        best = std::min(best, parts);
    }
    return best;
}

class AssignmentSearch {
public:
    explicit AssignmentSearch(const Topology& t) : t_(t), K_(t.K()), in_(static_cast<std::size_t>(t.K())) {}

    void consider(const std::vector<int>& transmitters)
    {
        for (int v = 0; v < K_; ++v) {
            in_[v] = ~t_.receivers_reached_by(transmitters[v]) & full_mask(K_) & ~(std::uint64_t{1} << v);
        }
        if (have_incumbent_ && consecutive_partition_bound(in_, K_) <= incumbent_.value) return;
        DofBound candidate = solve_bound_lp(in_, K_);
        if (!have_incumbent_ || candidate.value > incumbent_.value) {
            candidate.assignment = MessageAssignment::single(transmitters);
            incumbent_ = std::move(candidate);
            have_incumbent_ = true;
        }
    }

    DofBound result() && { return std::move(incumbent_); }

private:
    const Topology& t_;
    int K_;
    std::vector<std::uint64_t> in_;
    DofBound incumbent_;
    bool have_incumbent_ = false;
};

// Rotation-minimal offset vectors (necklaces) over {0..L} of length K in
// lexicographic order; offset o_i places message i at transmitter i - o_i mod K.
void search_cyclic(const Topology& t, AssignmentSearch& search)
{
    const int K = t.K();
    const int alphabet = t.L() + 1;
    std::vector<int> a(static_cast<std::size_t>(K) + 1, 0);
    std::vector<int> transmitters(static_cast<std::size_t>(K));
    auto emit = [&] {
        for (int i = 1; i <= K; ++i) transmitters[i - 1] = ((i - 1 - a[i]) % K + K) % K + 1;
        search.consider(transmitters);
    };
    int p = 1;
    emit();
    for (;;) {
        int i = K;
        while (i > 0 && a[i] == alphabet - 1) --i;
        if (i == 0) break;
        ++a[i];
        for (int j = i + 1; j <= K; ++j) a[j] = a[j - i];
        p = i;
        if (K % p == 0) emit();
    }
}

void search_all(const Topology& t, AssignmentSearch& search)
{
    const int K = t.K();
    std::vector<std::vector<int>> candidates(static_cast<std::size_t>(K));
    for (int i = 1; i <= K; ++i) candidates[i - 1] = transmitters_heard_by(t, i);
    std::vector<std::size_t> pos(static_cast<std::size_t>(K), 0);
    std::vector<int> transmitters(static_cast<std::size_t>(K));
    for (;;) {
        for (int i = 0; i < K; ++i) transmitters[i] = candidates[i][pos[i]];
        search.consider(transmitters);
        int i = K - 1;
        while (i >= 0 && pos[i] + 1 == candidates[i].size()) pos[i--] = 0;
        if (i < 0) break;
        ++pos[i];
    }
}

} // namespace

DofBound best_assignment_upper_bound(const Topology& t, int limit)
{
    check_limit(t.K(), limit, "best_assignment_upper_bound");
    AssignmentSearch search(t);
    if (t.mode() == Topology::Mode::cyclic) {
        search_cyclic(t, search);
    } else {
        search_all(t, search);
    }
    return std::move(search).result();
}

} // namespace dofkit
