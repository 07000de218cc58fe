#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using dofkit::Topology;

bool closed_form_connected(int K, int L, Topology::Mode mode, int rx, int tx)
{
    if (mode == Topology::Mode::cyclic) return ((rx - tx) % K + K) % K <= L;
    return tx <= rx && rx <= tx + L;
}

AdjMatrix demand_adjacency(const Topology& t, const std::vector<int>& transmitters)
{
    const int K = t.K();
    AdjMatrix adj(K, std::vector<bool>(K, false));
    for (int u = 0; u < K; ++u) {
        for (int v = 0; v < K; ++v) adj[u][v] = u != v && !t.connected(u + 1, transmitters[v]);
    }
    return adj;
}

bool has_cycle(const AdjMatrix& adj, const std::vector<int>& subset)
{
    const int K = static_cast<int>(adj.size());
    std::vector<bool> member(K, false);
    for (int v : subset) member[v] = true;
    std::vector<int> colour(K, 0); // 0 white, 1 grey, 2 black
    std::function<bool(int)> dfs = [&](int u) {
        colour[u] = 1;
        for (int v = 0; v < K; ++v) {
            if (!member[v] || !adj[u][v]) continue;
            if (colour[v] == 1) return true;
            if (colour[v] == 0 && dfs(v)) return true;
        }
        colour[u] = 2;
        return false;
    };
    for (int v : subset) {
        if (colour[v] == 0 && dfs(v)) return true;
    }
    return false;
}

namespace {

// Solves the square system exactly; nullopt if singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
    return b;
}

} // namespace

Rational lp_by_vertex_enumeration(const std::vector<std::vector<int>>& rows, int vars)
{
    // Constraint system: rows . d <= 1 and -d_i <= 0.
    std::vector<std::vector<Rational>> lhs;
    std::vector<Rational> rhs;
    for (const auto& r : rows) {
        lhs.emplace_back(r.begin(), r.end());
        rhs.emplace_back(1);
    }
    for (int i = 0; i < vars; ++i) {
        std::vector<Rational> r(vars, Rational(0));
        r[i] = -1;
        lhs.push_back(r);
        rhs.emplace_back(0);
    }
    const int total = static_cast<int>(lhs.size());
    Rational best = -1;
    std::vector<int> pick(vars);
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == vars) {
            std::vector<std::vector<Rational>> a;
            std::vector<Rational> b;
            for (int p : pick) {
                a.push_back(lhs[p]);
                b.push_back(rhs[p]);
            }
            auto x = solve(a, b);
            if (!x) return;
            for (int c = 0; c < total; ++c) {
                Rational dot = 0;
                for (int i = 0; i < vars; ++i) dot += lhs[c][i] * (*x)[i];
                if (dot > rhs[c]) return;
            }
            Rational value = 0;
            for (const auto& v : *x) value += v;
            best = std::max(best, value);
            return;
        }
        for (int c = start; c < total; ++c) {
            pick[depth] = c;
            choose(c + 1, depth + 1);
        }
    };
    choose(0, 0);
    return best;
}

Rational demand_bound(const AdjMatrix& adj)
{
    const int K = static_cast<int>(adj.size());
    std::vector<std::vector<int>> rows;
    for (int mask = 1; mask < (1 << K); ++mask) {
        std::vector<int> subset;
        for (int v = 0; v < K; ++v) {
            if (mask >> v & 1) subset.push_back(v);
        }
        if (has_cycle(adj, subset)) continue;
        std::vector<int> row(K, 0);
        for (int v : subset) row[v] = 1;
        rows.push_back(row);
    }
    return lp_by_vertex_enumeration(rows, K);
}

namespace {

bool literal_schedulable(const Topology& t, const std::vector<int>& messages, const std::vector<int>& servers)
{
    for (std::size_t a = 0; a < messages.size(); ++a) {
        if (!t.connected(messages[a], servers[a])) return false;
        for (std::size_t b = 0; b < messages.size(); ++b) {
            if (a == b) continue;
            if (servers[a] == servers[b]) return false;
            if (t.connected(messages[a], servers[b])) return false;
        }
    }
    return true;
}

int best_over_servers(const Topology& t, const std::vector<int>& messages,
                      const std::vector<std::vector<int>>& allowed, std::vector<int>& servers, std::size_t depth)
{
    if (depth == messages.size()) return literal_schedulable(t, messages, servers) ? static_cast<int>(depth) : 0;
    int best = 0;
    for (int tx : allowed[messages[depth] - 1]) {
        servers[depth] = tx;
        best = std::max(best, best_over_servers(t, messages, allowed, servers, depth + 1));
        if (best == static_cast<int>(messages.size())) break;
    }
    return best;
}

} // namespace

int max_schedulable(const Topology& t, const std::vector<std::vector<int>>& allowed)
{
    const int K = t.K();
    int best = 0;
    for (int mask = 1; mask < (1 << K); ++mask) {
        std::vector<int> messages;
        for (int v = 0; v < K; ++v) {
            if (mask >> v & 1) messages.push_back(v + 1);
        }
        if (static_cast<int>(messages.size()) <= best) continue;
        std::vector<int> servers(messages.size());
        if (best_over_servers(t, messages, allowed, servers, 0) == static_cast<int>(messages.size())) {
            best = static_cast<int>(messages.size());
        }
    }
    return best;
}

int optimal_tdma_by_assignment_enumeration(const Topology& t)
{
    const int K = t.K();
    std::vector<std::vector<int>> heard(K);
    for (int i = 1; i <= K; ++i) {
        for (int j = 1; j <= K; ++j) {
            if (t.connected(i, j)) heard[i - 1].push_back(j);
        }
    }
    int best = 0;
    std::vector<std::size_t> pos(K, 0);
    for (;;) {
        std::vector<std::vector<int>> allowed(K);
        for (int i = 0; i < K; ++i) allowed[i] = {heard[i][pos[i]]};
        best = std::max(best, max_schedulable(t, allowed));
        int i = K - 1;
        while (i >= 0 && pos[i] + 1 == heard[i].size()) pos[i--] = 0;
        if (i < 0) break;
        ++pos[i];
    }
    return best;
}

bool has_long_induced_cycle(const Topology& t)
{
    const int K = t.K();
    const int V = 2 * K; // 0..K-1 transmitters, K..2K-1 receivers
    auto adjacent = [&](int a, int b) {
        if ((a < K) == (b < K)) return false;
        const int tx = a < K ? a + 1 : b + 1;
        const int rx = a < K ? b - K + 1 : a - K + 1;
        return t.connected(rx, tx);
    };
    for (int mask = 0; mask < (1 << V); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size < 6) continue;
        std::vector<int> verts;
        for (int v = 0; v < V; ++v) {
            if (mask >> v & 1) verts.push_back(v);
        }
        bool two_regular = true;
        for (int a : verts) {
            int deg = 0;
            for (int b : verts) deg += adjacent(a, b);
            if (deg != 2) {
                two_regular = false;
                break;
            }
        }
        if (!two_regular) continue;
        // Connected 2-regular induced subgraph = a chordless cycle.
        std::vector<bool> seen(V, false);
        std::vector<int> stack{verts[0]};
        seen[verts[0]] = true;
        int reached = 0;
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            ++reached;
            for (int b : verts) {
                if (!seen[b] && adjacent(a, b)) {
                    seen[b] = true;
                    stack.push_back(b);
                }
            }
        }
        if (reached == size) return true;
    }
    return false;
}

dofkit::ComplexMatrix received_by_literal_evaluation(const dofkit::LinearScheme& s,
                                                     const dofkit::ChannelRealization& c, int rx)
{
    const int K = s.K();
    const int n = s.n();
    const int total = s.total_symbols();
    dofkit::ComplexMatrix y = dofkit::ComplexMatrix::Zero(n, total);
    for (int col = 0; col < total; ++col) {
        // Unit symbol vector; find the owning message and local index.
        int owner = 1;
        int local = col;
        while (local >= s.symbols(owner)) local -= s.symbols(owner++);
        for (int slot = 0; slot < n; ++slot) {
            dofkit::Complex acc = 0;
            for (int j = 1; j <= K; ++j) {
                dofkit::Complex x_j = 0;
                for (int k = 1; k <= K; ++k) {
                    const auto* v = s.precoder(j, k);
                    if (v && k == owner) x_j += (*v)(slot, local);
                }
                acc += c.h(rx, j, slot + 1) * x_j;
            }
            y(slot, col) = acc;
        }
    }
    return y;
}

} // namespace oracle
