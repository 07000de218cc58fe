#include "dofkit/simplex.hpp"

#include "dofkit/error.hpp"

#include <stdexcept>

namespace dofkit {

LpSolution maximize_packing_lp(const std::vector<Rational>& objective,
                               const std::vector<std::vector<Rational>>& rows,
                               const std::vector<Rational>& rhs)
{
    const std::size_t n = objective.size();
    const std::size_t m = rows.size();
    if (rhs.size() != m) {
        throw InvalidParameter("simplex: rhs size does not match row count");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n) {
            throw InvalidParameter("simplex: row width does not match objective");
        }
        if (sgn(rhs[i]) < 0) {
            throw InvalidParameter("simplex: rhs must be non-negative");
        }
    }

    // Tableau columns: n structural, m slack, then rhs.
    const std::size_t width = n + m + 1;
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(width));
    std::vector<Rational> obj(width);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = rows[i][j];
        tab[i][n + i] = 1;
        tab[i][width - 1] = rhs[i];
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) obj[j] = -objective[j];

    for (;;) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (sgn(obj[j]) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) break;

        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(tab[i][enter]) <= 0) continue;
            Rational ratio = tab[i][width - 1] / tab[i][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) {
            throw std::runtime_error("simplex: LP is unbounded");
        }

        const Rational pivot = tab[leave][enter];
        for (auto& v : tab[leave]) v /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || sgn(tab[i][enter]) == 0) continue;
            const Rational f = tab[i][enter];
            for (std::size_t j = 0; j < width; ++j) tab[i][j] -= f * tab[leave][j];
        }
        if (sgn(obj[enter]) != 0) {
            const Rational f = obj[enter];
            for (std::size_t j = 0; j < width; ++j) obj[j] -= f * tab[leave][j];
        }
        basis[leave] = enter;
    }

    LpSolution sol;
    sol.value = obj[width - 1];
    sol.primal.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) sol.primal[basis[i]] = tab[i][width - 1];
    }
    sol.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) sol.dual[i] = obj[n + i];
    return sol;
}

} // namespace dofkit
