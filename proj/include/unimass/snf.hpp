#pragma once

#include <vector>

#include "unimass/errors.hpp"
#include "unimass/rational.hpp"

namespace unimass {

// Left transform U and the diagonal of U*A*V for a square integer matrix A,
// with U, V unimodular and the diagonal a divisor chain.  Enough to decide
// membership in the column lattice of A: x lies in it exactly when (U x)_i
// is divisible by diag_i for every i (zero diagonal forces a zero entry).
struct SmithResult {
    std::vector<std::vector<Int>> U;
    std::vector<Int> diag;
};

inline SmithResult smith_normal_form(std::vector<std::vector<Int>> a) {
    const size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw input_error("smith_normal_form: matrix must be square");
    std::vector<std::vector<Int>> u(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) u[i][i] = 1;

    const auto row_op = [&](size_t dst, size_t src, const Int& c) {
        for (size_t j = 0; j < n; ++j) {
            a[dst][j] += c * a[src][j];
            u[dst][j] += c * u[src][j];
        }
    };
    const auto col_op = [&](size_t dst, size_t src, const Int& c) {
        for (size_t i = 0; i < n; ++i) a[i][dst] += c * a[i][src];
    };

    for (size_t k = 0; k < n; ++k) {
        for (;;) {
            // smallest nonzero entry of the trailing block, earliest position
            // on ties, moved to the pivot
            size_t pi = n, pj = n;
            for (size_t i = k; i < n; ++i)
                for (size_t j = k; j < n; ++j)
                    if (a[i][j] != 0 && (pi == n || abs(a[i][j]) < abs(a[pi][pj])))
                        pi = i, pj = j;
            if (pi == n) break; // trailing block is zero
            if (pi != k) {
                std::swap(a[pi], a[k]);
                std::swap(u[pi], u[k]);
            }
            if (pj != k)
                for (size_t i = 0; i < n; ++i) std::swap(a[i][pj], a[i][k]);
            bool clean = true;
            for (size_t i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    row_op(i, k, -(a[i][k] / a[k][k]));
                    if (a[i][k] != 0) clean = false; // remainder survives
                }
            for (size_t j = k + 1; j < n; ++j)
                if (a[k][j] != 0) {
                    col_op(j, k, -(a[k][j] / a[k][k]));
                    if (a[k][j] != 0) clean = false;
                }
            if (clean) break; // pivot divides its row and column exactly
        }
        if (a[k][k] < 0)
            for (size_t j = 0; j < n; ++j) {
                a[k][j] = -a[k][j];
                u[k][j] = -u[k][j];
            }
    }

    // divisor chain: fold each later diagonal entry into the earlier one;
    // zeros can only trail, since the pivot search drains the block front-first
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const Int x = a[i][i], y = a[j][j];
            if (y == 0 || (x != 0 && y % x == 0)) continue;
            if (x == 0)
                throw consistency_error("smith_normal_form: zero before nonzero diagonal");
            // extended gcd, both arguments positive here
            Int r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (r1 != 0) {
                const Int q = r0 / r1;
                r0 -= q * r1;
                std::swap(r0, r1);
                s0 -= q * s1;
                std::swap(s0, s1);
                t0 -= q * t1;
                std::swap(t0, t1);
            }
            // diag(x, y) -> diag(g, xy/g) by the unimodular block
            // [[s0, t0], [-y/g, x/g]] on the left (columns fixed up on the right)
            const Int g = r0, lcm = x / g * y;
            const std::vector<Int> ui = u[i], uj = u[j];
            for (size_t c = 0; c < n; ++c) {
                u[i][c] = s0 * ui[c] + t0 * uj[c];
                u[j][c] = -(y / g) * ui[c] + (x / g) * uj[c];
            }
            a[i][i] = g;
            a[j][j] = lcm;
        }

    SmithResult out;
    out.U = std::move(u);
    out.diag.resize(n);
    for (size_t i = 0; i < n; ++i) out.diag[i] = a[i][i];
    return out;
}

inline bool in_column_lattice(const SmithResult& snf, const std::vector<Int>& x) {
    const size_t n = snf.diag.size();
    if (x.size() != n) throw input_error("in_column_lattice: dimension mismatch");
    for (size_t i = 0; i < n; ++i) {
        Int v = 0;
        for (size_t j = 0; j < n; ++j) v += snf.U[i][j] * x[j];
        if (snf.diag[i] == 0 ? v != 0 : v % snf.diag[i] != 0) return false;
    }
    return true;
}

} // namespace unimass
