#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unimass/errors.hpp"
#include "unimass/rational.hpp"

namespace unimass {

// Arithmetic in F_{p^k}, all ops table-driven.  Elements are encoded as
// integers in [0, p^k): the base-p digits of an element are the coefficients
// of its polynomial representative, constant term first.  The modulus is the
// first irreducible monic of degree k in that same integer encoding, so two
// fields built with equal (p, k) are identical objects.
class SmallField {
public:
    SmallField(unsigned p, unsigned k) : p_(p), k_(k) {
        if (!detail::is_prime(Int(p))) throw input_error("SmallField: p must be prime");
        if (k == 0) throw input_error("SmallField: k must be positive");
        uint64_t q = 1;
        for (unsigned i = 0; i < k; ++i) {
            q *= p;
            if (q > 4096) throw unsupported_error("SmallField: p^k above table limit 4096");
        }
        q_ = static_cast<unsigned>(q);
        modpoly_ = find_modpoly();
        build_tables();
    }

    unsigned p() const { return p_; }
    unsigned k() const { return k_; }
    unsigned q() const { return q_; }
    const std::vector<unsigned>& modpoly() const { return modpoly_; }

    unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
    unsigned sub(unsigned a, unsigned b) const { return add_[a * q_ + neg_[b]]; }
    unsigned neg(unsigned a) const { return neg_[a]; }
    unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
    unsigned inv(unsigned a) const {
        if (a == 0) throw input_error("SmallField: inverse of zero");
        return inv_[a];
    }
    unsigned pow(unsigned a, uint64_t e) const {
        unsigned r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

private:
    unsigned p_, k_, q_;
    std::vector<unsigned> modpoly_; // k+1 coefficients, leading 1
    std::vector<uint16_t> add_, mul_, neg_, inv_;

    std::vector<unsigned> decode(unsigned a) const {
        std::vector<unsigned> c(k_);
        for (unsigned i = 0; i < k_; ++i) {
            c[i] = a % p_;
            a /= p_;
        }
        return c;
    }
    unsigned encode(const std::vector<unsigned>& c) const {
        unsigned a = 0;
        for (unsigned i = k_; i-- > 0;) a = a * p_ + c[i] % p_;
        return a;
    }

    std::vector<unsigned> polymul(const std::vector<unsigned>& a,
                                  const std::vector<unsigned>& b,
                                  const std::vector<unsigned>& mod) const {
        std::vector<unsigned> prod(2 * k_ - 1, 0);
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
        for (unsigned d = 2 * k_ - 2; d >= k_ && d < prod.size(); --d) {
            const unsigned c = prod[d];
            if (c)
                for (unsigned i = 0; i <= k_; ++i) {
                    unsigned& slot = prod[d - k_ + i];
                    slot = (slot + c * (p_ - mod[i] % p_)) % p_;
                }
            if (d == k_) break;
        }
        prod.resize(k_);
        return prod;
    }

    bool irreducible(const std::vector<unsigned>& mod) const {
        // Trial division by every monic polynomial of degree 1..k-1.
        for (unsigned deg = 1; deg < k_; ++deg) {
            uint64_t count = 1;
            for (unsigned i = 0; i < deg; ++i) count *= p_;
            for (uint64_t idx = 0; idx < count; ++idx) {
                std::vector<unsigned> div(deg + 1, 0);
                uint64_t t = idx;
                for (unsigned i = 0; i < deg; ++i) {
                    div[i] = static_cast<unsigned>(t % p_);
                    t /= p_;
                }
                div[deg] = 1;
                std::vector<unsigned> rem(mod);
                for (unsigned d = k_; d >= deg; --d) {
                    const unsigned c = rem[d];
                    if (c)
                        for (unsigned i = 0; i <= deg; ++i)
                            rem[d - deg + i] =
                                (rem[d - deg + i] + c * (p_ - div[i] % p_)) % p_;
                    if (d == deg) break;
                }
                bool zero = true;
                for (unsigned i = 0; i < deg; ++i)
                    if (rem[i]) zero = false;
                if (zero) return false;
            }
        }
        return true;
    }

    std::vector<unsigned> find_modpoly() const {
        if (k_ == 1) return {0, 1};
        uint64_t count = 1;
        for (unsigned i = 0; i < k_; ++i) count *= p_;
        for (uint64_t idx = 0; idx < count; ++idx) {
            std::vector<unsigned> mod(k_ + 1, 0);
            uint64_t t = idx;
            for (unsigned i = 0; i < k_; ++i) {
                mod[i] = static_cast<unsigned>(t % p_);
                t /= p_;
            }
            mod[k_] = 1;
            if (irreducible(mod)) return mod;
        }
        throw consistency_error("SmallField: no irreducible polynomial found");
    }

    void build_tables() {
        add_.resize(static_cast<size_t>(q_) * q_);
        mul_.resize(static_cast<size_t>(q_) * q_);
        neg_.resize(q_);
        inv_.resize(q_);
        for (unsigned a = 0; a < q_; ++a) {
            const auto ca = decode(a);
            for (unsigned b = 0; b < q_; ++b) {
                const auto cb = decode(b);
                std::vector<unsigned> s(k_);
                for (unsigned i = 0; i < k_; ++i) s[i] = (ca[i] + cb[i]) % p_;
                add_[static_cast<size_t>(a) * q_ + b] = static_cast<uint16_t>(encode(s));
                mul_[static_cast<size_t>(a) * q_ + b] =
                    static_cast<uint16_t>(encode(polymul(ca, cb, modpoly_)));
            }
            std::vector<unsigned> n(k_);
            for (unsigned i = 0; i < k_; ++i) n[i] = (p_ - ca[i]) % p_;
            neg_[a] = static_cast<uint16_t>(encode(n));
        }
        for (unsigned a = 1; a < q_; ++a) inv_[a] = static_cast<uint16_t>(pow(a, q_ - 2));
        inv_[0] = 0;
    }
};

enum class GroupKind {
    general_linear,         // GL_n
    unitary,                // U_n, isometries of the identity Hermitian form
    orthogonal_odd,         // O_{2m+1}
    orthogonal_plus,        // O_{2m}, Witt index m
    orthogonal_minus,       // O_{2m}, Witt index m-1
    symplectic,             // Sp_{2m}
    special_orthogonal_odd, // determinant-1 part of O_{2m+1}
};

// param is n for GL_n/U_n and m for the rest.
struct ClassicalGroup {
    GroupKind kind;
    unsigned param;
};

inline unsigned matrix_size(const ClassicalGroup& g) {
    switch (g.kind) {
    case GroupKind::general_linear:
    case GroupKind::unitary: return g.param;
    case GroupKind::orthogonal_odd:
    case GroupKind::special_orthogonal_odd: return 2 * g.param + 1;
    default: return 2 * g.param;
    }
}

inline Int group_dim(const ClassicalGroup& g) {
    if (g.param == 0) throw input_error("group_dim: size parameter must be positive");
    const Int n = g.param;
    switch (g.kind) {
    case GroupKind::general_linear:
    case GroupKind::unitary: return n * n;
    case GroupKind::orthogonal_odd:
    case GroupKind::special_orthogonal_odd:
    case GroupKind::symplectic: return n * (2 * n + 1);
    case GroupKind::orthogonal_plus:
    case GroupKind::orthogonal_minus: return n * (2 * n - 1);
    }
    throw input_error("group_dim: unknown kind");
}

inline Int group_order(const ClassicalGroup& g, const Int& q) {
    if (g.param == 0) throw input_error("group_order: size parameter must be positive");
    prime_power_decompose(q); // rejects non-prime-powers
    const unsigned m = g.param;
    Int r;
    switch (g.kind) {
    case GroupKind::general_linear:
        r = pow_int(q, m * (m - 1) / 2);
        for (unsigned i = 1; i <= m; ++i) r *= pow_int(q, i) - 1;
        return r;
    case GroupKind::unitary:
        r = pow_int(q, m * (m - 1) / 2);
        for (unsigned i = 1; i <= m; ++i) r *= pow_int(q, i) - (i % 2 ? -1 : 1);
        return r;
    case GroupKind::orthogonal_odd:
        // Twice the rotation count in odd characteristic (reflections there
        // have determinant -1 != 1); in characteristic 2 the determinant is
        // identically 1 and the two kinds coincide.
        r = (q % 2 != 0 ? 2 : 1) * pow_int(q, m * m);
        for (unsigned i = 1; i <= m; ++i) r *= pow_int(q, 2 * i) - 1;
        return r;
    case GroupKind::special_orthogonal_odd:
    case GroupKind::symplectic:
        r = pow_int(q, m * m);
        for (unsigned i = 1; i <= m; ++i) r *= pow_int(q, 2 * i) - 1;
        return r;
    case GroupKind::orthogonal_plus:
        r = 2 * pow_int(q, m * (m - 1)) * (pow_int(q, m) - 1);
        for (unsigned i = 1; i < m; ++i) r *= pow_int(q, 2 * i) - 1;
        return r;
    case GroupKind::orthogonal_minus:
        r = 2 * pow_int(q, m * (m - 1)) * (pow_int(q, m) + 1);
        for (unsigned i = 1; i < m; ++i) r *= pow_int(q, 2 * i) - 1;
        return r;
    }
    throw input_error("group_order: unknown kind");
}

inline constexpr uint64_t default_enumeration_cap = 100000000;

namespace detail {

// Exhaustive matrix-group counter.  Builds group elements column by column:
// a candidate for column i is kept when it satisfies the defining conditions
// of the kind against every previously chosen column, so the walk's leaves
// are exactly the group elements.  The budget counts candidate columns
// scanned, the actual unit of work.
class BruteForcer {
public:
    BruteForcer(const ClassicalGroup& g, unsigned q, uint64_t cap)
        : g_(g), cap_(cap), field_(make_entry_field(g, q)) {
        n_ = matrix_size(g);
        qe_ = field_.q();
        conj_.resize(qe_);
        for (unsigned a = 0; a < qe_; ++a)
            conj_[a] = g.kind == GroupKind::unitary ? field_.pow(a, q) : a;
        build_form(q);
    }

    Int run() {
        cols_.assign(n_, std::vector<unsigned>(n_, 0));
        lin_.assign(n_, std::vector<unsigned>(n_, 0));
        ech_.clear();
        count_ = 0;
        scanned_ = 0;
        descend(0);
        return count_;
    }

private:
    ClassicalGroup g_;
    uint64_t cap_;
    SmallField field_;
    unsigned n_ = 0, qe_ = 0;
    std::vector<unsigned> conj_;
    std::vector<std::vector<unsigned>> bil_; // hermitian / symplectic / polarization values
    std::vector<unsigned> quad_;             // quadratic values of the basis vectors
    std::vector<std::vector<unsigned>> cols_;
    std::vector<std::vector<unsigned>> lin_; // lin_[i][t]: functional giving B(col_i, .)
    std::vector<std::pair<unsigned, std::vector<unsigned>>> ech_; // pivot + reduced row
    Int count_;
    uint64_t scanned_ = 0;

    bool gl() const { return g_.kind == GroupKind::general_linear; }
    bool orthogonal() const {
        return g_.kind == GroupKind::orthogonal_odd ||
               g_.kind == GroupKind::orthogonal_plus ||
               g_.kind == GroupKind::orthogonal_minus ||
               g_.kind == GroupKind::special_orthogonal_odd;
    }

    static SmallField make_entry_field(const ClassicalGroup& g, unsigned q) {
        if (g.param == 0)
            throw input_error("brute_force_order: size parameter must be positive");
        const auto [p, k] = prime_power_decompose(Int(q));
        const unsigned pu = static_cast<unsigned>(p);
        return SmallField(pu, g.kind == GroupKind::unitary ? 2 * k : k);
    }

    void build_form(unsigned q) {
        const unsigned m = g_.param;
        bil_.assign(n_, std::vector<unsigned>(n_, 0));
        quad_.assign(n_, 0);
        switch (g_.kind) {
        case GroupKind::general_linear:
            return;
        case GroupKind::unitary:
            for (unsigned i = 0; i < n_; ++i) bil_[i][i] = 1;
            return;
        case GroupKind::symplectic:
            for (unsigned i = 0; i < m; ++i) {
                bil_[i][m + i] = 1;
                bil_[m + i][i] = field_.neg(1);
            }
            return;
        case GroupKind::orthogonal_odd:
        case GroupKind::special_orthogonal_odd:
            // Q = x_0^2 + x_1 x_2 + ... + x_{2m-1} x_{2m}; a diagonal form
            // would degenerate in characteristic 2, this shape never does.
            quad_[0] = 1;
            for (unsigned i = 0; i < m; ++i) set_hyperbolic_pair(1 + 2 * i, 2 + 2 * i);
            break;
        case GroupKind::orthogonal_plus:
            for (unsigned i = 0; i < m; ++i) set_hyperbolic_pair(2 * i, 2 * i + 1);
            break;
        case GroupKind::orthogonal_minus: {
            if (field_.k() != 1)
                throw unsupported_error(
                    "brute_force_order: the minus kind is implemented for prime q only");
            // Anisotropic plane: the norm form x^2 + b xy + c y^2 of the
            // first irreducible quadratic t^2 + b t + c, then hyperbolic.
            const SmallField ext(field_.p(), 2);
            const unsigned b = ext.modpoly()[1];
            const unsigned c = ext.modpoly()[0];
            quad_[0] = 1;
            quad_[1] = c;
            bil_[0][1] = bil_[1][0] = b;
            for (unsigned i = 1; i < m; ++i) set_hyperbolic_pair(2 * i, 2 * i + 1);
            break;
        }
        default:
            throw input_error("brute_force_order: unknown kind");
        }
        // Polarization diagonal: B(e_i, e_i) = 2 Q(e_i) (vanishes in char 2).
        const unsigned two = field_.add(1, 1);
        for (unsigned i = 0; i < n_; ++i)
            bil_[i][i] = field_.add(bil_[i][i], field_.mul(two, quad_[i]));
        (void)q;
    }

    void set_hyperbolic_pair(unsigned i, unsigned j) {
        bil_[i][j] = bil_[j][i] = 1;
        quad_[i] = quad_[j] = 0;
    }

    unsigned herm_self(const std::vector<unsigned>& v) const {
        unsigned acc = 0;
        for (unsigned t = 0; t < n_; ++t)
            acc = field_.add(acc, field_.mul(conj_[v[t]], v[t]));
        return acc;
    }

    // Q(sum a_i e_i) = sum a_i^2 Q(e_i) + sum_{i<j} a_i a_j B(e_i, e_j)
    unsigned quad_value(const std::vector<unsigned>& v) const {
        unsigned acc = 0;
        for (unsigned i = 0; i < n_; ++i) {
            if (!v[i]) continue;
            acc = field_.add(acc, field_.mul(field_.mul(v[i], v[i]), quad_[i]));
            for (unsigned j = i + 1; j < n_; ++j)
                if (v[j] && bil_[i][j])
                    acc = field_.add(acc, field_.mul(field_.mul(v[i], v[j]), bil_[i][j]));
        }
        return acc;
    }

    unsigned apply_lin(const std::vector<unsigned>& lin, const std::vector<unsigned>& v) const {
        unsigned acc = 0;
        for (unsigned t = 0; t < n_; ++t)
            if (lin[t] && v[t]) acc = field_.add(acc, field_.mul(lin[t], v[t]));
        return acc;
    }

    bool admissible(unsigned depth, const std::vector<unsigned>& v) const {
        switch (g_.kind) {
        case GroupKind::general_linear:
            return !reduce_against_echelon(v).second;
        case GroupKind::unitary:
            if (herm_self(v) != bil_[depth][depth]) return false;
            for (unsigned i = 0; i < depth; ++i)
                if (apply_lin(lin_[i], v) != bil_[i][depth]) return false;
            return true;
        case GroupKind::symplectic:
            for (unsigned i = 0; i < depth; ++i)
                if (apply_lin(lin_[i], v) != bil_[i][depth]) return false;
            return true;
        default: // orthogonal kinds
            if (quad_value(v) != quad_[depth]) return false;
            for (unsigned i = 0; i < depth; ++i)
                if (apply_lin(lin_[i], v) != bil_[i][depth]) return false;
            return true;
        }
    }

    // Reduce v by the echelon rows; returns (residue, is_zero).
    std::pair<std::vector<unsigned>, bool> reduce_against_echelon(
        const std::vector<unsigned>& v) const {
        std::vector<unsigned> w = v;
        for (const auto& [piv, row] : ech_) {
            const unsigned f = w[piv];
            if (!f) continue;
            for (unsigned t = 0; t < n_; ++t)
                if (row[t]) w[t] = field_.sub(w[t], field_.mul(f, row[t]));
        }
        bool zero = true;
        for (unsigned t = 0; t < n_; ++t)
            if (w[t]) {
                zero = false;
                break;
            }
        return {std::move(w), zero};
    }

    // Functional v -> B(c, v), precomputed when column c is fixed.
    void fill_lin(unsigned depth) {
        const std::vector<unsigned>& c = cols_[depth];
        std::vector<unsigned>& out = lin_[depth];
        if (g_.kind == GroupKind::unitary) {
            for (unsigned t = 0; t < n_; ++t) out[t] = conj_[c[t]];
            return;
        }
        for (unsigned j = 0; j < n_; ++j) {
            unsigned acc = 0;
            for (unsigned i = 0; i < n_; ++i)
                if (c[i] && bil_[i][j]) acc = field_.add(acc, field_.mul(c[i], bil_[i][j]));
            out[j] = acc;
        }
    }

    unsigned det_of_cols() const {
        std::vector<std::vector<unsigned>> a(n_, std::vector<unsigned>(n_));
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) a[i][j] = cols_[j][i];
        unsigned det = 1;
        for (unsigned c = 0; c < n_; ++c) {
            unsigned r = c;
            while (r < n_ && !a[r][c]) ++r;
            if (r == n_) return 0;
            if (r != c) {
                std::swap(a[r], a[c]);
                det = field_.neg(det);
            }
            det = field_.mul(det, a[c][c]);
            const unsigned ic = field_.inv(a[c][c]);
            for (unsigned rr = c + 1; rr < n_; ++rr) {
                if (!a[rr][c]) continue;
                const unsigned f = field_.mul(a[rr][c], ic);
                for (unsigned cc = c; cc < n_; ++cc)
                    a[rr][cc] = field_.sub(a[rr][cc], field_.mul(f, a[c][cc]));
            }
        }
        return det;
    }

    bool leaf_ok() const {
        // Hermitian and symplectic targets are nondegenerate, forcing
        // invertibility; the odd orthogonal polarization degenerates in
        // characteristic 2, so orthogonal kinds get an explicit check.
        if (!orthogonal()) return true;
        const unsigned d = det_of_cols();
        if (d == 0) return false;
        return g_.kind != GroupKind::special_orthogonal_odd || d == 1;
    }

    void descend(unsigned depth) {
        if (depth == n_) {
            if (leaf_ok()) ++count_;
            return;
        }
        uint64_t total = 1;
        for (unsigned i = 0; i < n_; ++i) {
            if (total > UINT64_MAX / qe_) {
                total = UINT64_MAX;
                break;
            }
            total *= qe_;
        }
        std::vector<unsigned> v(n_, 0);
        for (uint64_t it = 0; it < total; ++it) {
            if (++scanned_ > cap_)
                throw unsupported_error(
                    "brute_force_order: enumeration budget of " + std::to_string(cap_) +
                    " candidate columns exhausted; the candidate space is " +
                    std::to_string(qe_) + "^" + std::to_string(n_) + " per column across " +
                    std::to_string(n_) + " columns");
            if (admissible(depth, v)) {
                cols_[depth] = v;
                bool pushed = false;
                if (gl()) {
                    auto [w, zero] = reduce_against_echelon(v);
                    unsigned piv = 0;
                    while (piv < n_ && !w[piv]) ++piv;
                    const unsigned scale = field_.inv(w[piv]);
                    for (unsigned t = 0; t < n_; ++t) w[t] = field_.mul(w[t], scale);
                    ech_.emplace_back(piv, std::move(w));
                    pushed = true;
                } else {
                    fill_lin(depth);
                }
                descend(depth + 1);
                if (pushed) ech_.pop_back();
            }
            for (unsigned i = 0; i < n_; ++i) {
                if (++v[i] < qe_) break;
                v[i] = 0;
            }
        }
    }
};

} // namespace detail

// Order of the group by literal enumeration of its elements; the oracle the
// closed forms are tested against.  Accepts any prime power the entry
// tables can hold, except the minus kind, which needs prime q.
inline Int brute_force_order(const ClassicalGroup& g, unsigned q,
                             uint64_t cap = default_enumeration_cap) {
    detail::BruteForcer bf(g, q, cap);
    return bf.run();
}

} // namespace unimass
