#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unimass/errors.hpp"
#include "unimass/quadfield.hpp"
#include "unimass/rational.hpp"

namespace unimass {

// Entries of Hermitian matrices: x + y*omega, where omega = (1+sqrt(m))/2
// when m = 1 mod 4 and sqrt(m) otherwise.  Multiplication is governed by
// omega^2 = t*omega - n0.
struct OmegaBasis {
    Int t, n0;

    static OmegaBasis for_m(const Int& m) {
        Int m4 = m % 4;
        if (m4 < 0) m4 += 4;
        if (m4 == 1) return {1, (1 - m) / 4};
        return {0, -m};
    }
};

struct OEElem {
    Int x, y;

    bool operator==(const OEElem&) const = default;
};

inline OEElem oe_add(const OEElem& a, const OEElem& b) { return {a.x + b.x, a.y + b.y}; }
inline OEElem oe_sub(const OEElem& a, const OEElem& b) { return {a.x - b.x, a.y - b.y}; }
inline OEElem oe_mul(const OEElem& a, const OEElem& b, const OmegaBasis& w) {
    return {a.x * b.x - w.n0 * a.y * b.y, a.x * b.y + a.y * b.x + w.t * a.y * b.y};
}
inline OEElem oe_conj(const OEElem& a, const OmegaBasis& w) {
    return {a.x + w.t * a.y, -a.y};
}
inline Int oe_norm(const OEElem& a, const OmegaBasis& w) {
    return a.x * a.x + w.t * a.x * a.y + w.n0 * a.y * a.y;
}
inline bool oe_is_zero(const OEElem& a) { return a.x == 0 && a.y == 0; }

// u / v when v divides u in the order; anything else is a broken invariant
// of the caller (used only where divisibility is guaranteed).
inline OEElem oe_div_exact(const OEElem& u, const OEElem& v, const OmegaBasis& w) {
    const Int nv = oe_norm(v, w);
    if (nv == 0) throw consistency_error("oe_div_exact: division by zero");
    const OEElem t = oe_mul(u, oe_conj(v, w), w);
    if (t.x % nv != 0 || t.y % nv != 0)
        throw consistency_error("oe_div_exact: inexact division");
    return {t.x / nv, t.y / nv};
}

struct GramMatrix {
    Int m;      // field radicand, fixes omega
    unsigned n = 0;
    std::vector<std::vector<OEElem>> e;

    OmegaBasis omega() const { return OmegaBasis::for_m(m); }
};

// Validates shape and Hermitian symmetry; diagonal entries end up rational
// integers automatically (an entry fixed by conjugation has y = 0).
inline GramMatrix make_gram(const Int& m, std::vector<std::vector<OEElem>> e) {
    GramMatrix g;
    g.m = m;
    g.n = static_cast<unsigned>(e.size());
    if (g.n == 0) throw input_error("make_gram: matrix must be nonempty");
    const OmegaBasis w = OmegaBasis::for_m(m);
    for (unsigned i = 0; i < g.n; ++i) {
        if (e[i].size() != g.n)
            throw input_error("make_gram: row " + std::to_string(i) + " has wrong length");
        for (unsigned j = 0; j <= i; ++j)
            if (!(e[i][j] == oe_conj(e[j][i], w)))
                throw input_error("make_gram: entries (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                  std::to_string(i) + ") are not conjugate");
    }
    g.e = std::move(e);
    return g;
}

inline GramMatrix identity_gram(const Int& m, unsigned n) {
    std::vector<std::vector<OEElem>> e(n, std::vector<OEElem>(n, OEElem{0, 0}));
    for (unsigned i = 0; i < n; ++i) e[i][i] = {1, 0};
    return make_gram(m, std::move(e));
}

// Direct sum of k hyperbolic planes [[0,1],[1,0]].
inline GramMatrix hyperbolic_gram(const Int& m, unsigned k) {
    const unsigned n = 2 * k;
    if (k == 0) throw input_error("hyperbolic_gram: need at least one plane");
    std::vector<std::vector<OEElem>> e(n, std::vector<OEElem>(n, OEElem{0, 0}));
    for (unsigned i = 0; i < k; ++i) {
        e[2 * i][2 * i + 1] = {1, 0};
        e[2 * i + 1][2 * i] = {1, 0};
    }
    return make_gram(m, std::move(e));
}

// Fraction-free elimination; the result of a Hermitian input is a rational
// integer, anything else means corrupted input.
inline Int gram_det(const GramMatrix& g) {
    const OmegaBasis w = g.omega();
    const unsigned n = g.n;
    std::vector<std::vector<OEElem>> a = g.e;
    int sign = 1;
    OEElem prev{1, 0};
    for (unsigned k = 0; k + 1 < n; ++k) {
        if (oe_is_zero(a[k][k])) {
            unsigned r = k + 1;
            while (r < n && oe_is_zero(a[r][k])) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (unsigned i = k + 1; i < n; ++i) {
            for (unsigned j = k + 1; j < n; ++j)
                a[i][j] = oe_div_exact(
                    oe_sub(oe_mul(a[i][j], a[k][k], w), oe_mul(a[i][k], a[k][j], w)),
                    prev, w);
            a[i][k] = {0, 0};
        }
        prev = a[k][k];
    }
    const OEElem d = a[n - 1][n - 1];
    if (d.y != 0) throw consistency_error("gram_det: determinant not conjugation-fixed");
    return sign > 0 ? d.x : -d.x;
}

inline bool is_unimodular(const GramMatrix& g) {
    const Int d = gram_det(g);
    return d == 1 || d == -1;
}

enum class NormType { not_applicable, normal, subnormal };

struct LocalProfile {
    Int ell;
    LocalBehavior behavior;
    NormType norm_type = NormType::not_applicable;
    std::optional<bool> det_matches_sign; // defined iff ramified and n even
    unsigned n = 0;
    Int det;
};

// Whether the unit c is a norm from the completion of E at the ramified
// prime ell.  For odd ell this is the Legendre symbol; at 2 the unit norm
// classes mod 8 decide, because 1 + 8 Z_2 consists of squares.
inline bool is_local_norm(const Int& c, const QuadField& E, const Int& ell) {
    if (splitting_behavior(E, ell).how != Splitting::ramified)
        throw input_error("is_local_norm: prime is not ramified in the field");
    if (gcd(c, ell) != 1) throw input_error("is_local_norm: argument is not a unit at the prime");
    if (ell != 2) return kronecker(c, ell) == 1;
    // Dyadic ramification forces m = 2 or 3 mod 4, so omega = sqrt(m) and
    // unit norms are x^2 - m y^2 with x, y not both even.
    Int target = c % 8;
    if (target < 0) target += 8;
    Int mm = E.m % 8;
    if (mm < 0) mm += 8;
    for (Int x = 0; x < 8; ++x)
        for (Int y = 0; y < 8; ++y) {
            const Int nrm = (x * x - mm * y * y) % 8;
            const Int val = nrm < 0 ? nrm + 8 : nrm;
            if (val % 2 == 1 && val == target) return true;
        }
    return false;
}

inline LocalProfile local_profile(const QuadField& E, const GramMatrix& g, const Int& ell) {
    if (g.m != E.m) throw input_error("local_profile: matrix and field disagree on m");
    LocalProfile prof;
    prof.ell = ell;
    prof.behavior = splitting_behavior(E, ell); // validates primality
    prof.n = g.n;
    prof.det = gram_det(g);
    if (gcd(prof.det, ell) != 1)
        throw input_error("local_profile: determinant is not a unit at the prime");
    const bool ramified = prof.behavior.how == Splitting::ramified;
    if (ramified && ell == 2) {
        // The norm ideal is generated by the diagonal and the traces of the
        // off-diagonal entries; the latter are always even here, so parity
        // of the diagonal decides.
        bool all_even = true;
        for (unsigned i = 0; i < g.n; ++i)
            if (g.e[i][i].x % 2 != 0) all_even = false;
        prof.norm_type = all_even ? NormType::subnormal : NormType::normal;
        if (prof.norm_type == NormType::subnormal && g.n % 2 != 0)
            throw consistency_error(
                "local_profile: odd-rank matrix with even diagonal cannot have unit determinant");
    }
    if (ramified && g.n % 2 == 0) {
        const Int c = (g.n / 2) % 2 == 0 ? prof.det : -prof.det;
        prof.det_matches_sign = is_local_norm(c, E, ell);
    }
    return prof;
}

// Representation density of the lattice at the profile's prime: the
// stabilized ratio |isometries mod ell^N| / ell^(N n^2).
inline Rat local_density(const LocalProfile& prof) {
    const unsigned n = prof.n;
    if (n == 0) throw input_error("local_density: empty profile");
    const Int q = prof.ell;
    Rat acc = 1;
    switch (prof.behavior.how) {
    case Splitting::split:
        for (unsigned i = 1; i <= n; ++i) acc *= 1 - Rat(1, pow_int(q, i));
        return acc;
    case Splitting::inert:
        for (unsigned i = 1; i <= n; ++i)
            acc *= 1 - Rat(i % 2 ? -1 : 1, pow_int(q, i));
        return acc;
    case Splitting::ramified: break;
    }
    if (n % 2 == 1) {
        acc = 2;
        for (unsigned i = 1; i <= (n - 1) / 2; ++i) acc *= 1 - Rat(1, pow_int(q, 2 * i));
        return acc;
    }
    if (!prof.det_matches_sign.has_value())
        throw input_error("local_density: even-rank ramified profile lacks its determinant class");
    const bool match = *prof.det_matches_sign;
    Rat prod = 1;
    for (unsigned i = 1; i <= n / 2; ++i) prod *= 1 - Rat(1, pow_int(q, 2 * i));
    if (prof.behavior.kind == RamifiedKind::odd) {
        const Rat half_pole = 1 + Rat(match ? 1 : -1, pow_int(q, n / 2));
        return 2 / half_pole * prod;
    }
    // dyadic
    switch (prof.norm_type) {
    case NormType::normal:
        return 2 / (1 - Rat(1, pow_int(q, n))) * prod;
    case NormType::subnormal:
        if (prof.behavior.kind == RamifiedKind::dyadic_unit)
            return Rat(pow_int(q, n)) * prod;
        return 2 * Rat(pow_int(q, n)) / (1 + Rat(match ? 1 : -1, pow_int(q, n / 2))) * prod;
    default:
        throw input_error("local_density: dyadic ramified profile lacks a norm type");
    }
}

namespace detail {

// (Z/ell^N)[omega], elements x + y*omega with both coordinates mod M = ell^N.
class LocalRing {
public:
    using Elem = std::pair<uint64_t, uint64_t>;

    LocalRing(const OmegaBasis& w, const Int& ell, unsigned N) {
        if (N == 0) throw input_error("LocalRing: precision must be positive");
        Int M = 1;
        for (unsigned i = 0; i < N; ++i) {
            M *= ell;
            if (M > 1000000) throw unsupported_error("LocalRing: ell^N above limit 10^6");
        }
        M_ = static_cast<uint64_t>(M);
        ell_ = static_cast<uint64_t>(ell);
        t_ = umod(w.t);
        n0_ = umod(w.n0);
    }

    uint64_t modulus() const { return M_; }
    uint64_t size() const { return M_ * M_; }

    uint64_t umod(const Int& v) const {
        Int r = v % Int(M_);
        if (r < 0) r += Int(M_);
        return static_cast<uint64_t>(r);
    }

    Elem reduce(const OEElem& a) const { return {umod(a.x), umod(a.y)}; }
    Elem from_index(uint64_t i) const { return {i / M_, i % M_}; }
    uint64_t index(const Elem& a) const { return a.first * M_ + a.second; }

    Elem add(const Elem& a, const Elem& b) const {
        return {(a.first + b.first) % M_, (a.second + b.second) % M_};
    }
    Elem sub(const Elem& a, const Elem& b) const {
        return {(a.first + M_ - b.first) % M_, (a.second + M_ - b.second) % M_};
    }
    Elem mul(const Elem& a, const Elem& b) const {
        const uint64_t yy = a.second * b.second % M_;
        const uint64_t x = (a.first * b.first % M_ + (M_ - n0_ % M_) * yy) % M_;
        const uint64_t y = (a.first * b.second + a.second * b.first + t_ * yy) % M_;
        return {x, y};
    }
    Elem conj(const Elem& a) const {
        return {(a.first + t_ * a.second) % M_, (M_ - a.second) % M_};
    }
    bool is_unit(const Elem& a) const {
        const Elem n = mul(a, conj(a));
        return std::gcd(n.first, ell_) == 1;
    }
    Elem inv_unit(const Elem& a) const {
        const Elem cj = conj(a);
        const uint64_t n = mul(a, cj).first; // the norm, a unit of Z/M
        uint64_t ninv = 1, base = n % M_;
        // Euler, M is a prime power: phi = M - M/ell
        uint64_t e = M_ - M_ / ell_ - 1;
        while (e) {
            if (e & 1) ninv = ninv * base % M_;
            base = base * base % M_;
            e >>= 1;
        }
        return {cj.first * ninv % M_, cj.second * ninv % M_};
    }

private:
    uint64_t M_ = 0, ell_ = 0, t_ = 0, n0_ = 0;
};

} // namespace detail

// Literal count of Gram-preserving matrices over (Z/ell^N)[omega], divided
// by ell^(N n^2): the defining sequence whose stable value local_density
// reproduces in closed form.  The cap counts candidate columns scanned.
inline Rat brute_force_density(const QuadField& E, const GramMatrix& g, const Int& ell,
                               unsigned N, uint64_t cap = 100000000) {
    if (g.m != E.m) throw input_error("brute_force_density: matrix and field disagree on m");
    if (!detail::is_prime(ell)) throw input_error("brute_force_density: not a prime");
    if (gcd(gram_det(g), ell) != 1)
        throw input_error("brute_force_density: determinant is not a unit at the prime");
    const detail::LocalRing R(g.omega(), ell, N);
    const unsigned n = g.n;
    using Elem = detail::LocalRing::Elem;

    std::vector<std::vector<Elem>> phi(n, std::vector<Elem>(n));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) phi[i][j] = R.reduce(g.e[i][j]);

    // <u, v> = conj(u)^T Phi v
    const auto pairing = [&](const std::vector<Elem>& u, const std::vector<Elem>& v) {
        Elem acc{0, 0};
        for (unsigned i = 0; i < n; ++i) {
            Elem row{0, 0};
            for (unsigned j = 0; j < n; ++j) row = R.add(row, R.mul(phi[i][j], v[j]));
            acc = R.add(acc, R.mul(R.conj(u[i]), row));
        }
        return acc;
    };

    uint64_t scanned = 0;
    const auto bump = [&](uint64_t k = 1) {
        scanned += k;
        if (scanned > cap)
            throw unsupported_error(
                "brute_force_density: enumeration budget of " + std::to_string(cap) +
                " candidate columns exhausted (ring size " + std::to_string(R.size()) +
                ", rank " + std::to_string(n) + ")");
    };

    Int count = 0;

    if (n == 1) {
        const uint64_t total = R.size();
        for (uint64_t i = 0; i < total; ++i) {
            bump();
            const Elem v = R.from_index(i);
            std::vector<Elem> col{v};
            if (pairing(col, col) == phi[0][0]) ++count;
        }
    } else if (n == 2) {
        // Column 1 by scan; column 2 = (a, b) from the linear condition
        // <v1, .> = phi[0][1], solved coordinate by coordinate.
        const uint64_t total = R.size();
        for (uint64_t ix = 0; ix < total; ++ix)
            for (uint64_t iy = 0; iy < total; ++iy) {
                bump();
                std::vector<Elem> v1{R.from_index(ix), R.from_index(iy)};
                if (pairing(v1, v1) != phi[0][0]) continue;
                // <v1, v2> = c*a + d*b with
                const Elem c = R.add(R.mul(R.conj(v1[0]), phi[0][0]),
                                     R.mul(R.conj(v1[1]), phi[1][0]));
                const Elem d = R.add(R.mul(R.conj(v1[0]), phi[0][1]),
                                     R.mul(R.conj(v1[1]), phi[1][1]));
                const Elem e = phi[0][1];
                if (R.is_unit(c)) {
                    const Elem cinv = R.inv_unit(c);
                    for (uint64_t ib = 0; ib < total; ++ib) {
                        bump();
                        const Elem b = R.from_index(ib);
                        const Elem a = R.mul(cinv, R.sub(e, R.mul(d, b)));
                        std::vector<Elem> v2{a, b};
                        if (pairing(v2, v2) == phi[1][1]) ++count;
                    }
                } else if (R.is_unit(d)) {
                    const Elem dinv = R.inv_unit(d);
                    for (uint64_t ia = 0; ia < total; ++ia) {
                        bump();
                        const Elem a = R.from_index(ia);
                        const Elem b = R.mul(dinv, R.sub(e, R.mul(c, a)));
                        std::vector<Elem> v2{a, b};
                        if (pairing(v2, v2) == phi[1][1]) ++count;
                    }
                } else {
                    // fibers of multiplication by c over every target
                    std::vector<std::vector<uint64_t>> fiber(total);
                    for (uint64_t ia = 0; ia < total; ++ia)
                        fiber[R.index(R.mul(c, R.from_index(ia)))].push_back(ia);
                    for (uint64_t ib = 0; ib < total; ++ib) {
                        bump();
                        const Elem b = R.from_index(ib);
                        const Elem z = R.sub(e, R.mul(d, b));
                        for (const uint64_t ia : fiber[R.index(z)]) {
                            const Elem a = R.from_index(ia);
                            std::vector<Elem> v2{a, b};
                            if (pairing(v2, v2) == phi[1][1]) ++count;
                        }
                    }
                }
            }
    } else {
        // generic column walk, candidates enumerated odometer-style
        std::vector<std::vector<Elem>> cols(n, std::vector<Elem>(n));
        const uint64_t total = R.size();
        uint64_t cands = 1;
        bool overflow = false;
        for (unsigned i = 0; i < n; ++i) {
            if (cands > UINT64_MAX / total) {
                overflow = true;
                break;
            }
            cands *= total;
        }
        if (overflow || cands > cap)
            throw unsupported_error(
                "brute_force_density: rank " + std::to_string(n) + " over a ring of size " +
                std::to_string(total) + " needs more than the budget of " +
                std::to_string(cap) + " candidate columns per level");
        const auto descend = [&](auto&& self, unsigned depth) -> void {
            if (depth == n) {
                ++count;
                return;
            }
            std::vector<uint64_t> digits(n, 0);
            for (uint64_t it = 0; it < cands; ++it) {
                bump();
                std::vector<Elem> v(n);
                for (unsigned i = 0; i < n; ++i) v[i] = R.from_index(digits[i]);
                bool ok = pairing(v, v) == phi[depth][depth];
                for (unsigned i = 0; ok && i < depth; ++i)
                    ok = pairing(cols[i], v) == phi[i][depth];
                if (ok) {
                    cols[depth] = v;
                    self(self, depth + 1);
                }
                for (unsigned i = 0; i < n; ++i) {
                    if (++digits[i] < total) break;
                    digits[i] = 0;
                }
            }
        };
        descend(descend, 0);
    }

    return Rat(count, pow_int(ell, static_cast<unsigned>(N) * n * n));
}

} // namespace unimass
