#pragma once

#include <map>

#include "unimass/errors.hpp"
#include "unimass/fingroups.hpp"
#include "unimass/hermlocal.hpp"
#include "unimass/quadfield.hpp"
#include "unimass/rational.hpp"

namespace unimass {

// sign-and-power-of-two prefactor of the global mass
inline Rat epsilon_factor(unsigned n, unsigned w) {
    if (n < 1 || w < 1) throw input_error("epsilon_factor: need n, w >= 1");
    if (n % 2 == 1) return Rat(1, pow_int(2, n));
    const Rat v = Rat(1, pow_int(2, n + w - 1));
    return (n / 2) % 2 == 0 ? v : -v;
}

// index of the similitude class group against the unitary one
inline Int tau_factor(unsigned n, unsigned w) {
    if (n < 1 || w < 1) throw input_error("tau_factor: need n, w >= 1");
    return n % 2 == 1 ? pow_int(2, w - 1) : Int(1);
}

// local correction at a ramified prime; trivial in odd rank
inline Int kappa_factor(const LocalProfile& prof) {
    if (prof.behavior.how != Splitting::ramified)
        throw input_error("kappa_factor: profile is not at a ramified prime");
    const unsigned n = prof.n;
    if (n % 2 == 1) return 1;
    if (!prof.det_matches_sign.has_value())
        throw input_error("kappa_factor: even-rank profile lacks its determinant class");
    const bool match = *prof.det_matches_sign;
    const Int half = pow_int(prof.ell, n / 2);
    if (prof.behavior.kind == RamifiedKind::odd) return match ? Int(half + 1) : Int(half - 1);
    switch (prof.norm_type) {
    case NormType::normal:
        if (prof.behavior.kind == RamifiedKind::dyadic_unit) return pow_int(2, n) - 1;
        return half * (pow_int(2, n) - 1);
    case NormType::subnormal:
        if (prof.behavior.kind == RamifiedKind::dyadic_unit) return 2;
        return match ? Int(half + 1) : Int(half - 1);
    default:
        throw input_error("kappa_factor: dyadic profile lacks a norm type");
    }
}

// all ramified primes at once, keyed by the prime
inline std::map<Int, Int> kappa_all(const QuadField& E, const GramMatrix& g) {
    std::map<Int, Int> out;
    for (const Int& ell : E.ramified_primes) out[ell] = kappa_factor(local_profile(E, g, ell));
    return out;
}

// Global mass of the genus of the definite unimodular lattice with the
// given local data.
inline Rat mass_lattice(const QuadField& E, const GramMatrix& g) {
    if (g.m != E.m) throw input_error("mass_lattice: matrix and field disagree on m");
    if (!is_unimodular(g)) throw input_error("mass_lattice: lattice is not unimodular");
    const unsigned n = g.n;
    Rat acc = Rat(2, pow_int(2, n + E.w));
    if (n % 2 == 0 && (n / 2) % 2 == 1) acc = -acc;
    acc *= l_product(E, n);
    for (const auto& [ell, kap] : kappa_all(E, g)) {
        (void)ell;
        acc *= kap;
    }
    if (acc <= 0) throw consistency_error("mass_lattice: mass must be positive");
    return acc;
}

struct ParahoricChoice {
    Splitting behavior = Splitting::inert; // inert or split only
    unsigned t = 0;                        // vertex index, inert case
    bool basic = false;                    // ties t to the signature parity
};

// Index-type factor of a maximal parahoric: an integer-valued ratio of
// sign-twisted q-factorials (inert) or the analogous split product.
inline Int lambda_parahoric(const Int& p, const ParahoricChoice& choice, unsigned n,
                            unsigned r, unsigned s) {
    if (r + s != n || n == 0) throw input_error("lambda_parahoric: need r + s = n >= 1");
    if (!detail::is_prime(p)) throw input_error("lambda_parahoric: p must be prime");
    const auto u = [&](unsigned k) { // p^k - (-1)^k
        return pow_int(p, k) - (k % 2 == 0 ? 1 : -1);
    };
    Rat ratio = 1;
    switch (choice.behavior) {
    case Splitting::inert: {
        const unsigned t = choice.t;
        if (t > n) throw input_error("lambda_parahoric: need 0 <= t <= n");
        if (choice.basic && (t % 2) != (s % 2))
            throw input_error("lambda_parahoric: a vertex of the compact type must have t = s mod 2");
        for (unsigned i = 1; i <= n; ++i) ratio *= u(i);
        for (unsigned j = 1; j <= n - t; ++j) ratio /= u(j);
        for (unsigned k = 1; k <= t; ++k) ratio /= u(k);
        break;
    }
    case Splitting::split: {
        const unsigned m = std::gcd(r, s); // gcd(0, n) = n covers one-sided signatures
        for (unsigned h = 1; h <= n; ++h) ratio *= pow_int(p, h) - 1;
        for (unsigned i = 1; i <= m; ++i) ratio /= pow_int(p, (n / m) * i) - 1;
        break;
    }
    default:
        throw input_error("lambda_parahoric: behavior must be inert or split");
    }
    const Int lam = require_integer(ratio, "lambda_parahoric: ratio must be an integer");
    if (lam <= 0) throw consistency_error("lambda_parahoric: factor must be positive");
    return lam;
}

// Mass of the inner form at maximal-parahoric level away from a good odd
// prime p.  Equals tau * mass_lattice * lambda_parahoric.
inline Rat mass_inner(const QuadField& E, const GramMatrix& g, const Int& p,
                      const ParahoricChoice& choice, unsigned r, unsigned s) {
    if (g.m != E.m) throw input_error("mass_inner: matrix and field disagree on m");
    if (!is_unimodular(g)) throw input_error("mass_inner: lattice is not unimodular");
    const unsigned n = g.n;
    if (r + s != n) throw input_error("mass_inner: signature must sum to the rank");
    if (p == 2) throw input_error("mass_inner: p must be odd");
    const LocalBehavior lb = splitting_behavior(E, p);
    if (lb.how == Splitting::ramified) throw input_error("mass_inner: p must be unramified");
    if (lb.how != choice.behavior)
        throw input_error("mass_inner: parahoric type does not match the behavior of p");
    Rat acc = epsilon_factor(n, E.w) * l_product(E, n);
    for (const auto& [ell, kap] : kappa_all(E, g)) {
        (void)ell;
        acc *= kap;
    }
    acc *= lambda_parahoric(p, choice, n, r, s);
    if (acc <= 0) throw consistency_error("mass_inner: mass must be positive");
    return acc;
}

// [G(Z^p-hat) : K^p(N)]: product over the primes of N of the surjective
// reduction counts; level primes touching the discriminant are out of scope.
inline Int level_index(const QuadField& E, unsigned n, const Int& N) {
    if (n == 0) throw input_error("level_index: rank must be positive");
    if (N < 3) throw input_error("level_index: level must be at least 3");
    if (gcd(N, E.d) != 1)
        throw unsupported_error("level_index: level primes dividing the discriminant");
    Int idx = 1;
    for (const auto& [ell, a] : detail::factor(N)) {
        const LocalBehavior lb = splitting_behavior(E, ell);
        const Int card = lb.how == Splitting::inert
                             ? group_order({GroupKind::unitary, n}, ell)
                             : group_order({GroupKind::general_linear, n}, ell);
        idx *= pow_int(ell, (a - 1) * (n * n + 1)) * (ell - 1) * card;
    }
    return idx;
}

// Number of classes at principal level N away from p: the level index
// spreads the mass into a genuine count once N >= 3 kills all stabilizers.
inline Int class_count_inner(const QuadField& E, const GramMatrix& g, const Int& p,
                             const ParahoricChoice& choice, unsigned r, unsigned s,
                             const Int& N) {
    if (gcd(N, p) != 1) throw input_error("class_count_inner: level must be prime to p");
    const Rat mass = mass_inner(E, g, p, choice, r, s);
    const Rat total = Rat(level_index(E, g.n, N)) * mass;
    const Int cnt = require_integer(total, "class_count_inner: count must be an integer");
    if (cnt <= 0) throw consistency_error("class_count_inner: count must be positive");
    return cnt;
}

} // namespace unimass
