#pragma once

#include <vector>

#include "unimass/errors.hpp"
#include "unimass/rational.hpp"

namespace unimass {

// Class number of a negative fundamental discriminant d, by counting reduced
// primitive binary quadratic forms (a,b,c): |b| <= a <= c, b^2 - 4ac = d,
// gcd(a,b,c) = 1, with b >= 0 whenever |b| = a or a = c.
inline Int class_number_of_disc(const Int& d) {
    if (d >= 0) throw input_error("class_number_of_disc: discriminant must be negative");
    Int d4 = d % 4;
    if (d4 < 0) d4 += 4;
    if (d4 != 0 && d4 != 1)
        throw input_error("class_number_of_disc: discriminant must be 0 or 1 mod 4");
    Int h = 0;
    const Int step = 2;
    for (Int b = ((-d) % 2 == 0) ? Int(0) : Int(1); 3 * b * b <= -d; b += step) {
        const Int ac = (b * b - d) / 4; // b = d mod 2 makes this exact
        for (Int a = b > 0 ? b : Int(1); a * a <= ac; ++a) {
            if (ac % a != 0) continue;
            const Int c = ac / a;
            if (gcd(gcd(a, b), c) != 1) continue;
            h += (b == 0 || a == b || a == c) ? 1 : 2;
        }
    }
    return h;
}

// An imaginary quadratic field Q(sqrt(m)), m < 0 squarefree.  All derived
// invariants are computed once at construction; instances are immutable,
// so sharing across threads is safe.
struct QuadField {
    Int m;                            // squarefree, negative
    Int d;                            // m if m = 1 mod 4, else 4m
    std::vector<Int> ramified_primes; // prime divisors of d, ascending
    unsigned w = 0;                   // count of ramified primes
    unsigned mu = 2;                  // roots of unity: 6, 4, or 2
    Int h;                            // class number

    DirichletChar chi() const { return DirichletChar{d}; }
};

inline QuadField make_quadfield(const Int& m) {
    if (m >= 0) throw input_error("make_quadfield: m must be negative");
    if (-m > Int(1000000000000LL))
        throw unsupported_error("make_quadfield: |m| too large to validate squarefreeness");
    QuadField E;
    E.m = m;
    Int mm = -m;
    const auto fac = detail::factor(mm);
    for (const auto& [p, e] : fac)
        if (e > 1) throw input_error("make_quadfield: m must be squarefree");
    Int m4 = m % 4;
    if (m4 < 0) m4 += 4;
    E.d = (m4 == 1) ? m : 4 * m;
    for (const auto& [p, e] : detail::factor(E.d)) E.ramified_primes.push_back(p);
    E.w = static_cast<unsigned>(E.ramified_primes.size());
    E.mu = (E.d == -3) ? 6u : (E.d == -4) ? 4u : 2u;
    E.h = class_number_of_disc(E.d);
    return E;
}

// Accepts a fundamental discriminant instead of the radicand.
inline QuadField quadfield_from_disc(const Int& d) {
    if (d >= 0) throw input_error("quadfield_from_disc: discriminant must be negative");
    Int d4 = d % 4;
    if (d4 < 0) d4 += 4;
    Int m;
    if (d4 == 1) {
        m = d;
    } else if (d4 == 0) {
        m = d / 4;
        Int r = m % 4;
        if (r < 0) r += 4;
        if (r == 1) throw input_error("quadfield_from_disc: discriminant is not fundamental");
    } else {
        throw input_error("quadfield_from_disc: discriminant must be 0 or 1 mod 4");
    }
    QuadField E = make_quadfield(m); // validates squarefreeness of m
    if (E.d != d) throw input_error("quadfield_from_disc: discriminant is not fundamental");
    return E;
}

inline Int class_number(const QuadField& E) { return E.h; }

// How a rational prime sits in E, with the two dyadic ramified flavors kept
// apart: unit type has d = 4 mod 8, prime type d = 0 mod 8.
enum class Splitting { split, inert, ramified };
enum class RamifiedKind { none, odd, dyadic_unit, dyadic_prime };

struct LocalBehavior {
    Splitting how = Splitting::split;
    RamifiedKind kind = RamifiedKind::none;
};

inline LocalBehavior splitting_behavior(const QuadField& E, const Int& ell) {
    if (!detail::is_prime(ell)) throw input_error("splitting_behavior: not a prime");
    const int c = kronecker(E.d, ell);
    if (c == 1) return {Splitting::split, RamifiedKind::none};
    if (c == -1) return {Splitting::inert, RamifiedKind::none};
    if (ell != 2) return {Splitting::ramified, RamifiedKind::odd};
    Int d8 = E.d % 8;
    if (d8 < 0) d8 += 8;
    return {Splitting::ramified,
            d8 == 4 ? RamifiedKind::dyadic_unit : RamifiedKind::dyadic_prime};
}

// Value of the completed Dirichlet series attached to E at 1 - j: the
// quadratic character's series for odd j, the Riemann series for even j
// (the character squares away).  Both reduce to Bernoulli data.
inline Rat l_value(const QuadField& E, unsigned j) {
    if (j == 0) throw input_error("l_value: index must be positive");
    if (j % 2 == 1) return -gen_bernoulli(E.chi(), j) / Rat(j);
    return -bernoulli(j) / Rat(j);
}

inline Rat l_product(const QuadField& E, unsigned n) {
    Rat acc = 1;
    for (unsigned j = 1; j <= n; ++j) acc *= l_value(E, j);
    return acc;
}

} // namespace unimass
