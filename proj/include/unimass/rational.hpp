#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unimass/errors.hpp"

namespace unimass {

using Int = boost::multiprecision::cpp_int;
// cpp_rational keeps lowest terms and a positive denominator by construction.
using Rat = boost::multiprecision::cpp_rational;

inline Int pow_int(const Int& base, unsigned e) {
    Int r = 1;
    Int b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

// Rat -> Int when the value is integral; the caller names the quantity so
// the error identifies which internal identity broke.
inline Int require_integer(const Rat& x, const char* what) {
    if (denominator(x) != 1)
        throw consistency_error(std::string(what) + ": expected an integer, got " +
                                x.str());
    return numerator(x);
}

namespace detail {

// Trial-division factorization; inputs here are desk-sized.
inline std::vector<std::pair<Int, unsigned>> factor(Int n) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, unsigned>> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

} // namespace detail

// q = p^k with p prime, k >= 1; rejects everything else.
inline std::pair<Int, unsigned> prime_power_decompose(const Int& q) {
    if (q < 2) throw input_error("prime_power_decompose: need q >= 2");
    const auto fac = detail::factor(q);
    if (fac.size() != 1) throw input_error("prime_power_decompose: not a prime power");
    return fac[0];
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;          // exact: r is C(n-k+i, i) after this step
    }
    return r;
}

// Kronecker symbol (a|n), extended to all n != 0.  n == 0 is rejected rather
// than given the occasionally-seen convention value.
inline int kronecker(Int a, Int n) {
    if (n == 0) throw input_error("kronecker: modulus must be nonzero");
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    if ((n & 1) == 0) {
        if ((a & 1) == 0) return 0;
        unsigned twos = 0;
        while ((n & 1) == 0) {
            n >>= 1;
            ++twos;
        }
        if (twos & 1u) {
            Int a8 = a % 8;
            if (a8 < 0) a8 += 8;
            if (a8 == 3 || a8 == 5) result = -result;
        }
    }
    // n odd and positive from here; standard Jacobi reciprocity loop.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            Int n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// First n+1 Bernoulli numbers, B_1 = -1/2 convention.
inline std::vector<Rat> bernoulli_row(unsigned n) {
    std::vector<Rat> b(n + 1);
    b[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        // B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k
        Rat acc = 0;
        Int c = 1; // C(m+1, 0)
        for (unsigned k = 0; k < m; ++k) {
            acc += Rat(c) * b[k];
            c = c * (m + 1 - k) / (k + 1);
        }
        b[m] = -acc / Rat(m + 1);
    }
    return b;
}

inline Rat bernoulli(unsigned n) { return bernoulli_row(n).back(); }

namespace detail {
inline Rat bernoulli_poly_with_row(unsigned n, const Rat& x,
                                   const std::vector<Rat>& b) {
    Rat acc = 0;
    Rat xp = 1;
    for (unsigned j = 0; j <= n; ++j) {
        // term k = n - j pairs B_{n-j} with x^j
        acc += Rat(binomial(n, n - j)) * b[n - j] * xp;
        xp *= x;
    }
    return acc;
}
} // namespace detail

// B_n(x) = sum_k C(n,k) B_k x^{n-k}
inline Rat bernoulli_poly(unsigned n, const Rat& x) {
    return detail::bernoulli_poly_with_row(n, x, bernoulli_row(n));
}

// Quadratic character attached to a fundamental discriminant d < 0,
// evaluated through the Kronecker symbol.  Conductor is |d|.
struct DirichletChar {
    Int d;

    Int conductor() const { return -d; }
    int operator()(const Int& a) const { return kronecker(d, a); }
    bool odd() const { return (*this)(-1) == -1; }
};

// B_{n,chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f)
inline Rat gen_bernoulli(const DirichletChar& chi, unsigned n) {
    if (n == 0) throw input_error("gen_bernoulli: index must be positive");
    const Int f = chi.conductor();
    if (f <= 0) throw input_error("gen_bernoulli: conductor must be positive");
    const std::vector<Rat> row = bernoulli_row(n);
    Rat acc = 0;
    for (Int a = 1; a <= f; ++a) {
        const int c = chi(a);
        if (c == 0) continue;
        const Rat term = detail::bernoulli_poly_with_row(n, Rat(a, f), row);
        acc += c > 0 ? term : -term;
    }
    return Rat(pow_int(f, n - 1)) * acc;
}

} // namespace unimass
