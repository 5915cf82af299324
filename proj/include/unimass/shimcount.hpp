#pragma once

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "unimass/errors.hpp"
#include "unimass/fingroups.hpp"
#include "unimass/hermlocal.hpp"
#include "unimass/massform.hpp"
#include "unimass/quadfield.hpp"
#include "unimass/snf.hpp"

namespace unimass {

// Everything the component and point counts need: the field, a unimodular
// lattice, a signature, a good odd prime, and a principal level.
struct ShimuraInput {
    QuadField field;
    GramMatrix gram;
    unsigned r = 0, s = 0;
    Int p;
    Int N;

    unsigned n() const { return gram.n; }
    LocalBehavior behavior() const { return splitting_behavior(field, p); }
};

inline ShimuraInput make_shimura_input(const QuadField& E, const GramMatrix& g, unsigned r,
                                       unsigned s, const Int& p, const Int& N) {
    if (g.m != E.m) throw input_error("shimura input: matrix and field disagree on m");
    if (!is_unimodular(g)) throw input_error("shimura input: lattice is not unimodular");
    if (r + s != g.n || g.n == 0) throw input_error("shimura input: signature must sum to the rank");
    if (p == 2) throw input_error("shimura input: p must be odd");
    if (splitting_behavior(E, p).how == Splitting::ramified)
        throw input_error("shimura input: p must be unramified");
    if (N < 3) throw input_error("shimura input: level must be at least 3");
    if (gcd(N, p) != 1) throw input_error("shimura input: level must be prime to p");
    if (gcd(N, E.d) != 1)
        throw unsupported_error("shimura input: level primes dividing the discriminant");
    return ShimuraInput{E, g, r, s, p, N};
}

inline Int level_index(const ShimuraInput& in) { return level_index(in.field, in.n(), in.N); }

// The two factors counting irreducible components: the parahoric-index part
// and the orbit multiplicity.
struct BasicFactors {
    Int lambda;
    Int rho;
};

inline BasicFactors lambda_rho_bas(const Int& p, Splitting how, unsigned r, unsigned s) {
    const unsigned n = r + s;
    if (n == 0) throw input_error("lambda_rho_bas: rank must be positive");
    if (!detail::is_prime(p)) throw input_error("lambda_rho_bas: p must be prime");
    switch (how) {
    case Splitting::inert:
        if (r % 2 == 1 && s % 2 == 1) {
            const Int lam = require_integer(Rat(pow_int(p, n) - 1, p + 1),
                                            "lambda_rho_bas: inert ratio must be integral");
            return {lam, binomial(n / 2 - 1, (r - 1) / 2)};
        }
        return {1, binomial(n / 2, r / 2)};
    case Splitting::split:
        return {lambda_parahoric(p, {Splitting::split, 0, false}, n, r, s), 1};
    default:
        throw input_error("lambda_rho_bas: behavior must be inert or split");
    }
}

// Index factor counting the zero-dimensional stratum.
inline Int lambda_e(const Int& p, Splitting how, unsigned r, unsigned s) {
    const unsigned n = r + s;
    if (n == 0) throw input_error("lambda_e: rank must be positive");
    switch (how) {
    case Splitting::inert:
        return lambda_parahoric(p, {Splitting::inert, s, false}, n, r, s);
    case Splitting::split:
        return lambda_rho_bas(p, how, r, s).lambda;
    default:
        throw input_error("lambda_e: behavior must be inert or split");
    }
}

struct CountReport {
    Int level_idx;
    Int lambda_bas, rho_bas, lambda_e;
    Int irr_basic;  // irreducible components of the basic locus
    Int card_Me;    // points of the zero-dimensional stratum
    bool superbasic = false;
    std::optional<Int> pi0_sh;      // components of the ambient space, full level
    std::optional<Int> pi0_basic;   // components of the basic locus, full level
    std::optional<Int> per_component_irr, per_component_Me;
};

// common prefactor: index * epsilon * L-values * ramified corrections
inline Rat count_prefactor(const ShimuraInput& in) {
    Rat acc = Rat(level_index(in)) * epsilon_factor(in.n(), in.field.w) *
              l_product(in.field, in.n());
    for (const auto& [ell, kap] : kappa_all(in.field, in.gram)) {
        (void)ell;
        acc *= kap;
    }
    return acc;
}

enum class LevelKind { full, principal };

// Connected components of the ambient space.  At full level this is class
// number data; at principal level the norm-index of the level group is not
// determined by (E, n, N) alone and must be supplied.
inline Int pi0_shimura(const ShimuraInput& in, LevelKind level,
                       std::optional<Int> index_override = std::nullopt) {
    if (in.r == 0 || in.s == 0)
        throw input_error("pi0_shimura: definite signature has no connected "
                          "component formula; use the basic counts directly");
    const QuadField& E = in.field;
    const unsigned n = in.n();
    if (level == LevelKind::full) {
        if (n % 2 == 1) return E.h;
        bool hyperbolic_two = false;
        if (E.d % 8 == -4 || E.d % 8 == 4) {
            const LocalProfile prof = local_profile(E, in.gram, 2);
            hyperbolic_two = prof.norm_type == NormType::subnormal &&
                             prof.det_matches_sign.value_or(false);
        }
        const Rat base = Rat(E.h, pow_int(2, E.w - 1));
        if (hyperbolic_two && E.m != -1)
            return require_integer(2 * base, "pi0_shimura: count must be an integer");
        return require_integer(base, "pi0_shimura: count must be an integer");
    }
    if (!index_override.has_value())
        throw input_error("pi0_shimura: principal level needs the norm-index of the "
                          "level group (index_override)");
    const Rat idx = Rat(*index_override);
    const Rat res = n % 2 == 1 ? idx * Rat(E.h, E.mu)
                               : idx * Rat(E.h, pow_int(2, E.w - 1));
    if (denominator(res) != 1 || res <= 0)
        throw input_error("pi0_shimura: index_override does not give a positive integer");
    return numerator(res);
}

inline CountReport count_basic(const ShimuraInput& in) {
    const Splitting how = in.behavior().how;
    CountReport rep;
    rep.level_idx = level_index(in);
    const Rat pre = count_prefactor(in);
    const BasicFactors bf = lambda_rho_bas(in.p, how, in.r, in.s);
    rep.lambda_bas = bf.lambda;
    rep.rho_bas = bf.rho;
    rep.lambda_e = lambda_e(in.p, how, in.r, in.s);
    rep.irr_basic = require_integer(pre * bf.lambda * bf.rho,
                                    "count_basic: component count must be an integer");
    rep.card_Me = require_integer(pre * rep.lambda_e,
                                  "count_basic: point count must be an integer");
    if (rep.irr_basic <= 0 || rep.card_Me <= 0)
        throw consistency_error("count_basic: counts must be positive");
    rep.superbasic = (how == Splitting::inert && in.r == 1 && in.s == 1) ||
                     (how == Splitting::split && std::gcd(in.r, in.s) == 1);
    if (in.r > 0 && in.s > 0) {
        rep.pi0_sh = pi0_shimura(in, LevelKind::full);
        rep.pi0_basic = rep.superbasic
                            ? require_integer(Rat(rep.irr_basic, rep.rho_bas),
                                              "count_basic: component ratio must be exact")
                            : *rep.pi0_sh;
    }
    if (rep.superbasic) {
        rep.per_component_irr = rep.rho_bas;
        rep.per_component_Me = require_integer(Rat(rep.lambda_e, rep.lambda_bas),
                                               "count_basic: stratum ratio must be exact");
    }
    return rep;
}

inline Int pi0_basic(const ShimuraInput& in, const Int& pi0_sh) {
    if (in.r == 0 || in.s == 0) throw input_error("pi0_basic: need an indefinite signature");
    const CountReport rep = count_basic(in);
    if (!rep.superbasic) return pi0_sh;
    return require_integer(Rat(rep.irr_basic, rep.rho_bas),
                           "pi0_basic: component ratio must be exact");
}

inline std::pair<Int, Int> per_component_counts(const CountReport& rep) {
    if (!rep.superbasic)
        throw input_error("per_component_counts: components are equidistributed only "
                          "over a finite set, which needs the compact case");
    return {*rep.per_component_irr, *rep.per_component_Me};
}

// Closure of the codimension-indexed stratum for signature (1, n-1) at an
// inert prime; odd t only, t = n giving the whole basic locus.
inline Int count_eo_closure(const ShimuraInput& in, unsigned t) {
    if (in.r != 1) throw input_error("count_eo_closure: signature must be (1, n-1)");
    if (in.behavior().how != Splitting::inert)
        throw input_error("count_eo_closure: p must be inert");
    if (t % 2 == 0 || t < 1 || t > in.n())
        throw input_error("count_eo_closure: stratum index must be odd and within the rank");
    const Int lam = lambda_parahoric(in.p, {Splitting::inert, t, false}, in.n(), in.r, in.s);
    const Int cnt = require_integer(count_prefactor(in) * lam,
                                    "count_eo_closure: count must be an integer");
    if (cnt <= 0) throw consistency_error("count_eo_closure: count must be positive");
    return cnt;
}

// Orbit count of the affine Deligne-Lusztig set, closed form.
inline Int adlv_orbit_count(Splitting how, unsigned n, unsigned r) {
    if (r > n || n == 0) throw input_error("adlv_orbit_count: need 0 <= r <= n >= 1");
    switch (how) {
    case Splitting::split:
        return 1;
    case Splitting::inert:
        if (n % 2 == 0 && r % 2 == 1) return binomial(n / 2 - 1, (r - 1) / 2);
        return binomial(n / 2, r / 2);
    default:
        throw input_error("adlv_orbit_count: behavior must be inert or split");
    }
}

// The same count from first principles: walk the weight orbit and compare
// images in the twisted-coinvariant lattice.
inline Int adlv_orbit_enumerate(unsigned n, unsigned r) {
    if (n == 0 || r > n) throw input_error("adlv_orbit_enumerate: need 0 <= r <= n >= 1");
    if (n > 12) throw unsupported_error("adlv_orbit_enumerate: rank above enumeration limit 12");
    const size_t dim = n + 1;

    // twist on the cocharacter basis e_0..e_n: e_0 -> sum of all, e_i -> -e_{n-i+1}
    std::vector<std::vector<Int>> sigma(dim, std::vector<Int>(dim, 0));
    for (size_t row = 0; row < dim; ++row) sigma[row][0] = 1;
    for (size_t i = 1; i <= n; ++i) sigma[n - i + 1][i] = -1;
    std::vector<std::vector<Int>> one_minus(dim, std::vector<Int>(dim, 0));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) one_minus[i][j] = (i == j ? 1 : 0) - sigma[i][j];
    const SmithResult snf = smith_normal_form(one_minus);

    // reference class: e_0, shifted by e_{n/2+1} when n is even and r odd
    std::vector<Int> target(dim, 0);
    target[0] = 1;
    if (n % 2 == 0 && r % 2 == 1) target[n / 2 + 1] += 1;

    Int count = 0;
    std::vector<unsigned> pick(r);
    for (unsigned i = 0; i < r; ++i) pick[i] = i + 1;
    for (;;) {
        std::vector<Int> x(dim, 0);
        x[0] = 1;
        for (unsigned i : pick) x[i] += 1;
        for (size_t i = 0; i < dim; ++i) x[i] -= target[i];
        if (in_column_lattice(snf, x)) ++count;
        if (r == 0) break;
        // next r-subset of {1..n} in lexicographic order
        int idx = static_cast<int>(r) - 1;
        while (idx >= 0 && pick[idx] == n - (r - 1 - idx)) --idx;
        if (idx < 0) break;
        ++pick[idx];
        for (unsigned j = idx + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
    return count;
}

// Point count of the degree-(q+1) hypersurface in P^n over the quadratic
// extension, closed form.
inline Int fermat_count(const Int& q, unsigned n) {
    if (n == 0) throw input_error("fermat_count: dimension must be positive");
    prime_power_decompose(q); // validates
    const Int a = pow_int(q, n + 1) + (n % 2 == 0 ? 1 : -1);
    const Int b = pow_int(q, n) + (n % 2 == 0 ? -1 : 1);
    return require_integer(Rat(a * b, q * q - 1), "fermat_count: division must be exact");
}

inline Int fermat_brute_force(const Int& q, unsigned n, uint64_t cap = 100000000) {
    if (n == 0) throw input_error("fermat_brute_force: dimension must be positive");
    const auto [p, k] = prime_power_decompose(q);
    Int size_est = 1;
    for (unsigned i = 0; i <= n; ++i) size_est *= q * q;
    if (size_est > cap)
        throw unsupported_error("fermat_brute_force: affine space above the budget of " +
                                std::to_string(cap) + " points");
    const SmallField F(p.convert_to<unsigned>(), 2 * k);
    const unsigned qq = F.q();
    const unsigned e = q.convert_to<unsigned>() + 1;

    std::vector<unsigned> power(qq);
    for (unsigned x = 0; x < qq; ++x) power[x] = F.pow(x, e);

    Int count = 0;
    // leading coordinate 1, earlier ones 0, later ones free
    for (unsigned lead = 0; lead <= n; ++lead) {
        const unsigned free = n - lead;
        std::vector<unsigned> digits(free, 0);
        for (;;) {
            unsigned acc = power[1];
            for (unsigned d : digits) acc = F.add(acc, power[d]);
            if (acc == 0) ++count;
            unsigned pos = 0;
            while (pos < free && ++digits[pos] == qq) digits[pos++] = 0;
            if (pos == free) break;
        }
        if (free == 0) break;
    }
    return count;
}

// Upper bound for the number of Hecke eigensystems at the given level.
inline Int hecke_bound(const ShimuraInput& in) {
    const CountReport rep = count_basic(in);
    const Int p = in.p;
    const unsigned n = in.n(), r = in.r, s = in.s;
    Int nu;
    if (in.behavior().how == Splitting::inert) {
        if (r != 0 && s != 0)
            nu = pow_int(p, (r * (r - 1) + s * (s - 1)) / 2) * pow_int(p, n - 2) * (p - 1) *
                 (p + 1) * (p + 1);
        else
            nu = pow_int(p, n * (n - 1) / 2) * pow_int(p, n - 1) * (p - 1) * (p + 1);
    } else {
        const unsigned m = std::gcd(r, s);
        nu = pow_int(p, n * (m - 1) / 2) * pow_int(p, n - n / m) * (pow_int(p, n / m) - 1);
    }
    return rep.card_Me * nu;
}

} // namespace unimass
