#include <catch2/catch_amalgamated.hpp>

#include "unimass/gram_json.hpp"
#include "unimass/massform.hpp"

using namespace unimass;

namespace {

GramMatrix gram2(const Int& m, const Int& a, const OEElem& b, const Int& d) {
    const OmegaBasis w = OmegaBasis::for_m(m);
    return make_gram(m, {{OEElem{a, 0}, b}, {oe_conj(b, w), OEElem{d, 0}}});
}

GramMatrix diag2(const Int& m, const Int& a, const Int& d) { return gram2(m, a, {0, 0}, d); }

} // namespace

TEST_CASE("epsilon and tau prefactors", "[massform]") {
    REQUIRE(epsilon_factor(3, 1) == Rat(1, 8));
    REQUIRE(epsilon_factor(4, 1) == Rat(1, 16));
    REQUIRE(epsilon_factor(2, 2) == Rat(-1, 8));
    REQUIRE(epsilon_factor(1, 1) == Rat(1, 2));
    REQUIRE(epsilon_factor(2, 1) == Rat(-1, 4));
    REQUIRE(epsilon_factor(6, 2) == Rat(-1, 128));

    REQUIRE(tau_factor(3, 1) == 1);
    REQUIRE(tau_factor(3, 2) == 2);
    REQUIRE(tau_factor(4, 5) == 1);
    REQUIRE(tau_factor(1, 3) == 4);

    REQUIRE_THROWS_AS(epsilon_factor(0, 1), input_error);
    REQUIRE_THROWS_AS(tau_factor(2, 0), input_error);
}

TEST_CASE("ramified local corrections", "[massform]") {
    const QuadField Qi = make_quadfield(-1);
    const QuadField E2 = make_quadfield(-2);
    const QuadField E3 = make_quadfield(-3);
    const QuadField E5 = make_quadfield(-5);

    // odd rank is always 1
    REQUIRE(kappa_factor(local_profile(Qi, identity_gram(-1, 3), 2)) == 1);
    REQUIRE(kappa_factor(local_profile(E3, identity_gram(-3, 1), 3)) == 1);

    // dyadic-unit discriminant
    REQUIRE(kappa_factor(local_profile(Qi, identity_gram(-1, 2), 2)) == 3);    // normal
    REQUIRE(kappa_factor(local_profile(Qi, hyperbolic_gram(-1, 1), 2)) == 2);  // subnormal

    // dyadic-prime discriminant
    REQUIRE(kappa_factor(local_profile(E2, diag2(-2, 1, 1), 2)) == 6);            // 2*(4-1)
    REQUIRE(kappa_factor(local_profile(E2, hyperbolic_gram(-2, 1), 2)) == 3);     // 2+1
    REQUIRE(kappa_factor(local_profile(E2, gram2(-2, 2, {1, 0}, 2), 2)) == 1);    // 2-1

    // odd ramified prime, both determinant classes
    REQUIRE(kappa_factor(local_profile(E3, diag2(-3, 1, -1), 3)) == 4);
    REQUIRE(kappa_factor(local_profile(E3, diag2(-3, 1, 1), 3)) == 2);
    REQUIRE(kappa_factor(local_profile(E5, identity_gram(-5, 2), 5)) == 6);

    REQUIRE_THROWS_AS(kappa_factor(local_profile(Qi, identity_gram(-1, 2), 3)), input_error);
}

TEST_CASE("global masses of small unimodular lattices", "[massform]") {
    const QuadField Qi = make_quadfield(-1);
    const QuadField E3 = make_quadfield(-3);

    REQUIRE(mass_lattice(Qi, identity_gram(-1, 1)) == Rat(1, 4));
    REQUIRE(mass_lattice(E3, identity_gram(-3, 1)) == Rat(1, 6));
    REQUIRE(mass_lattice(Qi, identity_gram(-1, 2)) == Rat(1, 32));

    // rank 3 over the Gaussian integers: one class whose automorphisms are
    // the 4^3 * 3! = 384 signed monomial matrices
    REQUIRE(mass_lattice(Qi, identity_gram(-1, 3)) == Rat(1, 384));
    // rank 2 Eisenstein analogue: 6^2 * 2 = 72
    REQUIRE(mass_lattice(E3, identity_gram(-3, 2)) == Rat(1, 72));

    REQUIRE(mass_lattice(Qi, hyperbolic_gram(-1, 1)) == Rat(1, 48));

    // masses stay positive across fields, ranks, and both standard shapes
    for (Int m : {Int(-1), Int(-2), Int(-3), Int(-5), Int(-7), Int(-15)}) {
        const QuadField E = make_quadfield(m);
        for (unsigned n = 1; n <= 5; ++n)
            REQUIRE(mass_lattice(E, identity_gram(m, n)) > 0);
        for (unsigned k = 1; k <= 2; ++k)
            REQUIRE(mass_lattice(E, hyperbolic_gram(m, k)) > 0);
    }

    REQUIRE_THROWS_AS(mass_lattice(Qi, gram2(-1, 2, {1, -1}, 3)), input_error); // det 4
    REQUIRE_THROWS_AS(mass_lattice(Qi, identity_gram(-3, 2)), input_error);     // wrong m
}

TEST_CASE("parahoric index factors", "[massform]") {
    const auto inert = [](unsigned t, bool basic = false) {
        return ParahoricChoice{Splitting::inert, t, basic};
    };

    // endpoints are trivial for every rank
    for (unsigned n = 1; n <= 6; ++n) {
        REQUIRE(lambda_parahoric(5, inert(0), n, n, 0) == 1);
        REQUIRE(lambda_parahoric(5, inert(n), n, n, 0) == 1);
    }
    REQUIRE(lambda_parahoric(2, inert(1), 2, 1, 1) == 1);       // (p^2-1)/(p+1)^2... = p-1
    REQUIRE(lambda_parahoric(5, inert(1), 2, 1, 1) == 4);
    REQUIRE(lambda_parahoric(3, inert(1), 3, 1, 2) == 7);       // p^2 - p + 1
    REQUIRE(lambda_parahoric(7, inert(1), 3, 1, 2) == 43);

    // split: determined by gcd(r, s)
    const ParahoricChoice sp{Splitting::split, 0, false};
    REQUIRE(lambda_parahoric(3, sp, 3, 1, 2) == 16);            // (p-1)(p^2-1)
    REQUIRE(lambda_parahoric(3, sp, 4, 2, 2) == 52);            // (p-1)(p^3-1)
    REQUIRE(lambda_parahoric(3, sp, 4, 4, 0) == 1);
    REQUIRE(lambda_parahoric(5, sp, 2, 1, 1) == 4);             // p-1

    // symmetry and the two-term recurrence
    for (const Int p : {Int(3), Int(5), Int(7)}) {
        for (unsigned n = 1; n <= 8; ++n)
            for (unsigned t = 0; t <= n; ++t) {
                const Int lam = lambda_parahoric(p, inert(t), n, n, 0);
                REQUIRE(lam > 0);
                REQUIRE(lam == lambda_parahoric(p, inert(n - t), n, n, 0));
                if (t >= 1 && t <= n - 1 && n >= 2) {
                    const Int a = lambda_parahoric(p, inert(t), n - 1, n - 1, 0);
                    const Int b = lambda_parahoric(p, inert(t - 1), n - 1, n - 1, 0);
                    const Int expect =
                        pow_int(p, t) * a + ((n - t) % 2 == 0 ? b : -b);
                    REQUIRE(lam == expect);
                }
            }
    }

    // the vertex parity tie-in
    REQUIRE(lambda_parahoric(3, inert(1, true), 3, 2, 1) == 7);
    REQUIRE_THROWS_AS(lambda_parahoric(3, inert(1, true), 3, 1, 2), input_error);
    REQUIRE(lambda_parahoric(3, inert(2, true), 3, 1, 2) == 7); // t = 2 matches s = 2

    REQUIRE_THROWS_AS(lambda_parahoric(3, inert(4), 3, 3, 0), input_error);
    REQUIRE_THROWS_AS(lambda_parahoric(4, inert(0), 2, 2, 0), input_error);
    REQUIRE_THROWS_AS(lambda_parahoric(3, {Splitting::ramified, 0, false}, 2, 1, 1),
                      input_error);
}

TEST_CASE("inner-form masses", "[massform]") {
    const QuadField Qi = make_quadfield(-1);
    const QuadField E3 = make_quadfield(-3);

    REQUIRE(mass_inner(Qi, identity_gram(-1, 1), 3, {Splitting::inert, 0, false}, 1, 0) ==
            Rat(1, 4));
    REQUIRE(mass_inner(E3, identity_gram(-3, 2), 5, {Splitting::inert, 1, false}, 1, 1) ==
            Rat(1, 18));

    // factorization through the similitude mass, over a small grid
    for (Int m : {Int(-1), Int(-3), Int(-7), Int(-5)}) {
        const QuadField E = make_quadfield(m);
        for (unsigned n = 1; n <= 4; ++n) {
            const GramMatrix g = identity_gram(m, n);
            for (const Int p : {Int(3), Int(5)}) {
                const LocalBehavior lb = splitting_behavior(E, p);
                if (lb.how == Splitting::ramified) continue;
                for (unsigned t = 0; t <= n; ++t) {
                    ParahoricChoice c{lb.how, t, false};
                    if (lb.how == Splitting::split && t > 0) break;
                    const Rat lhs = mass_inner(E, g, p, c, n, 0);
                    const Rat rhs = Rat(tau_factor(n, E.w)) * mass_lattice(E, g) *
                                    lambda_parahoric(p, c, n, n, 0);
                    REQUIRE(lhs == rhs);
                }
            }
        }
    }

    REQUIRE_THROWS_AS(
        mass_inner(Qi, identity_gram(-1, 1), 2, {Splitting::inert, 0, false}, 1, 0),
        input_error);
    REQUIRE_THROWS_AS(
        mass_inner(Qi, identity_gram(-1, 1), 3, {Splitting::split, 0, false}, 1, 0),
        input_error); // 3 is inert in Q(i)
    const QuadField E5 = make_quadfield(-5);
    REQUIRE_THROWS_AS(
        mass_inner(E5, identity_gram(-5, 2), 5, {Splitting::inert, 0, false}, 1, 1),
        input_error); // ramified
}

TEST_CASE("level indices", "[massform]") {
    const QuadField Qi = make_quadfield(-1);
    REQUIRE(level_index(Qi, 1, 3) == 8);
    REQUIRE(level_index(Qi, 1, 5) == 16);
    REQUIRE(level_index(Qi, 1, 9) == 72);
    REQUIRE(level_index(Qi, 1, 15) == 128); // multiplicative in the level

    // rank 2 at an inert prime: (l-1) * |U_2|
    REQUIRE(level_index(Qi, 2, 3) == 2 * group_order({GroupKind::unitary, 2}, 3));

    REQUIRE_THROWS_AS(level_index(Qi, 1, 2), input_error);
    REQUIRE_THROWS_AS(level_index(Qi, 1, 6), unsupported_error);  // shares 2 with d
    REQUIRE_THROWS_AS(level_index(make_quadfield(-3), 2, 9), unsupported_error);
}

TEST_CASE("class counts of the inner form", "[massform]") {
    const QuadField Qi = make_quadfield(-1);
    const ParahoricChoice t0{Splitting::inert, 0, false};
    const ParahoricChoice sp{Splitting::split, 0, false};

    REQUIRE(class_count_inner(Qi, identity_gram(-1, 1), 3, t0, 0, 1, 5) == 4);
    REQUIRE(class_count_inner(Qi, identity_gram(-1, 1), 7, t0, 0, 1, 3) == 2);

    // integrality and positivity over a mixed grid
    for (Int m : {Int(-1), Int(-3), Int(-7)}) {
        const QuadField E = make_quadfield(m);
        for (unsigned n = 1; n <= 3; ++n)
            for (const Int p : {Int(3), Int(5), Int(7)}) {
                const LocalBehavior lb = splitting_behavior(E, p);
                if (lb.how == Splitting::ramified) continue;
                const ParahoricChoice c{lb.how, 0, false};
                for (const Int N : {Int(4), Int(5), Int(9)}) {
                    if (gcd(N, p) != 1 || gcd(N, E.d) != 1) continue;
                    REQUIRE(class_count_inner(E, identity_gram(m, n), p, c, n, 0, N) > 0);
                }
            }
    }

    REQUIRE_THROWS_AS(class_count_inner(Qi, identity_gram(-1, 1), 3, t0, 0, 1, 2),
                      input_error);
    REQUIRE_THROWS_AS(class_count_inner(Qi, identity_gram(-1, 1), 3, t0, 0, 1, 9),
                      input_error); // level meets p
    REQUIRE_THROWS_AS(class_count_inner(Qi, identity_gram(-1, 1), 5, sp, 0, 1, 4),
                      unsupported_error); // level meets the discriminant
}
