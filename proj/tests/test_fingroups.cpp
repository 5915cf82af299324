#include <catch2/catch_amalgamated.hpp>

#include "unimass/fingroups.hpp"

using namespace unimass;

namespace {

// Dense integer polynomials in q, for checking order identities
// coefficient by coefficient instead of at sample points.
using Poly = std::vector<Int>;

Poly pmul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly padd(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly monomial(unsigned deg, const Int& c = 1) {
    Poly r(deg + 1, 0);
    r[deg] = c;
    return r;
}

// q^i + s with s = +-1
Poly qpow_plus(unsigned i, int s) {
    Poly r = monomial(i);
    r[0] += s;
    return r;
}

Poly order_poly(GroupKind kind, unsigned m) {
    Poly r;
    switch (kind) {
    case GroupKind::orthogonal_plus: r = pmul(monomial(m * (m - 1), 2), qpow_plus(m, -1)); break;
    case GroupKind::orthogonal_minus: r = pmul(monomial(m * (m - 1), 2), qpow_plus(m, +1)); break;
    default: FAIL("unused kind"); return {};
    }
    for (unsigned i = 1; i < m; ++i) r = pmul(r, qpow_plus(2 * i, -1));
    return r;
}

} // namespace

TEST_CASE("group dimensions", "[fingroups]") {
    CHECK(group_dim({GroupKind::general_linear, 3}) == 9);
    CHECK(group_dim({GroupKind::unitary, 2}) == 4);
    CHECK(group_dim({GroupKind::orthogonal_odd, 2}) == 10);
    CHECK(group_dim({GroupKind::special_orthogonal_odd, 2}) == 10);
    CHECK(group_dim({GroupKind::orthogonal_plus, 2}) == 6);
    CHECK(group_dim({GroupKind::orthogonal_minus, 3}) == 15);
    CHECK(group_dim({GroupKind::symplectic, 2}) == 10);
    CHECK_THROWS_AS(group_dim({GroupKind::unitary, 0}), input_error);
}

TEST_CASE("closed-form orders at known points", "[fingroups]") {
    CHECK(group_order({GroupKind::general_linear, 1}, 5) == 4);
    CHECK(group_order({GroupKind::general_linear, 2}, 2) == 6);
    CHECK(group_order({GroupKind::general_linear, 2}, 3) == 48);
    CHECK(group_order({GroupKind::unitary, 1}, 2) == 3);
    CHECK(group_order({GroupKind::unitary, 1}, 3) == 4);
    CHECK(group_order({GroupKind::unitary, 2}, 2) == 18);
    CHECK(group_order({GroupKind::unitary, 2}, 3) == 96);
    CHECK(group_order({GroupKind::unitary, 3}, 2) == 648);
    CHECK(group_order({GroupKind::symplectic, 1}, 3) == 24);
    CHECK(group_order({GroupKind::symplectic, 2}, 2) == 720);
    CHECK(group_order({GroupKind::orthogonal_odd, 1}, 3) == 48);
    CHECK(group_order({GroupKind::special_orthogonal_odd, 1}, 3) == 24);
    CHECK(group_order({GroupKind::orthogonal_odd, 1}, 2) == 6);
    CHECK(group_order({GroupKind::orthogonal_odd, 2}, 2) == 720);
    CHECK(group_order({GroupKind::orthogonal_odd, 2}, 3) == 103680);
    CHECK(group_order({GroupKind::orthogonal_plus, 1}, 2) == 2);
    CHECK(group_order({GroupKind::orthogonal_minus, 1}, 2) == 6);
    CHECK(group_order({GroupKind::orthogonal_plus, 1}, 3) == 4);
    CHECK(group_order({GroupKind::orthogonal_minus, 1}, 3) == 8);
    CHECK(group_order({GroupKind::orthogonal_plus, 2}, 2) == 72);
    CHECK(group_order({GroupKind::orthogonal_minus, 2}, 2) == 120);
    // prime powers are fine, non prime powers are not
    CHECK(group_order({GroupKind::general_linear, 1}, 4) == 3);
    CHECK_THROWS_AS(group_order({GroupKind::general_linear, 1}, 6), input_error);
    CHECK_THROWS_AS(group_order({GroupKind::general_linear, 1}, 1), input_error);
    CHECK_THROWS_AS(group_order({GroupKind::unitary, 0}, 2), input_error);
}

TEST_CASE("entry field sanity", "[fingroups]") {
    const SmallField f9(3, 2);
    CHECK(f9.q() == 9);
    CHECK(f9.modpoly() == std::vector<unsigned>{1, 0, 1}); // t^2 + 1
    const SmallField f4(2, 2);
    CHECK(f4.modpoly() == std::vector<unsigned>{1, 1, 1}); // t^2 + t + 1
    for (unsigned a = 0; a < 9; ++a) {
        for (unsigned b = 0; b < 9; ++b) {
            CHECK(f9.add(a, b) == f9.add(b, a));
            CHECK(f9.mul(a, b) == f9.mul(b, a));
            if (b) CHECK(f9.mul(f9.mul(a, b), f9.inv(b)) == a);
            for (unsigned c = 0; c < 9; ++c) {
                CHECK(f9.mul(a, f9.add(b, c)) == f9.add(f9.mul(a, b), f9.mul(a, c)));
                CHECK(f9.mul(f9.mul(a, b), c) == f9.mul(a, f9.mul(b, c)));
            }
        }
    }
    // x -> x^3 is additive on F_9 (the conjugation used by the unitary kind)
    for (unsigned a = 0; a < 9; ++a)
        for (unsigned b = 0; b < 9; ++b)
            CHECK(f9.pow(f9.add(a, b), 3) == f9.add(f9.pow(a, 3), f9.pow(b, 3)));
    CHECK_THROWS_AS(SmallField(4, 1), input_error);
    CHECK_THROWS_AS(f9.inv(0), input_error);
}

TEST_CASE("enumeration oracle agrees with the closed forms", "[fingroups][oracle]") {
    const GroupKind kinds[] = {
        GroupKind::general_linear,  GroupKind::unitary,
        GroupKind::orthogonal_odd,  GroupKind::orthogonal_plus,
        GroupKind::orthogonal_minus, GroupKind::symplectic,
        GroupKind::special_orthogonal_odd,
    };
    for (const GroupKind kind : kinds)
        for (unsigned param = 1; param <= 2; ++param)
            for (unsigned q : {2u, 3u}) {
                const ClassicalGroup g{kind, param};
                INFO("kind " << static_cast<int>(kind) << " param " << param << " q " << q);
                CHECK(brute_force_order(g, q) == group_order(g, q));
            }
}

TEST_CASE("enumeration budget is enforced", "[fingroups]") {
    CHECK_THROWS_AS(brute_force_order({GroupKind::general_linear, 2}, 3, 5),
                    unsupported_error);
    CHECK_THROWS_AS(brute_force_order({GroupKind::orthogonal_minus, 1}, 4),
                    unsupported_error);
}

TEST_CASE("plus and minus orthogonal orders sum to twice the generic count", "[fingroups]") {
    // |O+| + |O-| = 4 q^{m(m-1)} q^m prod_{i<m} (q^{2i} - 1), as polynomials in q.
    for (unsigned m = 1; m <= 5; ++m) {
        Poly lhs = padd(order_poly(GroupKind::orthogonal_plus, m),
                        order_poly(GroupKind::orthogonal_minus, m));
        Poly rhs = monomial(m * (m - 1), 4);
        rhs = pmul(rhs, monomial(m));
        for (unsigned i = 1; i < m; ++i) rhs = pmul(rhs, qpow_plus(2 * i, -1));
        lhs.resize(std::max(lhs.size(), rhs.size()), 0);
        rhs.resize(lhs.size(), 0);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("unitary orders divide as parabolic factorizations require", "[fingroups]") {
    for (unsigned q : {2u, 3u, 5u}) {
        for (unsigned n = 1; n <= 10; ++n) {
            const Int whole = group_order({GroupKind::unitary, n}, q);
            for (unsigned t = 0; t <= n; ++t) {
                const Int a = t == 0 ? Int(1) : group_order({GroupKind::unitary, t}, q);
                const Int b =
                    t == n ? Int(1) : group_order({GroupKind::unitary, n - t}, q);
                CHECK(whole % (a * b) == 0);
            }
        }
    }
}
