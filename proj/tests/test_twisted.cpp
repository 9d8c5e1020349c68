#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nov/cramer.hpp"
#include "nov/twisted.hpp"

#include <random>

using namespace nov;

namespace {

TwistedGroup flip_group() {
    // m = 1, Phi = (-1): theta h theta^{-1} = h^{-1}
    IntMatrix phi(1, 1);
    phi << -1;
    return TwistedGroup(phi);
}

TwistedGroup trivial_group() { return TwistedGroup(IntMatrix(0, 0)); }

GroupAlgebraElt mono(std::initializer_list<long> h, long c) {
    return GroupAlgebraElt::monomial(HVec(h), Int(c));
}

GroupAlgebraElt random_ga(std::mt19937& rng, int m, int nterms) {
    std::uniform_int_distribution<long> expo(-2, 2), coef(-3, 3);
    GroupAlgebraElt e;
    for (int i = 0; i < nterms; ++i) {
        HVec h(static_cast<size_t>(m));
        for (auto& v : h) v = expo(rng);
        e.add_term(h, Int(coef(rng)));
    }
    return e;
}

}  // namespace

TEST_CASE("GL(m,Z) validation and exact inverse") {
    IntMatrix good(2, 2);
    good << 2, 1, 1, 1;  // det 1
    TwistedGroup G(good);
    CHECK(G.twist(G.twist({3, -5}, 1), -1) == HVec{3, -5});
    CHECK(G.twist({1, 0}, 1) == HVec{2, 1});

    IntMatrix bad(2, 2);
    bad << 2, 0, 0, 1;  // det 2
    CHECK_THROWS_AS(TwistedGroup{bad}, std::invalid_argument);
}

TEST_CASE("group law respects the twisting relation") {
    TwistedGroup G = flip_group();
    GroupElt theta{{0}, 1}, h{{1}, 0};
    // theta h = Phi(h) theta = h^{-1} theta
    GroupElt lhs = group_mul(G, theta, h);
    CHECK(lhs.h == HVec{-1});
    CHECK(lhs.theta_pow == 1);
    // inverses and associativity on sampled triples
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(-3, 3);
    for (int it = 0; it < 50; ++it) {
        GroupElt a{{d(rng)}, d(rng)}, b{{d(rng)}, d(rng)}, c{{d(rng)}, d(rng)};
        GroupElt ai = group_inv(G, a);
        GroupElt e = group_mul(G, a, ai);
        CHECK(e.h == HVec{0});
        CHECK(e.theta_pow == 0);
        GroupElt l = group_mul(G, group_mul(G, a, b), c);
        GroupElt r = group_mul(G, a, group_mul(G, b, c));
        CHECK(l.h == r.h);
        CHECK(l.theta_pow == r.theta_pow);
    }
}

TEST_CASE("group ring arithmetic") {
    GroupAlgebraElt a = ga_add(mono({1}, 2), mono({0}, -1));
    GroupAlgebraElt b = ga_add(mono({-1}, 1), mono({0}, 1));
    // (2h - 1)(h^{-1} + 1) = 2 + 2h - h^{-1} - 1 = 1 + 2h - h^{-1}
    GroupAlgebraElt p = ga_mul(a, b);
    GroupAlgebraElt expect = ga_add(ga_add(mono({0}, 1), mono({1}, 2)), mono({-1}, -1));
    CHECK(p == expect);
    CHECK(l1_norm(p) == 4);
    CHECK(ga_sub(p, p).is_zero());
}

TEST_CASE("twisted product: (h theta)^2 = theta^2 under the flip") {
    TwistedGroup G = flip_group();
    NovikovElt htheta(1, {mono({1}, 1)}, 8);
    NovikovElt sq = nov_mul(G, htheta, htheta);
    CHECK(sq.coeff(2) == mono({0}, 1));
    NovikovElt cube = nov_mul(G, sq, htheta);
    CHECK(cube.coeff(3) == mono({1}, 1));  // theta^2 h theta = Phi^2(h) theta^3
}

TEST_CASE("conjugation by theta agrees with multiplication by theta on both sides") {
    TwistedGroup G = flip_group();
    std::mt19937 rng(11);
    std::vector<GroupAlgebraElt> lv;
    for (int i = 0; i < 5; ++i) lv.push_back(random_ga(rng, 1, 3));
    NovikovElt x(-1, lv, 3);
    GroupElt theta{{0}, 1};
    NovikovElt lhs = conj_by_theta(G, x);
    NovikovElt rhs = nov_mul_group(G, nov_mul_group(G, theta, x), group_inv(G, theta));
    CHECK(lhs == rhs);
}

TEST_CASE("truncation by level and partial norms") {
    TwistedGroup G = flip_group();
    // x = h theta^{-1} + 2 theta + 3h theta^2   (levels 1, -1, -2)
    NovikovElt x(-1, {mono({1}, 1), {}, mono({0}, 2), mono({1}, 3)}, 4);
    CHECK(level_partial_norm(x, -2) == 6);
    CHECK(level_partial_norm(x, -1) == 3);
    CHECK(level_partial_norm(x, 0) == 1);
    CHECK(level_partial_norm(x, 2) == 0);
    NovikovElt t = truncate_at_level(x, -1);
    CHECK(t.coeff(1) == mono({0}, 2));
    CHECK(t.coeff(-1) == mono({1}, 1));
    CHECK(t.coeff(2).is_zero());
}

TEST_CASE("m = 0 completion is Z((t)) on the nose") {
    TwistedGroup G = trivial_group();
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> coef(-4, 4);
    for (int it = 0; it < 20; ++it) {
        std::vector<Int> ca(6), cb(6);
        for (auto& v : ca) v = coef(rng);
        for (auto& v : cb) v = coef(rng);
        LaurentSeries sa(-2, ca, 8), sb(0, cb, 8);
        NovikovElt na = from_laurent(sa), nb = from_laurent(sb);
        CHECK(to_laurent(nov_mul(G, na, nb)) == series_mul(sa, sb));
        CHECK(to_laurent(nov_add(na, nb)) == series_add(sa, sb));
    }
}

TEST_CASE("type-(L) expansion: hand-computed flip example") {
    // sum_s (h theta)^s = 1 + h theta + theta^2 + h theta^3 + ...
    TwistedGroup G = flip_group();
    TypeLElement e;
    e.g1 = {{0}, 0};
    e.g2 = {{0}, 0};
    e.Y = {mono({0}, 1)};
    e.A = {{mono({1}, 1)}};
    e.X = {mono({0}, 1)};
    NovikovElt x = expand_typeL(G, e, 9);
    for (int s = 0; s <= 9; ++s) {
        if (s % 2 == 0)
            CHECK(x.coeff(s) == mono({0}, 1));
        else
            CHECK(x.coeff(s) == mono({1}, 1));
    }
}

TEST_CASE("type-(L) expansion with m = 0 matches the closed form") {
    TwistedGroup G = trivial_group();
    IntMatrix A(2, 2);
    A << 1, 1, 1, 0;
    IntVector p(2);
    p << 1, 0;
    IntCovector lam(2);
    lam << 1, 0;

    TypeLElement e;
    e.g1 = {{}, 0};
    e.g2 = {{}, 0};
    e.Y = {GroupAlgebraElt::constant(0, 1), GroupAlgebraElt::constant(0, 0)};
    e.A = {{GroupAlgebraElt::constant(0, 1), GroupAlgebraElt::constant(0, 1)},
           {GroupAlgebraElt::constant(0, 1), GroupAlgebraElt::constant(0, 0)}};
    e.X = {GroupAlgebraElt::constant(0, 1), GroupAlgebraElt::constant(0, 0)};

    LaurentSeries via_group = to_laurent(expand_typeL(G, e, 30));
    LaurentSeries via_cramer = expand_rational(cramer_series(A, p, lam).fn, 30);
    CHECK(via_group == via_cramer);
}

TEST_CASE("g1/g2 framing of a type-(L) element") {
    TwistedGroup G = flip_group();
    TypeLElement e;
    e.g1 = {{1}, 1};   // h theta
    e.g2 = {{0}, -1};  // theta^{-1}
    e.Y = {mono({0}, 1)};
    e.A = {{mono({1}, 1)}};
    e.X = {mono({0}, 1)};
    // g1 (c_s theta^s) g2 = h Phi(c_s) Phi^{1+s}(1) theta^{s}; with
    // c_s = h^{s mod 2}: term s even -> h theta^s, s odd -> h h^{-1} = 1
    NovikovElt x = expand_typeL(G, e, 6);
    for (int s = 0; s <= 6; ++s) {
        if (s % 2 == 0)
            CHECK(x.coeff(s) == mono({1}, 1));
        else
            CHECK(x.coeff(s) == mono({0}, 1));
    }
}

TEST_CASE("exponential growth certificates") {
    TwistedGroup G = flip_group();
    // doubling series: sum 2^s h^s theta^s has partial norms 2^{k+1} - 1
    std::vector<GroupAlgebraElt> lv;
    Int p = 1;
    for (int s = 0; s <= 30; ++s) {
        lv.push_back(mono({s}, p.get_si()));
        p *= 2;
    }
    NovikovElt x(0, lv, 30);
    // |x_[c]| = 2^{-c+1} - 1 <= 2 e^{-c ln 2}; ln 2 < 0.6932
    CHECK(check_exponential_growth(x, Rat(2), Rat(6932, 10000)));
    // too small a base fails
    CHECK(!check_exponential_growth(x, Rat(2), Rat(5, 10)));
}

namespace {

TypeLElement random_typeL(std::mt19937& rng, int m, int n) {
    std::uniform_int_distribution<long> tp(-2, 2);
    TypeLElement e;
    auto rand_h = [&] {
        HVec h(static_cast<size_t>(m));
        for (auto& v : h) v = tp(rng);
        return h;
    };
    e.g1 = {rand_h(), tp(rng)};
    e.g2 = {rand_h(), tp(rng)};
    e.Y.resize(static_cast<size_t>(n));
    e.X.resize(static_cast<size_t>(n));
    e.A.assign(static_cast<size_t>(n), std::vector<GroupAlgebraElt>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i) {
        e.Y[static_cast<size_t>(i)] = random_ga(rng, m, 2);
        e.X[static_cast<size_t>(i)] = random_ga(rng, m, 2);
        for (int j = 0; j < n; ++j) e.A[static_cast<size_t>(i)][static_cast<size_t>(j)] = random_ga(rng, m, 2);
    }
    return e;
}

}  // namespace

TEST_CASE("growth constants certify random type-(L) elements to level -40") {
    // finite-order twist: exponent vectors stay bounded, so deep expansion
    // is feasible while coefficient mass still grows exponentially
    std::mt19937 rng(101);
    TwistedGroup G = flip_group();
    std::uniform_int_distribution<int> dim(1, 3);
    for (int it = 0; it < 6; ++it) {
        TypeLElement e = random_typeL(rng, 1, dim(rng));
        GrowthConstants gc = growth_constants_for_typeL(G, e);
        NovikovElt x = expand_typeL(G, e, 40);
        CHECK(check_exponential_growth(x, gc.A, gc.B));
    }
}

TEST_CASE("growth constants certify type-(L) elements under an Anosov twist") {
    // hyperbolic twist spreads exponents, so group-ring terms almost never
    // collide and the honest expansion is exponentially large; certify a
    // shallower window
    std::mt19937 rng(103);
    IntMatrix phi(2, 2);
    phi << 2, 1, 1, 1;
    TwistedGroup G(phi);
    for (int it = 0; it < 4; ++it) {
        TypeLElement e = random_typeL(rng, 2, 2);
        GrowthConstants gc = growth_constants_for_typeL(G, e);
        NovikovElt x = expand_typeL(G, e, 8);
        CHECK(check_exponential_growth(x, gc.A, gc.B));
    }
}
