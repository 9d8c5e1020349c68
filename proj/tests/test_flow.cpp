// The gradient-flow laboratory: the map F(x,y) = x + 0.30 cos(2pi(x+y)) +
// 0.35 sin(2pi y) on the torus, its critical points, separatrix counts, and
// the agreement of the direct trajectory counts with the return-data route.
//
// All frozen constants below were produced by an independent prototype of
// the same scenario (fixed-step RK4 at step 2e-4, Newton refinement of the
// critical points to 1e-12) and are treated as oracles here.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nov/chain.hpp"
#include "nov/flow.hpp"

#include <cmath>

using namespace nov;
using namespace nov::flow;

namespace {

RationalFn rf(int m, std::vector<long> P, std::vector<long> Q) {
    Poly p, q;
    for (long c : P) p.emplace_back(c);
    for (long c : Q) q.emplace_back(c);
    return RationalFn(m, p, q);
}

const CriticalPoint& saddle_at(const std::vector<CriticalPoint>& crits, double x, double y) {
    for (const auto& c : crits)
        if (c.index == 1 && std::abs(c.p.x() - x) < 1e-3 && std::abs(c.p.y() - y) < 1e-3) return c;
    throw std::runtime_error("saddle not found at the requested position");
}

}  // namespace

TEST_CASE("critical point inventory of the reference map") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    REQUIRE(crits.size() == 4);
    // oracle: Newton-refined critical data of the prototype
    CHECK(crits[0].index == 0);
    CHECK(crits[0].p.x() == doctest::Approx(0.585867).epsilon(1e-4));
    CHECK(crits[0].p.y() == doctest::Approx(0.825132).epsilon(1e-4));
    CHECK(crits[0].value == doctest::Approx(0.019844).epsilon(1e-4));
    CHECK(crits[1].index == 1);
    CHECK(crits[1].value == doctest::Approx(0.206451).epsilon(1e-4));
    CHECK(crits[2].index == 1);
    CHECK(crits[2].value == doctest::Approx(0.293549).epsilon(1e-4));
    CHECK(crits[3].index == 2);
    CHECK(crits[3].value == doctest::Approx(1.480156).epsilon(1e-4));

    // flipping the sign exchanges minima and maxima and negates the values
    TorusMorseMap g = f;
    g.sign = -1;
    auto gcrits = find_critical_points(g);
    REQUIRE(gcrits.size() == 4);
    CHECK(gcrits[0].index == 0);
    CHECK(gcrits[0].value == doctest::Approx(-1.480156).epsilon(1e-4));
    CHECK(gcrits[0].p.x() == doctest::Approx(crits[3].p.x()).epsilon(1e-6));
    CHECK(gcrits[3].index == 2);
    CHECK(gcrits[3].value == doctest::Approx(-0.019844).epsilon(1e-4));
}

TEST_CASE("saddle frames are nondegenerate with frozen orientations") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    // frame determinant det[descending, ascending]; the two saddles carry
    // opposite frames, which is what later makes the d^2 signs cancel
    const auto& sA = saddle_at(crits, 0.263869, 0.825132);
    const auto& sB = saddle_at(crits, 0.236131, 0.174868);
    auto det = [&](const CriticalPoint& s) {
        Vec2 d = descending_direction(f, s.p), a = ascending_direction(f, s.p);
        return d.x() * a.y() - d.y() * a.x();
    };
    CHECK(det(sA) == doctest::Approx(-1.0));
    CHECK(det(sB) == doctest::Approx(+1.0));
}

TEST_CASE("integrator reproduces the exact standard-model flow") {
    CHECK(standard_model_error({1.0, 1e-3}, 5.0) < 1e-10);
    CHECK(standard_model_error({-2.0, 0.5}, 4.0) < 1e-10);
}

TEST_CASE("standard annulus passage times sit below the closed-form bound") {
    double bound = standard_annulus_bound(2.0);
    CHECK(bound == doctest::Approx(std::log(4.0 + std::sqrt(15.0))));
    // entries on many rays through the annulus r = 1/2 < |p| < 1
    for (double y0 : {1e-4, 1e-3, 1e-2, 0.1, 0.3}) {
        CHECK(standard_annulus_time({2.0, y0}, 0.5, 1.0) <= bound + 1e-4);
        CHECK(standard_annulus_time({-1.5, y0}, 0.5, 1.0) <= bound + 1e-4);
    }
}

TEST_CASE("standard square passage time: exact value and degeneration") {
    // entry through the x-wall: time is ln(s^2 / (x0 y0))
    CHECK(standard_slab_time({3.0, 0.05}, 1.0) == doctest::Approx(std::log(1.0 / 0.15)).epsilon(1e-4));
    CHECK(standard_slab_time({3.0, 0.05}, 1.0) < 2.0);
    // but the passage time is NOT uniformly bounded: entries hugging the
    // stable manifold linger arbitrarily long next to the fixed point
    CHECK(standard_slab_time({3.0, 1e-4}, 1.0) > 8.0);
}

TEST_CASE("separatrix rays die into the minimum with frozen crossing counts") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    std::vector<CriticalPoint> sinks{crits[0]}, saddles{crits[1], crits[2]};
    for (const auto& s : saddles) {
        auto rays = shoot_saddle(f, s, 0.1, sinks, 6);
        // oracle from the prototype: one ray dies in its own window (one
        // fiber crossing), the other in the next window down (two)
        CHECK(rays[0].ray_sign == +1);
        CHECK(rays[0].sink_id == 0);
        CHECK(rays[0].k == 1);
        CHECK(rays[1].ray_sign == -1);
        CHECK(rays[1].sink_id == 0);
        CHECK(rays[1].k == 2);
        auto n = count_intersections(f, s, 0, sinks, 0.1, 6);
        CHECK(n[1] == 1);
        CHECK(n[2] == -1);
        for (int k = 3; k <= 6; ++k) CHECK(n[static_cast<size_t>(k)] == 0);
    }
}

TEST_CASE("the reference fiber has one winding and one contractible component") {
    TorusMorseMap f;
    Station st = trace_station(f, 0.1);
    REQUIRE(st.comps.size() == 2);
    CHECK(!st.comps[0].winding);
    CHECK(st.comps[1].winding);
    CHECK(st.comps[0].length > 0.05);
    CHECK(st.comps[1].length > 1.0);  // wraps the whole y circle
    // the contractible component hugs the minimum
    auto crits = find_critical_points(f);
    for (const auto& q : st.comps[0].pts) {
        double dx = q.x() - crits[0].p.x();
        double dy = q.y() - crits[0].p.y();
        dy -= std::round(dy);
        CHECK(std::hypot(dx, dy) < 0.25);
    }
    // every traced point sits on the level set
    for (const auto& comp : st.comps)
        for (size_t i = 0; i < comp.pts.size(); i += 7)
            CHECK(std::abs(f.value(comp.pts[i]) - 0.1) < 1e-9);
}

TEST_CASE("return data of the reference fiber matches the frozen oracle") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    ReturnData rd = extract_return_data(f, crits, 0.1);
    REQUIRE(rd.n_classes == 3);
    CHECK(rd.n_circle_classes == 1);
    REQUIRE(rd.circle_sink.size() == 1);
    CHECK(rd.circle_sink[0] == 0);
    REQUIRE(rd.cut_params.size() == 2);
    // transfer: arc 1 -> arc 2 -> sink circle -> death
    IntMatrix h_expect = IntMatrix::Zero(3, 3);
    h_expect(0, 2) = 1;
    h_expect(2, 1) = 1;
    CHECK(rd.h == h_expect);
    REQUIRE(rd.X.size() == 2);
    for (const auto& X : rd.X) {
        CHECK(X(0) == 1);
        CHECK(X(1) == 0);
        CHECK(X(2) == -1);
    }
    REQUIRE(rd.lam.size() == 1);
    CHECK(rd.lam[0](0) == 1);
    CHECK(rd.lam[0](1) == 0);
    CHECK(rd.lam[0](2) == 0);
}

TEST_CASE("direct counting and the return-data route agree (saddle, minimum)") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    std::vector<CriticalPoint> sinks{crits[0]}, saddles{crits[1], crits[2]};
    ReturnData rd = extract_return_data(f, crits, 0.1);
    for (int s = 0; s < 2; ++s) {
        CyclicIncidence inc = incidence_from_return_data(rd, s, 0);
        LaurentSeries algebraic = incidence_series(inc, 8);
        auto geometric = count_intersections(f, saddles[static_cast<size_t>(s)], 0, sinks, 0.1, 8);
        for (int k = 1; k <= 8; ++k)
            CHECK(algebraic.coeff(k) == geometric[static_cast<size_t>(k)]);
        // closed form: t - t^2 on the nose
        RationalFn fn = incidence_rational(inc);
        CHECK(rf_is_zero(rf_sub(fn, rf(1, {1, -1}, {1}))));
    }
}

TEST_CASE("direct counting and the return-data route agree (maximum, saddle)") {
    TorusMorseMap f;
    f.sign = -1;  // run the same machinery on -F
    auto crits = find_critical_points(f);
    std::vector<CriticalPoint> sinks{crits[0]}, saddles{crits[1], crits[2]};
    ReturnData rd = extract_return_data(f, crits, -0.4);
    for (int s = 0; s < 2; ++s) {
        CyclicIncidence inc = incidence_from_return_data(rd, s, 0);
        LaurentSeries algebraic = incidence_series(inc, 8);
        auto geometric =
            count_intersections(f, saddles[static_cast<size_t>(s)], 0, sinks, -0.4, 8);
        for (int k = 1; k <= 8; ++k)
            CHECK(algebraic.coeff(k) == geometric[static_cast<size_t>(k)]);
        RationalFn fn = incidence_rational(inc);
        CHECK(rf_is_zero(rf_sub(fn, rf(1, {-1, 1}, {1}))));
    }
}

TEST_CASE("funnelling and transversality hold at full resolution") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    auto cc = check_condition_C(f, crits, 0.1, 2048);
    CHECK(cc.ok);
    CHECK(cc.samples >= 2048);
    CHECK(cc.died > 0);
    CHECK(cc.passed > 0);
    CHECK(cc.died + cc.passed == cc.samples);
    auto tr = check_transversality(f, crits, 0.1);
    CHECK(tr.ok);
    CHECK(tr.min_hessian_det > 100.0);
    CHECK(tr.min_crossing_angle == doctest::Approx(M_PI / 2));

    TorusMorseMap g = f;
    g.sign = -1;
    auto gcrits = find_critical_points(g);
    CHECK(check_condition_C(g, gcrits, -0.4, 2048).ok);
    CHECK(check_transversality(g, gcrits, -0.4).ok);
}

TEST_CASE("bad station levels are refused, not silently mis-counted") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    // 0.25 sits between the two saddle values; 0.5 above both
    CHECK_THROWS_AS(extract_return_data(f, crits, 0.25), ConditionCNotVerified);
    CHECK_THROWS_AS(extract_return_data(f, crits, 0.5), ConditionCNotVerified);
}

TEST_CASE("bump perturbations: consistent derivatives, unchanged counts") {
    TorusMorseMap f;
    f.bumps.push_back({0.75, 0.5, 0.08, 1e-3});
    // finite-difference check of grad and hess across the bump support
    const double eps = 1e-6;
    for (double x : {0.70, 0.75, 0.79})
        for (double y : {0.46, 0.5, 0.55}) {
            Vec2 p(x, y);
            Vec2 g = f.grad(p);
            CHECK(g.x() == doctest::Approx((f.value({x + eps, y}) - f.value({x - eps, y})) /
                                           (2 * eps)).epsilon(1e-5));
            CHECK(g.y() == doctest::Approx((f.value({x, y + eps}) - f.value({x, y - eps})) /
                                           (2 * eps)).epsilon(1e-5));
            Mat2 H = f.hess(p);
            Vec2 gx = (f.grad({x + eps, y}) - f.grad({x - eps, y})) / (2 * eps);
            CHECK(H(0, 0) == doctest::Approx(gx.x()).epsilon(1e-4));
            CHECK(H(0, 1) == doctest::Approx(gx.y()).epsilon(1e-4));
        }
    // a small bump supported away from the critical points leaves every
    // incidence count alone
    auto crits = find_critical_points(f);
    REQUIRE(crits.size() == 4);
    std::vector<CriticalPoint> sinks{crits[0]}, saddles{crits[1], crits[2]};
    for (const auto& s : saddles) {
        auto n = count_intersections(f, s, 0, sinks, 0.1, 6);
        CHECK(n[1] == 1);
        CHECK(n[2] == -1);
        CHECK(n[3] == 0);
    }
}

TEST_CASE("counts are stable under a parameter nudge") {
    TorusMorseMap f;
    CHECK(perturb_and_recount(f, 0.01, 0.1, 4));
}

TEST_CASE("the assembled boundary operators square to zero and kill homology") {
    // d1 from the descending run, d2 from the ascending one.  The ascending
    // counts are computed in the saddle's stable frame; converting them to
    // the unstable frame of the descending complex multiplies each row by
    // minus the saddle's frame determinant.
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    ReturnData rd = extract_return_data(f, crits, 0.1);

    TorusMorseMap g = f;
    g.sign = -1;
    auto gcrits = find_critical_points(g);
    ReturnData grd = extract_return_data(g, gcrits, -0.4);

    RFMatrix d1(1, std::vector<RationalFn>());
    RFMatrix d2;
    std::vector<CriticalPoint> gsaddles{gcrits[1], gcrits[2]};
    int s_plus = 0;
    for (const auto& c : crits) {
        if (c.index != 1) continue;
        d1[0].push_back(incidence_rational(incidence_from_return_data(rd, s_plus++, 0)));
        // matching saddle of the ascending run, by torus position
        int match = -1;
        for (size_t j = 0; j < gsaddles.size(); ++j)
            if (std::abs(gsaddles[j].p.x() - c.p.x()) < 1e-6 &&
                std::abs(gsaddles[j].p.y() - c.p.y()) < 1e-6)
                match = static_cast<int>(j);
        REQUIRE(match >= 0);
        Vec2 dd = descending_direction(g, c.p), aa = ascending_direction(g, c.p);
        double det = dd.x() * aa.y() - dd.y() * aa.x();
        RationalFn entry = incidence_rational(incidence_from_return_data(grd, match, 0));
        if (det > 0) entry = rf_neg(entry);  // row factor -sgn(det)
        d2.push_back({entry});
    }
    REQUIRE(d1[0].size() == 2);
    REQUIRE(d2.size() == 2);

    NovikovComplex cx = assemble_novikov_complex({1, 2, 1}, {RFMatrix{}, d1, d2});
    CHECK(check_d2_novikov(cx));
    CHECK(novikov_complex_acyclic(cx));

    // negative control: dropping the frame conversion breaks d^2 = 0
    RFMatrix bad = d2;
    bad[0][0] = rf_neg(bad[0][0]);
    NovikovComplex broken = assemble_novikov_complex({1, 2, 1}, {RFMatrix{}, d1, bad});
    CHECK(!check_d2_novikov(broken));
}

TEST_CASE("the picture of the scenario renders") {
    TorusMorseMap f;
    auto crits = find_critical_points(f);
    Station st = trace_station(f, 0.1);
    std::string svg = render_svg(f, crits, st);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(svg.size() > 2000);
}
