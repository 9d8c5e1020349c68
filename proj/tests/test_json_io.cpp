#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nov/json_io.hpp"

using namespace nov;

TEST_CASE("series and rational functions round-trip through JSON exactly") {
    // coefficients far beyond 64 bits must survive the text encoding
    Int big = int_from_string("123456789012345678901234567890123456789");
    LaurentSeries s(-2, {big, Int(-1), Int(0), Int(7)}, 10);
    Json js = laurent_to_json(s);
    CHECK(laurent_from_json(js) == s);
    CHECK(js.at("coeffs")[0].get<std::string>() ==
          "123456789012345678901234567890123456789");

    RationalFn f(1, {Int(2), Int(-1)}, {Int(1), Int(-3), big});
    Json jf = rational_to_json(f);
    RationalFn g = rational_from_json(jf);
    CHECK(g.m == f.m);
    CHECK(g.P == f.P);
    CHECK(g.Q == f.Q);
}

TEST_CASE("twisted objects round-trip through JSON exactly") {
    IntMatrix phi(2, 2);
    phi << Int(2), Int(1), Int(1), Int(1);
    TwistedGroup G(phi);
    TwistedGroup G2 = group_from_json(group_to_json(G));
    CHECK(G2.m == 2);
    CHECK(G2.Phi == G.Phi);

    GroupAlgebraElt a = ga_add(GroupAlgebraElt::monomial({1, -2}, Int(5)),
                               GroupAlgebraElt::monomial({0, 3}, Int(-7)));
    CHECK(ga_from_json(ga_to_json(a), 2) == a);

    NovikovElt x(-1, {a, GroupAlgebraElt::constant(2, Int(4)), GroupAlgebraElt()}, 3);
    NovikovElt y = nov_from_json(nov_to_json(x), 2);
    CHECK(y == x);
}

TEST_CASE("incidence problem files parse and validate") {
    Json j = Json::parse(R"({
        "indices": {"m": 0, "s": 1},
        "h": [[0, 1], [0, 0]],
        "X": {"s": [1, -1]},
        "lambda": {"m": [1, 0]}
    })");
    NovikovProblem p = problem_from_json(j);
    CHECK(p.indices.at("s") == 1);
    CHECK(!p.group);
    CHECK(p.h(0, 1) == 1);
    CHECK(p.X.at("s")(1) == -1);
    CHECK(p.lam.at("m")(0) == 1);

    // an index-1 point without an entry vector is rejected
    Json bad = j;
    bad["X"] = Json::object();
    CHECK_THROWS_AS(problem_from_json(bad), std::invalid_argument);

    // twisted variant: entries are algebra elements
    Json jt = Json::parse(R"({
        "indices": {"m": 0, "s": 1},
        "group": {"m": 1, "Phi": [[-1]]},
        "h": [[[{"h": [1], "c": "1"}]]],
        "X": {"s": [[{"h": [0], "c": "1"}]]},
        "lambda": {"m": [[{"h": [0], "c": "1"}]]}
    })");
    NovikovProblem pt = problem_from_json(jt);
    REQUIRE(pt.group.has_value());
    CHECK(pt.group->m == 1);
    CHECK(pt.hA[0][0] == GroupAlgebraElt::monomial({1}, Int(1)));
}

TEST_CASE("scenario files parse into the reference map") {
    Json j = Json::parse(R"({
        "winding": 1,
        "fourier": [{"mx": 1, "my": 1, "ac": 0.30}, {"mx": 0, "my": 1, "as": 0.35}],
        "tolerances": {"tol": 1e-12},
        "delta": 1e-3,
        "bumps": [{"cx": 0.75, "cy": 0.5, "r": 0.08, "amp": 0.0005}]
    })");
    FlowScenario sc = scenario_from_json(j);
    flow::TorusMorseMap ref;  // built-in defaults are the same map, no bumps
    for (double x : {0.1, 0.4})
        for (double y : {0.2, 0.9}) {
            flow::TorusMorseMap bare = sc.map;
            bare.bumps.clear();
            CHECK(bare.value({x, y}) == doctest::Approx(ref.value({x, y})).epsilon(1e-12));
        }
    CHECK(sc.map.bumps.size() == 1);
    CHECK(sc.delta == 1e-3);

    Json bad = j;
    bad["tolerances"]["tol"] = -1.0;
    CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
}
