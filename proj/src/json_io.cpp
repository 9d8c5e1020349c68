#include "nov/json_io.hpp"

#include <stdexcept>

namespace nov {

namespace {

Json int_list(const Poly& p) {
    Json a = Json::array();
    for (const auto& c : p) a.push_back(c.get_str());
    return a;
}

Poly poly_from(const Json& j) {
    Poly p;
    for (const auto& c : j) p.push_back(int_from_string(c.get<std::string>()));
    return p;
}

template <typename T>
T field(const Json& j, const char* name) {
    if (!j.contains(name)) throw std::invalid_argument(std::string("missing field: ") + name);
    return j.at(name).get<T>();
}

}  // namespace

Json laurent_to_json(const LaurentSeries& s) {
    return Json{{"min_exp", s.min_exp}, {"coeffs", int_list(s.coeffs)}, {"trunc", s.trunc_order}};
}

LaurentSeries laurent_from_json(const Json& j) {
    return LaurentSeries(field<int>(j, "min_exp"), poly_from(j.at("coeffs")),
                         field<int>(j, "trunc"));
}

Json rational_to_json(const RationalFn& f) {
    return Json{{"m", f.m}, {"P", int_list(f.P)}, {"Q", int_list(f.Q)}};
}

RationalFn rational_from_json(const Json& j) {
    return RationalFn(field<int>(j, "m"), poly_from(j.at("P")), poly_from(j.at("Q")));
}

Json group_to_json(const TwistedGroup& G) {
    Json phi = Json::array();
    for (int i = 0; i < G.m; ++i) {
        Json row = Json::array();
        for (int k = 0; k < G.m; ++k) row.push_back(static_cast<long>(G.Phi(i, k).get_si()));
        phi.push_back(row);
    }
    return Json{{"m", G.m}, {"Phi", phi}};
}

TwistedGroup group_from_json(const Json& j) {
    int m = field<int>(j, "m");
    IntMatrix phi(m, m);
    const Json& rows = j.at("Phi");
    if (static_cast<int>(rows.size()) != m) throw std::invalid_argument("Phi: wrong row count");
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != m)
            throw std::invalid_argument("Phi: wrong column count");
        for (int k = 0; k < m; ++k)
            phi(i, k) = Int(rows[static_cast<size_t>(i)][static_cast<size_t>(k)].get<long>());
    }
    return TwistedGroup(phi);
}

Json ga_to_json(const GroupAlgebraElt& a) {
    Json out = Json::array();
    for (const auto& [h, c] : a.terms) {
        Json hv = Json::array();
        for (long e : h) hv.push_back(e);
        out.push_back(Json{{"h", hv}, {"c", c.get_str()}});
    }
    return out;
}

GroupAlgebraElt ga_from_json(const Json& j, int m) {
    GroupAlgebraElt a;
    for (const auto& term : j) {
        HVec h;
        for (const auto& e : term.at("h")) h.push_back(e.get<long>());
        if (static_cast<int>(h.size()) != m)
            throw std::invalid_argument("algebra term: exponent rank mismatch");
        Int c = int_from_string(field<std::string>(term, "c"));
        a = ga_add(a, GroupAlgebraElt::monomial(h, c));
    }
    return a;
}

Json nov_to_json(const NovikovElt& x) {
    Json levels = Json::array();
    for (const auto& l : x.levels) levels.push_back(ga_to_json(l));
    return Json{{"min_power", x.min_power}, {"levels", levels}, {"trunc", x.trunc_power}};
}

NovikovElt nov_from_json(const Json& j, int m) {
    std::vector<GroupAlgebraElt> levels;
    for (const auto& l : j.at("levels")) levels.push_back(ga_from_json(l, m));
    return NovikovElt(field<int>(j, "min_power"), std::move(levels), field<int>(j, "trunc"));
}

NovikovProblem problem_from_json(const Json& j) {
    NovikovProblem p;
    for (const auto& [name, idx] : j.at("indices").items()) p.indices[name] = idx.get<int>();
    if (j.contains("group")) p.group = group_from_json(j.at("group"));

    const Json& h = j.at("h");
    int n = static_cast<int>(h.size());
    for (const auto& row : h)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("h: not square");

    if (p.group) {
        int m = p.group->m;
        for (const auto& row : h) {
            std::vector<GroupAlgebraElt> r;
            for (const auto& e : row) r.push_back(ga_from_json(e, m));
            p.hA.push_back(std::move(r));
        }
        for (const auto& [name, vec] : j.at("X").items()) {
            std::vector<GroupAlgebraElt> v;
            for (const auto& e : vec) v.push_back(ga_from_json(e, m));
            if (static_cast<int>(v.size()) != n)
                throw std::invalid_argument("X: size mismatch with h");
            p.XA[name] = std::move(v);
        }
        for (const auto& [name, vec] : j.at("lambda").items()) {
            std::vector<GroupAlgebraElt> v;
            for (const auto& e : vec) v.push_back(ga_from_json(e, m));
            if (static_cast<int>(v.size()) != n)
                throw std::invalid_argument("lambda: size mismatch with h");
            p.lamA[name] = std::move(v);
        }
    } else {
        p.h = IntMatrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                p.h(i, k) = Int(h[static_cast<size_t>(i)][static_cast<size_t>(k)].get<long>());
        for (const auto& [name, vec] : j.at("X").items()) {
            if (static_cast<int>(vec.size()) != n)
                throw std::invalid_argument("X: size mismatch with h");
            IntVector v(n);
            for (int i = 0; i < n; ++i) v(i) = Int(vec[static_cast<size_t>(i)].get<long>());
            p.X[name] = v;
        }
        for (const auto& [name, vec] : j.at("lambda").items()) {
            if (static_cast<int>(vec.size()) != n)
                throw std::invalid_argument("lambda: size mismatch with h");
            IntCovector v(n);
            for (int i = 0; i < n; ++i) v(i) = Int(vec[static_cast<size_t>(i)].get<long>());
            p.lam[name] = v;
        }
    }

    // every index-1 point needs an entry vector, every index-0 a covector
    for (const auto& [name, idx] : p.indices) {
        if (idx == 1 && !p.X.count(name) && !p.XA.count(name))
            throw std::invalid_argument("missing X for index-1 point " + name);
        if (idx == 0 && !p.lam.count(name) && !p.lamA.count(name))
            throw std::invalid_argument("missing lambda for index-0 point " + name);
    }
    return p;
}

FlowScenario scenario_from_json(const Json& j) {
    FlowScenario sc;
    sc.map.terms.clear();
    sc.map.winding = field<int>(j, "winding");
    for (const auto& t : j.at("fourier"))
        sc.map.terms.push_back({field<int>(t, "mx"), field<int>(t, "my"),
                                t.value("ac", 0.0), t.value("as", 0.0)});
    if (j.contains("bumps"))
        for (const auto& b : j.at("bumps"))
            sc.map.bumps.push_back({field<double>(b, "cx"), field<double>(b, "cy"),
                                    field<double>(b, "r"), field<double>(b, "amp")});
    if (j.contains("delta")) sc.delta = j.at("delta").get<double>();
    if (j.contains("station")) sc.station = j.at("station").get<double>();
    if (j.contains("kmax")) sc.kmax = j.at("kmax").get<int>();
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        if (t.contains("tol")) sc.opts.tol = t.at("tol").get<double>();
        if (t.contains("h_max")) sc.opts.h_max = t.at("h_max").get<double>();
        if (t.contains("t_max")) sc.opts.t_max = t.at("t_max").get<double>();
    }
    if (sc.opts.tol <= 0 || sc.opts.h_max <= 0 || sc.opts.t_max <= 0 || sc.delta < 0)
        throw std::invalid_argument("tolerances must be positive");
    for (const auto& b : sc.map.bumps)
        if (b.r <= 0) throw std::invalid_argument("bump radius must be positive");
    return sc;
}

}  // namespace nov
