// Command line front end.
//
//   novcli novikov <problem.json>   closed forms + truncated series + verdict
//   novcli flow    <scenario.json>  torus flow report: counts two ways,
//                                   condition (C) margins, perturbations, SVG
//   novcli selftest                 the full acceptance battery
//
// Exit codes: 0 success, 2 validation error (bad input), 3 verification
// failure (the two independent routes disagree).  Identical inputs and
// flags produce byte-identical outputs; every file embeds the effective
// configuration.

#include "nov/acceptance.hpp"
#include "nov/chain.hpp"
#include "nov/flow.hpp"
#include "nov/json_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace nov;

constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::string out_dir = ".";
    int order = 64;
    std::string tol_file;
    bool svg = true;
    unsigned long seed = 0;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string config_comment(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# novcli " << cfg.subcommand << " input=" << cfg.input << " out=" << cfg.out_dir
       << " order=" << cfg.order << " seed=" << cfg.seed << " svg=" << (cfg.svg ? 1 : 0);
    if (!cfg.tol_file.empty()) os << " tol-file=" << cfg.tol_file;
    os << "\n";
    return os.str();
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["tool"] = "novcli";
    j["subcommand"] = cfg.subcommand;
    j["input"] = cfg.input;
    j["out"] = cfg.out_dir;
    j["order"] = cfg.order;
    j["seed"] = cfg.seed;
    j["svg"] = cfg.svg;
    if (!cfg.tol_file.empty()) j["tol_file"] = cfg.tol_file;
    return j;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path p = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream f(p);
    if (!f) throw ValidationError("cannot write " + p.string());
    return f;
}

Json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

/// RFC 4180 quoting: wrap in quotes, double any quote inside.
std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += c;
    }
    out += '"';
    return out;
}

std::string poly_str(const Poly& p) {
    if (p.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ' ';
        s += p[i].get_str();
    }
    return s;
}

/// Apply --tol-file overrides ({"tol":..., "h_max":..., "t_max":...}).
void apply_tol_file(const std::string& path, flow::IntegratorOptions& opts) {
    Json j = load_json(path);
    if (j.contains("tol")) opts.tol = j["tol"].get<double>();
    if (j.contains("h_max")) opts.h_max = j["h_max"].get<double>();
    if (j.contains("t_max")) opts.t_max = j["t_max"].get<double>();
    if (opts.tol <= 0 || opts.h_max <= 0 || opts.t_max <= 0)
        throw ValidationError(path + ": tolerances must be positive");
}

// ---- novikov --------------------------------------------------------------

int cmd_novikov(const RunConfig& cfg) {
    NovikovProblem prob;
    try {
        prob = problem_from_json(load_json(cfg.input));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(cfg.input + ": " + e.what());
    }

    std::vector<std::string> sources, sinks;  // index-1 and index-0 points
    for (const auto& [name, idx] : prob.indices) {
        if (idx == 1) sources.push_back(name);
        if (idx == 0) sinks.push_back(name);
    }

    std::ofstream series_csv = open_out(cfg, "series.csv");
    std::ofstream forms_csv = open_out(cfg, "closed_forms.csv");
    series_csv << config_comment(cfg) << "x,y,k,n_k\n";
    forms_csv << config_comment(cfg) << "x,y,m,P,Q\n";

    Json out;
    out["config"] = config_json(cfg);
    out["results"] = Json::array();
    bool twisted = prob.group.has_value();
    bool agree = true;

    for (const auto& x : sources)
        for (const auto& y : sinks) {
            Json row;
            row["x"] = x;
            row["y"] = y;
            if (!twisted) {
                CyclicIncidence inc{prob.h, prob.X.at(x), prob.lam.at(y)};
                LaurentSeries s = incidence_series(inc, cfg.order);
                RationalFn rf = incidence_rational(inc);
                bool ok = expand_rational(rf, cfg.order) == s;
                agree = agree && ok;
                for (int k = 1; k <= cfg.order; ++k)
                    series_csv << x << ',' << y << ',' << k << ',' << s.coeff(k).get_str() << '\n';
                forms_csv << x << ',' << y << ',' << rf.m << ",\"" << poly_str(rf.P) << "\",\""
                          << poly_str(rf.Q) << "\"\n";
                row["series"] = laurent_to_json(s);
                row["rational"] = rational_to_json(rf);
                row["routes_agree"] = ok;
            } else {
                const TwistedGroup& G = *prob.group;
                TypeLElement e;
                e.g1 = {HVec(static_cast<size_t>(G.m), 0), 0};
                e.g2 = {HVec(static_cast<size_t>(G.m), 0), 0};
                e.Y = prob.lamA.at(y);
                e.A = prob.hA;
                e.X = prob.XA.at(x);
                SemilinearEndo endo;
                endo.xi = prob.hA;
                NovikovElt closed = expand_typeL(G, e, cfg.order);
                NovikovElt iterated = summed_series(G, endo, e.Y, e.X, cfg.order);
                bool ok = closed == iterated;
                agree = agree && ok;
                NovikovElt n = equivariant_incidence(G, e, cfg.order);
                for (int k = n.min_power; k <= n.trunc_power; ++k)
                    series_csv << x << ',' << y << ',' << k << ','
                               << csv_quote(ga_to_json(n.coeff(k)).dump()) << '\n';
                row["incidence"] = nov_to_json(n);
                row["routes_agree"] = ok;
            }
            out["results"].push_back(std::move(row));
        }

    out["verdict"] = agree ? "routes agree" : "two-route mismatch";
    std::ofstream js = open_out(cfg, "novikov.json");
    js << out.dump(2) << '\n';

    std::printf("%s: %zu pair(s), %s\n", cfg.input.c_str(), sources.size() * sinks.size(),
                agree ? "routes agree" : "TWO-ROUTE MISMATCH");
    return agree ? 0 : kExitVerification;
}

// ---- flow -----------------------------------------------------------------

int cmd_flow(const RunConfig& cfg) {
    FlowScenario sc;
    try {
        sc = scenario_from_json(load_json(cfg.input));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(cfg.input + ": " + e.what());
    }
    if (!cfg.tol_file.empty()) apply_tol_file(cfg.tol_file, sc.opts);

    auto crits = flow::find_critical_points(sc.map);
    std::ofstream crit_csv = open_out(cfg, "critical_points.csv");
    crit_csv << config_comment(cfg) << "x,y,index,value\n";
    for (const auto& c : crits)
        crit_csv << fmt_double(c.p.x()) << ',' << fmt_double(c.p.y()) << ',' << c.index << ','
                 << fmt_double(c.value) << '\n';

    std::ofstream counts_csv = open_out(cfg, "counts.csv");
    counts_csv << config_comment(cfg) << "saddle,sink,k,geometric,algebraic\n";
    std::ofstream forms_csv = open_out(cfg, "closed_forms.csv");
    forms_csv << config_comment(cfg) << "saddle,sink,m,P,Q\n";
    std::ofstream cond_csv = open_out(cfg, "condition.csv");
    cond_csv << config_comment(cfg) << "check,ok,detail\n";
    std::ofstream pert_csv = open_out(cfg, "perturbation.csv");
    pert_csv << config_comment(cfg) << "kind,parameters,counts_unchanged\n";

    Json out;
    out["config"] = config_json(cfg);
    out["critical_points"] = Json::array();
    for (const auto& c : crits)
        out["critical_points"].push_back(
            {{"x", c.p.x()}, {"y", c.p.y()}, {"index", c.index}, {"value", c.value}});

    std::vector<flow::CriticalPoint> sinks, saddles;
    for (const auto& c : crits) {
        if (c.index == 0) sinks.push_back(c);
        if (c.index == 1) saddles.push_back(c);
    }

    // fibration case: nothing to count
    if (crits.empty() || saddles.empty() || sinks.empty()) {
        out["station"] = nullptr;
        out["counts"] = Json::array();
        out["verdict"] = "no critical pairs; nothing to count";
        std::ofstream js = open_out(cfg, "flow.json");
        js << out.dump(2) << '\n';
        std::printf("%s: %zu critical point(s), nothing to count\n", cfg.input.c_str(),
                    crits.size());
        return 0;
    }

    double station = sc.station;
    if (std::isnan(station)) {
        // halfway between the top sink value and the bottom saddle value
        double top_sink = sinks.front().value;
        for (const auto& c : sinks) top_sink = std::max(top_sink, c.value);
        double bot_saddle = saddles.front().value;
        for (const auto& c : saddles) bot_saddle = std::min(bot_saddle, c.value);
        station = 0.5 * (top_sink + bot_saddle);
    }
    out["station"] = station;

    flow::ReturnData rd;
    try {
        rd = flow::extract_return_data(sc.map, crits, station, 48, sc.opts);
    } catch (const flow::ConditionCNotVerified& e) {
        throw ValidationError(std::string("condition (C) not verified: ") + e.what());
    }

    bool agree = true;
    out["counts"] = Json::array();
    for (size_t s = 0; s < saddles.size(); ++s)
        for (size_t d = 0; d < sinks.size(); ++d) {
            CyclicIncidence inc = incidence_from_return_data(rd, static_cast<int>(s),
                                                             static_cast<int>(d));
            LaurentSeries alg = incidence_series(inc, sc.kmax);
            RationalFn rf = incidence_rational(inc);
            auto geo = flow::count_intersections(sc.map, saddles[s], static_cast<int>(d), sinks,
                                                 station, sc.kmax, sc.opts);
            Json row;
            row["saddle"] = s;
            row["sink"] = d;
            row["rational"] = rational_to_json(rf);
            row["n_k"] = Json::array();
            for (int k = 1; k <= sc.kmax; ++k) {
                const Int& g = geo[static_cast<size_t>(k)];
                counts_csv << s << ',' << d << ',' << k << ',' << g.get_str() << ','
                           << alg.coeff(k).get_str() << '\n';
                row["n_k"].push_back(g.get_str());
                agree = agree && g == alg.coeff(k);
            }
            forms_csv << s << ',' << d << ',' << rf.m << ",\"" << poly_str(rf.P) << "\",\""
                      << poly_str(rf.Q) << "\"\n";
            out["counts"].push_back(std::move(row));
        }

    auto cond = flow::check_condition_C(sc.map, crits, station, 2048, sc.opts);
    auto trans = flow::check_transversality(sc.map, crits, station, sc.opts);
    cond_csv << "condition_C," << (cond.ok ? 1 : 0) << ",\"samples=" << cond.samples
             << " died=" << cond.died << " passed=" << cond.passed
             << (cond.reason.empty() ? "" : " " + cond.reason) << "\"\n";
    cond_csv << "transversality," << (trans.ok ? 1 : 0)
             << ",\"min_hessian_det=" << fmt_double(trans.min_hessian_det)
             << " min_crossing_angle=" << fmt_double(trans.min_crossing_angle)
             << (trans.reason.empty() ? "" : " " + trans.reason) << "\"\n";
    out["condition_C"] = {{"ok", cond.ok},
                          {"samples", cond.samples},
                          {"died", cond.died},
                          {"passed", cond.passed},
                          {"reason", cond.reason}};
    out["transversality"] = {{"ok", trans.ok},
                             {"min_hessian_det", trans.min_hessian_det},
                             {"min_crossing_angle", trans.min_crossing_angle},
                             {"reason", trans.reason}};

    // perturbation report: a Fourier-coefficient nudge plus seeded bumps
    std::vector<std::vector<Int>> reference;
    for (size_t s = 0; s < saddles.size(); ++s)
        reference.push_back(
            flow::count_intersections(sc.map, saddles[s], 0, sinks, station, sc.kmax, sc.opts));
    bool nudge_ok = flow::perturb_and_recount(sc.map, sc.delta, station, sc.kmax, sc.opts);
    pert_csv << "fourier_nudge,eps=" << fmt_double(sc.delta) << ',' << (nudge_ok ? 1 : 0) << '\n';
    out["perturbations"] = Json::array();
    out["perturbations"].push_back(
        {{"kind", "fourier_nudge"}, {"eps", sc.delta}, {"counts_unchanged", nudge_ok}});
    bool stable = nudge_ok;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> pos(0.0, 1.0), amp(-sc.delta, sc.delta);
    int placed = 0;
    while (placed < 5) {
        flow::Bump b{pos(rng), pos(rng), 0.05, amp(rng)};
        bool clear = true;
        for (const auto& c : crits) {
            double dx = b.cx - c.p.x(), dy = b.cy - c.p.y();
            dx -= std::round(dx);
            dy -= std::round(dy);
            if (std::hypot(dx, dy) < b.r + 0.05) clear = false;
        }
        if (!clear) continue;
        ++placed;
        flow::TorusMorseMap g = sc.map;
        g.bumps.push_back(b);
        auto gcrits = flow::find_critical_points(g);
        bool ok = gcrits.size() == crits.size();
        if (ok) {
            std::vector<flow::CriticalPoint> gsinks, gsaddles;
            for (const auto& c : gcrits) {
                if (c.index == 0) gsinks.push_back(c);
                if (c.index == 1) gsaddles.push_back(c);
            }
            ok = gsinks.size() == sinks.size() && gsaddles.size() == saddles.size();
            for (size_t s = 0; ok && s < gsaddles.size(); ++s)
                ok = flow::count_intersections(g, gsaddles[s], 0, gsinks, station, sc.kmax,
                                               sc.opts) == reference[s];
        }
        stable = stable && ok;
        pert_csv << "bump,cx=" << fmt_double(b.cx) << ";cy=" << fmt_double(b.cy)
                 << ";r=" << fmt_double(b.r) << ";amp=" << fmt_double(b.amp) << ','
                 << (ok ? 1 : 0) << '\n';
        out["perturbations"].push_back({{"kind", "bump"},
                                        {"cx", b.cx},
                                        {"cy", b.cy},
                                        {"r", b.r},
                                        {"amp", b.amp},
                                        {"counts_unchanged", ok}});
    }

    if (cfg.svg) {
        std::ofstream svg = open_out(cfg, "flow.svg");
        svg << flow::render_svg(sc.map, crits, rd.station, sc.opts);
    }

    out["verdict"] = agree ? "routes agree" : "two-route mismatch";
    out["perturbation_stable"] = stable;
    std::ofstream js = open_out(cfg, "flow.json");
    js << out.dump(2) << '\n';

    std::printf("%s: %zu critical point(s), station %s, %s, perturbations %s\n",
                cfg.input.c_str(), crits.size(), fmt_double(station).c_str(),
                agree ? "routes agree" : "TWO-ROUTE MISMATCH", stable ? "stable" : "UNSTABLE");
    return agree ? 0 : kExitVerification;
}

// ---- selftest -------------------------------------------------------------

int cmd_selftest(bool inject_fault) {
    auto results = run_acceptance(inject_fault);
    bool all = true;
    for (const auto& r : results) {
        std::printf("criterion %2d [%s] %s — %s\n", r.number, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("selftest: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
    return all ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Novikov incidence coefficients, three independent ways"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    RunConfig cfg;
    app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    app.add_option("--order", cfg.order, "Truncation order")->capture_default_str();
    app.add_option("--tol-file", cfg.tol_file, "JSON file with integrator tolerance overrides");
    app.add_option("--seed", cfg.seed, "Seed for the perturbation sampler")->capture_default_str();
    app.add_flag("--svg,!--no-svg", cfg.svg, "Write the flow picture")->capture_default_str();

    auto* nv = app.add_subcommand("novikov", "Incidence problem: closed forms vs series");
    nv->add_option("input", cfg.input, "Problem file (JSON)")->required();
    auto* fl = app.add_subcommand("flow", "Torus flow scenario: counts three ways");
    fl->add_option("input", cfg.input, "Scenario file (JSON)")->required();
    auto* st = app.add_subcommand("selftest", "Run the acceptance battery");
    bool inject_fault = false;
    st->add_flag("--inject-fault", inject_fault,
                 "Corrupt one coefficient to prove the battery detects it");

    CLI11_PARSE(app, argc, argv);

    try {
        if (nv->parsed()) {
            cfg.subcommand = "novikov";
            return cmd_novikov(cfg);
        }
        if (fl->parsed()) {
            cfg.subcommand = "flow";
            return cmd_flow(cfg);
        }
        cfg.subcommand = "selftest";
        return cmd_selftest(inject_fault);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}
