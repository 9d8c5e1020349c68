#include "nov/flow.hpp"

#include <algorithm>
#include <cmath>

namespace nov::flow {

namespace {
constexpr double TwoPi = 2.0 * M_PI;

double wrap01(double v) {
    double r = std::fmod(v, 1.0);
    return r < 0 ? r + 1.0 : r;
}

/// Cylinder distance: x is real, y lives on R/Z.
double cyl_dist2(const Vec2& p, const Vec2& q) {
    double dx = p.x() - q.x();
    double dy = p.y() - q.y();
    dy -= std::round(dy);
    return dx * dx + dy * dy;
}
}  // namespace

// ---- field ----------------------------------------------------------------

namespace {

// the bump profile phi(s) = exp(1 - 1/(1 - s)) on [0, 1) and its derivatives
double bump_phi(double s) { return std::exp(1.0 - 1.0 / (1.0 - s)); }
double bump_phi1(double s) { return -bump_phi(s) / ((1.0 - s) * (1.0 - s)); }
double bump_phi2(double s) {
    double u = 1.0 - s;
    return bump_phi(s) * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
}

/// Offset from the bump center, wrapped onto the torus.
Vec2 bump_offset(const Bump& b, const Vec2& p) {
    double dx = p.x() - b.cx;
    double dy = p.y() - b.cy;
    return {dx - std::round(dx), dy - std::round(dy)};
}

}  // namespace

double TorusMorseMap::value(const Vec2& p) const {
    double f = winding * p.x();
    for (const auto& t : terms) {
        double ph = TwoPi * (t.mx * p.x() + t.my * p.y());
        f += t.ac * std::cos(ph) + t.as * std::sin(ph);
    }
    for (const auto& b : bumps) {
        Vec2 d = bump_offset(b, p);
        double s = d.squaredNorm() / (b.r * b.r);
        if (s < 1.0) f += b.amp * bump_phi(s);
    }
    return sign * f;
}

Vec2 TorusMorseMap::grad(const Vec2& p) const {
    Vec2 g(static_cast<double>(winding), 0.0);
    for (const auto& t : terms) {
        double ph = TwoPi * (t.mx * p.x() + t.my * p.y());
        double d = TwoPi * (-t.ac * std::sin(ph) + t.as * std::cos(ph));
        g.x() += t.mx * d;
        g.y() += t.my * d;
    }
    for (const auto& b : bumps) {
        Vec2 d = bump_offset(b, p);
        double s = d.squaredNorm() / (b.r * b.r);
        if (s < 1.0) g += b.amp * bump_phi1(s) * (2.0 / (b.r * b.r)) * d;
    }
    return sign * g;
}

Mat2 TorusMorseMap::hess(const Vec2& p) const {
    Mat2 H = Mat2::Zero();
    for (const auto& t : terms) {
        double ph = TwoPi * (t.mx * p.x() + t.my * p.y());
        double d2 = -TwoPi * TwoPi * (t.ac * std::cos(ph) + t.as * std::sin(ph));
        H(0, 0) += t.mx * t.mx * d2;
        H(0, 1) += t.mx * t.my * d2;
        H(1, 1) += t.my * t.my * d2;
    }
    for (const auto& b : bumps) {
        Vec2 d = bump_offset(b, p);
        double r2 = b.r * b.r;
        double s = d.squaredNorm() / r2;
        if (s < 1.0) {
            Mat2 dd = d * d.transpose();
            Mat2 Hb = b.amp * (bump_phi2(s) * (4.0 / (r2 * r2)) * dd +
                               bump_phi1(s) * (2.0 / r2) * Mat2::Identity());
            H(0, 0) += Hb(0, 0);
            H(0, 1) += Hb(0, 1);
            H(1, 1) += Hb(1, 1);
        }
    }
    H(1, 0) = H(0, 1);
    return sign * H;
}

// ---- critical points ------------------------------------------------------

std::vector<CriticalPoint> find_critical_points(const TorusMorseMap& f, int grid) {
    std::vector<CriticalPoint> out;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            Vec2 p((i + 0.5) / grid, (j + 0.5) / grid);
            bool ok = true;
            for (int it = 0; it < 80; ++it) {
                Vec2 g = f.grad(p);
                Mat2 H = f.hess(p);
                if (std::abs(H.determinant()) < 1e-12) {
                    ok = false;
                    break;
                }
                Vec2 step = H.fullPivLu().solve(g);
                p -= step;
                if (step.norm() < 1e-15) break;
                if (p.norm() > 1e3) {
                    ok = false;
                    break;
                }
            }
            if (!ok || f.grad(p).norm() > 1e-10) continue;
            Vec2 rep(wrap01(p.x()), wrap01(p.y()));
            bool dup = false;
            for (const auto& c : out)
                if (cyl_dist2(Vec2(c.p.x(), c.p.y()), rep) < 1e-12 &&
                    std::abs(c.p.x() - rep.x()) < 1e-6) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            Eigen::SelfAdjointEigenSolver<Mat2> es(f.hess(rep));
            int index = (es.eigenvalues()(0) < 0) + (es.eigenvalues()(1) < 0);
            out.push_back({rep, index, f.value(rep)});
        }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.index != b.index) return a.index < b.index;
        return a.value < b.value;
    });
    return out;
}

namespace {
Vec2 fixed_sign(Vec2 v) {
    if (v.x() < 0 || (v.x() == 0 && v.y() < 0)) v = -v;
    return v;
}
}  // namespace

Vec2 descending_direction(const TorusMorseMap& f, const Vec2& saddle) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(f.hess(saddle));
    return fixed_sign(es.eigenvectors().col(0));  // negative eigenvalue
}

Vec2 ascending_direction(const TorusMorseMap& f, const Vec2& saddle) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(f.hess(saddle));
    return fixed_sign(es.eigenvectors().col(1));  // positive eigenvalue
}

// ---- Dormand--Prince 5(4) -------------------------------------------------

namespace {

struct StepResult {
    Vec2 y;
    double err;
};

template <typename Field>
StepResult dopri_step(const Field& v, const Vec2& y0, double h) {
    Vec2 k1 = v(y0);
    Vec2 k2 = v(y0 + h * (1.0 / 5) * k1);
    Vec2 k3 = v(y0 + h * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
    Vec2 k4 = v(y0 + h * ((44.0 / 45) * k1 - (56.0 / 15) * k2 + (32.0 / 9) * k3));
    Vec2 k5 = v(y0 + h * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2 + (64448.0 / 6561) * k3 -
                          (212.0 / 729) * k4));
    Vec2 k6 = v(y0 + h * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 + (46732.0 / 5247) * k3 +
                          (49.0 / 176) * k4 - (5103.0 / 18656) * k5));
    Vec2 y5 = y0 + h * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4 -
                        (2187.0 / 6784) * k5 + (11.0 / 84) * k6);
    Vec2 k7 = v(y5);
    Vec2 y4 = y0 + h * ((5179.0 / 57600) * k1 + (7571.0 / 16695) * k3 + (393.0 / 640) * k4 -
                        (92097.0 / 339200) * k5 + (187.0 / 2100) * k6 + (1.0 / 40) * k7);
    return {y5, (y5 - y4).norm()};
}

/// One adaptive step. On return `used` holds the accepted step size and `h`
/// the proposal for the next one.
template <typename Field>
Vec2 advance(const Field& v, const Vec2& y0, double& h, double& used,
             const IntegratorOptions& opts) {
    for (int tries = 0; tries < 60; ++tries) {
        StepResult r = dopri_step(v, y0, h);
        if (r.err <= opts.tol || h <= 1e-12) {
            used = h;
            double grow = r.err > 0 ? 0.9 * std::pow(opts.tol / r.err, 0.2) : 5.0;
            h = std::min(opts.h_max, h * std::min(5.0, std::max(0.2, grow)));
            return r.y;
        }
        h *= std::max(0.2, 0.9 * std::pow(opts.tol / r.err, 0.2));
    }
    used = h;
    return dopri_step(v, y0, h).y;
}

/// Refine the crossing of `level` between p0 (above) and the point one step
/// of size h later (below), by bisection on the substep length.
template <typename Field>
Vec2 refine_crossing(const TorusMorseMap& f, const Field& v, Vec2 p0, double h, double level) {
    // p0 is above the level; step h lands below it
    for (int it = 0; it < 80; ++it) {
        double mid = h / 2;
        Vec2 pm = dopri_step(v, p0, mid).y;
        if (f.value(pm) > level) {
            p0 = pm;
            h -= mid;
        } else {
            h = mid;
        }
        if (std::abs(f.value(p0) - level) < 1e-12) break;
    }
    // final Newton polish onto the level set along the gradient
    Vec2 p = p0;
    for (int it = 0; it < 6; ++it) {
        Vec2 g = f.grad(p);
        p -= (f.value(p) - level) / g.squaredNorm() * g;
    }
    return p;
}

}  // namespace

Fate descend(const TorusMorseMap& f, const Vec2& p0, double station_level, double stop_level,
             const std::vector<CriticalPoint>& sinks, const IntegratorOptions& opts) {
    auto v = [&f](const Vec2& p) { return Vec2(-f.grad(p)); };
    Fate fate;
    Vec2 p = p0;
    double h = opts.h_init;
    double t = 0;
    // largest station_level + n (n integer) strictly below the current value
    double target = station_level + std::ceil(f.value(p0) - station_level - 1e-9) - 1.0;
    while (t < opts.t_max) {
        double used = 0;
        Vec2 pn = advance(v, p, h, used, opts);
        t += used;
        while (f.value(pn) <= target) {
            fate.crossings.push_back(refine_crossing(f, v, p, used, target));
            target -= 1.0;
        }
        p = pn;
        if (f.value(p) <= stop_level) {
            fate.kind = FateKind::Crossed;
            fate.end = fate.crossings.empty() ? p : fate.crossings.back();
            return fate;
        }
        if (f.grad(p).squaredNorm() < opts.sink_grad2) {
            for (size_t i = 0; i < sinks.size(); ++i) {
                Vec2 d = p - sinks[i].p;
                double rx = std::round(d.x());
                double ry = std::round(d.y());
                if (std::abs(d.x() - rx) < 1e-5 && std::abs(d.y() - ry) < 1e-5) {
                    fate.kind = FateKind::Sink;
                    fate.end = p;
                    fate.sink_id = static_cast<int>(i);
                    fate.depth = static_cast<int>(std::lround(rx / f.deck().x()));
                    return fate;
                }
            }
            fate.kind = FateKind::Stuck;  // converged, but not to a known sink
            fate.end = p;
            return fate;
        }
    }
    fate.end = p;
    return fate;
}

// ---- direct counting ------------------------------------------------------

std::array<RayCount, 2> shoot_saddle(const TorusMorseMap& f, const CriticalPoint& saddle,
                                     double station_level, const std::vector<CriticalPoint>& sinks,
                                     int max_depth, const IntegratorOptions& opts) {
    Vec2 dir = descending_direction(f, saddle.p);
    std::array<RayCount, 2> out;
    for (int r = 0; r < 2; ++r) {
        int s = r == 0 ? +1 : -1;
        Fate fate = descend(f, saddle.p + 1e-7 * s * dir, station_level,
                            station_level - max_depth - 2, sinks, opts);
        out[static_cast<size_t>(r)].ray_sign = s;
        if (fate.kind == FateKind::Sink) {
            out[static_cast<size_t>(r)].sink_id = fate.sink_id;
            out[static_cast<size_t>(r)].k = static_cast<int>(fate.crossings.size());
        }
    }
    return out;
}

std::vector<Int> count_intersections(const TorusMorseMap& f, const CriticalPoint& saddle,
                                     int sink_id, const std::vector<CriticalPoint>& sinks,
                                     double station_level, int kmax, const IntegratorOptions& opts) {
    std::vector<Int> n(static_cast<size_t>(kmax) + 1, Int(0));  // n[k], entry 0 unused
    auto rays = shoot_saddle(f, saddle, station_level, sinks, kmax, opts);
    for (const auto& rc : rays) {
        if (rc.sink_id != sink_id) continue;
        if (rc.k >= 1 && rc.k <= kmax) n[static_cast<size_t>(rc.k)] += rc.ray_sign;
    }
    return n;
}

// ---- station tracing ------------------------------------------------------

namespace {

/// March along {Psi = level} from `start` with tangent steps + Newton
/// correction until the loop closes in the cylinder.
StationComponent trace_component(const TorusMorseMap& f, Vec2 start, double level) {
    StationComponent comp;
    Vec2 p = start;
    const double ds = 1.5e-3;
    double ywind = 0;
    for (int i = 0; i < 300000; ++i) {
        comp.pts.push_back(p);
        Vec2 g = f.grad(p);
        Vec2 tang(-g.y(), g.x());
        tang.normalize();
        Vec2 q = p + ds * tang;
        for (int it = 0; it < 6; ++it) {
            Vec2 gg = f.grad(q);
            q -= (f.value(q) - level) / gg.squaredNorm() * gg;
        }
        ywind += q.y() - p.y();
        p = q;
        if (i > 10 && cyl_dist2(p, start) < ds * ds / 4 && std::abs(p.x() - start.x()) < 0.5) break;
    }
    comp.winding = std::abs(ywind) > 0.5;
    comp.cum.resize(comp.pts.size());
    double acc = 0;
    for (size_t i = 0; i < comp.pts.size(); ++i) {
        if (i) acc += std::sqrt(cyl_dist2(comp.pts[i], comp.pts[i - 1]));
        comp.cum[i] = acc;
    }
    comp.length = acc + std::sqrt(cyl_dist2(comp.pts.back(), comp.pts.front()));
    return comp;
}

}  // namespace

Station trace_station(const TorusMorseMap& f, double level) {
    Station st;
    st.level = level;
    // seed scan: sign changes of Psi - level along horizontal lines
    const int ny = 48;
    std::vector<Vec2> seeds;
    for (int j = 0; j < ny; ++j) {
        double y = (j + 0.5) / ny;
        double x0 = (level - 1.5) * (f.sign > 0 ? 1 : -1);
        double prev = f.value(Vec2(x0, y)) - level;
        const int nx = 600;
        for (int i = 1; i <= nx; ++i) {
            double x = x0 + 3.0 * i / nx * (f.sign > 0 ? 1 : -1);
            double cur = f.value(Vec2(x, y)) - level;
            if (prev < 0 != cur < 0) {
                double lo = x - 3.0 / nx * (f.sign > 0 ? 1 : -1), hi = x;
                for (int it = 0; it < 60; ++it) {
                    double mid = (lo + hi) / 2;
                    if ((f.value(Vec2(mid, y)) - level < 0) == (prev < 0))
                        lo = mid;
                    else
                        hi = mid;
                }
                seeds.emplace_back((lo + hi) / 2, y);
            }
            prev = cur;
        }
    }
    for (const auto& s : seeds) {
        bool covered = false;
        for (const auto& comp : st.comps) {
            for (const auto& q : comp.pts)
                if (cyl_dist2(q, s) < 9e-6) {
                    covered = true;
                    break;
                }
            if (covered) break;
        }
        if (!covered) st.comps.push_back(trace_component(f, s, level));
    }
    // winding component first is not required; keep stable order: winding last
    std::stable_sort(st.comps.begin(), st.comps.end(),
                     [](const StationComponent& a, const StationComponent& b) {
                         return a.winding < b.winding;
                     });
    return st;
}

namespace {

struct Location {
    int comp = -1;
    double param = 0;  // arc-length position
};

Location locate_on_station(const Station& st, const Vec2& q) {
    Location best;
    double bd = 1e18;
    for (size_t c = 0; c < st.comps.size(); ++c) {
        const auto& comp = st.comps[c];
        for (size_t i = 0; i < comp.pts.size(); ++i) {
            double d = cyl_dist2(comp.pts[i], q);
            if (d < bd) {
                bd = d;
                best.comp = static_cast<int>(c);
                best.param = comp.cum[i];
            }
        }
    }
    if (bd > 1e-4) best.comp = -1;  // not on the station
    return best;
}

}  // namespace

// ---- return data ----------------------------------------------------------

namespace {

struct SampleOutcome {
    bool died = false;
    int sink_id = -1;
    Location land;  // valid when !died; location of (crossing - deck) on the station
};

SampleOutcome down_one_window(const TorusMorseMap& f, const Station& st,
                              const std::vector<CriticalPoint>& sinks, const Vec2& p0,
                              const IntegratorOptions& opts) {
    SampleOutcome o;
    Fate fate = descend(f, p0, st.level, st.level - 1 - 1e-6, sinks, opts);
    if (fate.kind == FateKind::Sink) {
        // a legitimate death happens inside the sample's own window, i.e.
        // before the trajectory ever reaches the next fiber translate
        if (!fate.crossings.empty())
            throw ConditionCNotVerified("sample skipped a window before dying");
        o.died = true;
        o.sink_id = fate.sink_id;
        return o;
    }
    if (fate.kind != FateKind::Crossed || fate.crossings.empty())
        throw ConditionCNotVerified("sample neither died nor reached the next fiber");
    Vec2 q = fate.crossings.back() - f.deck();
    o.land = locate_on_station(st, q);
    if (o.land.comp < 0) throw ConditionCNotVerified("landing point missed the traced fiber");
    return o;
}

double param_at(const StationComponent& comp, double t) {
    double L = comp.length;
    t = std::fmod(t, L);
    return t < 0 ? t + L : t;
}

Vec2 point_at(const StationComponent& comp, double t) {
    t = param_at(comp, t);
    auto it = std::lower_bound(comp.cum.begin(), comp.cum.end(), t);
    size_t i = it == comp.cum.begin() ? 0 : static_cast<size_t>(it - comp.cum.begin() - 1);
    size_t j = (i + 1) % comp.pts.size();
    double seg = (j == 0 ? comp.length : comp.cum[j]) - comp.cum[i];
    double u = seg > 0 ? (t - comp.cum[i]) / seg : 0;
    Vec2 d = comp.pts[j] - comp.pts[i];
    d.y() -= std::round(d.y());
    return comp.pts[i] + u * d;
}

/// Signed count of passes over the marker m while moving from a to b along
/// the circle of circumference L, taking the shorter way.
int marker_pass(double a, double b, double m, double L) {
    double fwd = b - a;
    fwd -= L * std::round(fwd / L);  // signed shorter difference in (-L/2, L/2]
    if (fwd >= 0) {
        double rel = m - a;
        rel -= L * std::floor(rel / L);  // in [0, L)
        return (rel > 1e-9 && rel < fwd) ? +1 : 0;
    }
    double rel = a - m;
    rel -= L * std::floor(rel / L);
    return (rel > 1e-9 && rel < -fwd) ? -1 : 0;
}

}  // namespace

ReturnData extract_return_data(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                               double station_level, int samples_per_arc,
                               const IntegratorOptions& opts) {
    ReturnData rd;
    rd.station = trace_station(f, station_level);

    std::vector<CriticalPoint> sinks, saddles;
    for (const auto& c : crits) {
        if (c.index == 0) sinks.push_back(c);
        if (c.index == 1) saddles.push_back(c);
    }
    if (sinks.empty() || saddles.empty())
        throw ConditionCNotVerified("need at least one sink and one saddle");
    for (const auto& s : saddles)
        if (!(station_level < s.value && s.value < station_level + 1))
            throw ConditionCNotVerified("station level is not between the saddle windows");

    // classes: contractible components first
    int winding_comp = -1;
    for (size_t c = 0; c < rd.station.comps.size(); ++c) {
        if (rd.station.comps[c].winding) {
            if (winding_comp >= 0) throw ConditionCNotVerified("more than one winding component");
            winding_comp = static_cast<int>(c);
        }
    }
    if (winding_comp != static_cast<int>(rd.station.comps.size()) - 1)
        throw ConditionCNotVerified("expected exactly one winding component, traced last");
    rd.n_circle_classes = static_cast<int>(rd.station.comps.size()) - 1;

    // each contractible component must die uniformly into one sink
    for (int c = 0; c < rd.n_circle_classes; ++c) {
        const auto& comp = rd.station.comps[static_cast<size_t>(c)];
        int sink_id = -2;
        for (int s = 0; s < samples_per_arc; ++s) {
            Vec2 p = point_at(comp, comp.length * (s + 0.5) / samples_per_arc);
            SampleOutcome o = down_one_window(f, rd.station, sinks, p, opts);
            if (!o.died) throw ConditionCNotVerified("sink circle sample failed to die");
            if (sink_id == -2) sink_id = o.sink_id;
            if (o.sink_id != sink_id)
                throw ConditionCNotVerified("sink circle samples disagree about their sink");
        }
        rd.circle_sink.push_back(sink_id);
    }

    // cut the winding component by the stable manifolds of the saddles one
    // window below: ascend from their stable rays to the station level
    const auto& wind = rd.station.comps[static_cast<size_t>(winding_comp)];
    auto up = [&f](const Vec2& p) { return Vec2(f.grad(p)); };
    for (const auto& s : saddles) {
        Vec2 sp = s.p + f.deck();
        Vec2 dir = ascending_direction(f, sp);
        for (int r = 0; r < 2; ++r) {
            Vec2 p = sp + (r ? -1e-7 : 1e-7) * dir;
            double h = opts.h_init;
            double t = 0;
            bool reached = false;
            while (t < opts.t_max) {
                double used = 0;
                Vec2 pn = advance(up, p, h, used, opts);
                t += used;
                if (f.value(pn) >= station_level) {
                    // bisect the upward substep to land on the station level
                    Vec2 lo = p;
                    double hh = used;
                    for (int it = 0; it < 80; ++it) {
                        Vec2 pm = dopri_step(up, lo, hh / 2).y;
                        if (f.value(pm) < station_level) {
                            lo = pm;
                            hh -= hh / 2;
                        } else {
                            hh /= 2;
                        }
                    }
                    Vec2 cut = lo;
                    for (int it = 0; it < 6; ++it) {
                        Vec2 g = f.grad(cut);
                        cut -= (f.value(cut) - station_level) / g.squaredNorm() * g;
                    }
                    Location loc = locate_on_station(rd.station, cut);
                    if (loc.comp == winding_comp) rd.cut_params.push_back(loc.param);
                    reached = true;
                    break;
                }
                p = pn;
                if (f.grad(p).squaredNorm() < opts.sink_grad2) break;  // capped below the station
            }
            (void)reached;
        }
    }
    if (rd.cut_params.empty())
        throw ConditionCNotVerified("no stable manifold cuts the winding component");
    std::sort(rd.cut_params.begin(), rd.cut_params.end());

    int n_arcs = static_cast<int>(rd.cut_params.size());
    rd.n_classes = rd.n_circle_classes + n_arcs;
    rd.h = IntMatrix::Zero(rd.n_classes, rd.n_classes);

    // markers: one interior point per class
    std::vector<double> arc_mid(static_cast<size_t>(n_arcs));
    for (int i = 0; i < n_arcs; ++i) {
        double a0 = rd.cut_params[static_cast<size_t>(i)];
        double a1 = i + 1 < n_arcs ? rd.cut_params[static_cast<size_t>(i + 1)]
                                   : rd.cut_params[0] + wind.length;
        arc_mid[static_cast<size_t>(i)] = param_at(wind, (a0 + a1) / 2);
    }
    auto class_of = [&](const Location& loc) -> int {
        if (loc.comp != winding_comp) return loc.comp;  // circle classes come first
        double t = loc.param;
        int arc = n_arcs - 1;
        for (int i = 0; i < n_arcs; ++i)
            if (t >= rd.cut_params[static_cast<size_t>(i)]) arc = i;
        return rd.n_circle_classes + arc;
    };

    // transfer columns for the circle classes: pure deaths, no transfer
    // transfer columns for the arcs: sample, then count signed marker passes
    for (int i = 0; i < n_arcs; ++i) {
        double a0 = rd.cut_params[static_cast<size_t>(i)];
        double a1 = i + 1 < n_arcs ? rd.cut_params[static_cast<size_t>(i + 1)]
                                   : rd.cut_params[0] + wind.length;
        double margin = (a1 - a0) * 1e-3;
        std::vector<SampleOutcome> outs;
        for (int s = 0; s < samples_per_arc; ++s) {
            double t = a0 + margin + (a1 - a0 - 2 * margin) * s / (samples_per_arc - 1);
            Vec2 p = point_at(wind, t);
            outs.push_back(down_one_window(f, rd.station, sinks, p, opts));
        }
        int col = rd.n_circle_classes + i;
        for (size_t s = 0; s + 1 < outs.size(); ++s) {
            const auto& u = outs[s];
            const auto& w = outs[s + 1];
            if (u.died || w.died)
                throw ConditionCNotVerified("winding arc sample died inside its own window");
            if (u.land.comp != w.land.comp) {
                // run boundary between components: must happen near an arc cut
                continue;
            }
            const auto& tgt = rd.station.comps[static_cast<size_t>(u.land.comp)];
            if (u.land.comp == winding_comp) {
                for (int j = 0; j < n_arcs; ++j) {
                    int p = marker_pass(u.land.param, w.land.param, arc_mid[static_cast<size_t>(j)],
                                        tgt.length);
                    rd.h(rd.n_circle_classes + j, col) += p;
                }
            } else {
                int p = marker_pass(u.land.param, w.land.param, tgt.length / 2, tgt.length);
                rd.h(u.land.comp, col) += p;
            }
        }
    }

    // death functionals: one per sink, supported on its circle classes
    for (size_t m = 0; m < sinks.size(); ++m) {
        IntCovector lam = IntCovector::Zero(rd.n_classes);
        for (int c = 0; c < rd.n_circle_classes; ++c)
            if (rd.circle_sink[static_cast<size_t>(c)] == static_cast<int>(m)) lam(c) = 1;
        rd.lam.push_back(lam);
    }

    // first-crossing vectors: one per saddle
    for (const auto& s : saddles) {
        IntVector X = IntVector::Zero(rd.n_classes);
        Vec2 dir = descending_direction(f, s.p);
        for (int r = 0; r < 2; ++r) {
            int sgn = r == 0 ? +1 : -1;
            Fate fate = descend(f, s.p + 1e-7 * sgn * dir, station_level, station_level - 0.5,
                                sinks, opts);
            Vec2 first;
            if (!fate.crossings.empty())
                first = fate.crossings.front();
            else if (fate.kind == FateKind::Sink)
                throw ConditionCNotVerified("saddle ray died before its first fiber crossing");
            else
                throw ConditionCNotVerified("saddle ray lost before its first fiber crossing");
            Location loc = locate_on_station(rd.station, first);
            if (loc.comp < 0) throw ConditionCNotVerified("saddle ray crossing missed the fiber");
            X(class_of(loc)) += sgn;
        }
        rd.X.push_back(X);
    }
    return rd;
}

CyclicIncidence incidence_from_return_data(const ReturnData& rd, int saddle_idx, int sink_id) {
    CyclicIncidence inc;
    inc.h = rd.h;
    inc.X = rd.X.at(static_cast<size_t>(saddle_idx));
    inc.lam = rd.lam.at(static_cast<size_t>(sink_id));
    return inc;
}

// ---- verification ---------------------------------------------------------

ConditionCReport check_condition_C(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                                   double station_level, int resolution,
                                   const IntegratorOptions& opts) {
    ConditionCReport rep;
    std::vector<CriticalPoint> sinks;
    for (const auto& c : crits)
        if (c.index == 0) sinks.push_back(c);
    Station st = trace_station(f, station_level);
    double total = 0;
    for (const auto& comp : st.comps) total += comp.length;
    for (const auto& comp : st.comps) {
        int n = std::max(4, static_cast<int>(std::lround(resolution * comp.length / total)));
        for (int s = 0; s < n; ++s) {
            Vec2 p = point_at(comp, comp.length * (s + 0.5) / n);
            ++rep.samples;
            try {
                SampleOutcome o = down_one_window(f, st, sinks, p, opts);
                if (o.died)
                    ++rep.died;
                else
                    ++rep.passed;
            } catch (const ConditionCNotVerified& e) {
                rep.reason = e.what();
                return rep;
            }
        }
    }
    if (rep.died == 0) {
        rep.reason = "no deaths in the window: the fiber misses every basin";
        return rep;
    }
    rep.ok = true;
    return rep;
}

TransversalityReport check_transversality(const TorusMorseMap& f,
                                          const std::vector<CriticalPoint>& crits,
                                          double station_level, const IntegratorOptions& opts) {
    TransversalityReport rep;
    rep.min_hessian_det = 1e18;
    for (const auto& c : crits)
        rep.min_hessian_det = std::min(rep.min_hessian_det, std::abs(f.hess(c.p).determinant()));
    if (rep.min_hessian_det < 1e-3) {
        rep.reason = "degenerate critical point";
        return rep;
    }
    std::vector<CriticalPoint> sinks, saddles;
    for (const auto& c : crits) {
        if (c.index == 0) sinks.push_back(c);
        if (c.index == 1) saddles.push_back(c);
    }
    // For a gradient flow the velocity -grad(Psi) meets every regular fiber
    // orthogonally, so the crossing angle can only degenerate through the
    // gradient itself vanishing at a crossing point.
    rep.min_crossing_angle = M_PI / 2;
    double gmin = 1e18;
    for (const auto& s : saddles) {
        Vec2 dir = descending_direction(f, s.p);
        for (int r = 0; r < 2; ++r) {
            Fate fate = descend(f, s.p + (r ? -1e-7 : 1e-7) * dir, station_level,
                                station_level - 12, sinks, opts);
            if (fate.kind == FateKind::Stuck) {
                rep.reason = "separatrix neither died nor left the probe range";
                return rep;
            }
            for (const auto& q : fate.crossings) gmin = std::min(gmin, f.grad(q).norm());
        }
    }
    if (gmin < 1e-4) {
        rep.min_crossing_angle = 0;
        rep.reason = "separatrix crosses the fiber next to a critical point";
        return rep;
    }
    rep.ok = true;
    return rep;
}

bool perturb_and_recount(const TorusMorseMap& f, double eps, double station_level, int kmax,
                         const IntegratorOptions& opts) {
    TorusMorseMap g = f;
    if (!g.terms.empty()) g.terms.front().ac += eps;
    if (g.terms.size() > 1) g.terms.back().as -= eps / 2;
    auto count_all = [&](const TorusMorseMap& field) {
        auto crits = find_critical_points(field);
        std::vector<CriticalPoint> sinks, saddles;
        for (const auto& c : crits) {
            if (c.index == 0) sinks.push_back(c);
            if (c.index == 1) saddles.push_back(c);
        }
        std::vector<std::vector<Int>> counts;
        for (const auto& s : saddles)
            for (size_t m = 0; m < sinks.size(); ++m)
                counts.push_back(
                    count_intersections(field, s, static_cast<int>(m), sinks, station_level, kmax, opts));
        return counts;
    };
    return count_all(f) == count_all(g);
}

// ---- exact benchmarks -----------------------------------------------------

namespace {
struct ModelField {
    Vec2 operator()(const Vec2& p) const { return {-p.x(), p.y()}; }
};
}  // namespace

double standard_model_error(const Vec2& p0, double T, const IntegratorOptions& opts) {
    ModelField v;
    Vec2 p = p0;
    double h = opts.h_init;
    double t = 0;
    double worst = 0;
    while (t < T) {
        if (t + h > T) h = T - t;
        double used = 0;
        p = advance(v, p, h, used, opts);
        t += used;
        Vec2 exact(p0.x() * std::exp(-t), p0.y() * std::exp(t));
        worst = std::max(worst, (p - exact).norm());
    }
    return worst;
}

double standard_annulus_time(const Vec2& p0, double r, double R) {
    // measure of { t >= 0 : r < |p(t)| < R } along p(t) = (x0 e^-t, y0 e^t),
    // integrated as an indicator with a fine fixed step
    double T = 30, dt = 1e-6, acc = 0;
    for (double t = 0; t < T; t += dt) {
        double x = p0.x() * std::exp(-t), y = p0.y() * std::exp(t);
        double n = std::hypot(x, y);
        if (n > r && n < R) acc += dt;
        if (n > R && y * y > x * x) break;  // expanding and already outside
    }
    return acc;
}

double standard_annulus_bound(double q) { return std::log(q * q + std::sqrt(q * q * q * q - 1)); }

double standard_slab_time(const Vec2& p0, double s) {
    double T = 30, dt = 1e-6, acc = 0;
    for (double t = 0; t < T; t += dt) {
        double x = p0.x() * std::exp(-t), y = p0.y() * std::exp(t);
        if (std::abs(x) <= s && std::abs(y) <= s) acc += dt;
        if (std::abs(y) > s && std::abs(y) > std::abs(x)) break;
    }
    return acc;
}

}  // namespace nov::flow
