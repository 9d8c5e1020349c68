// Gradient-flow laboratory on the two-torus.
//
// The map under study is F(x, y) = x + a cos(2 pi (x + y)) + b sin(2 pi y),
// a circle-valued Morse map of winding one in x, lifted to R x S^1 (y is
// wrapped, x is real; the deck transformation drops the value by one).  The
// flow is the negative gradient of Psi = sign * F; with sign = -1 the same
// machinery counts trajectories from maxima to saddles.
//
// Incidence coefficients are measured two independent ways:
//  * directly, by shooting the separatrix rays of each saddle downward and
//    counting reference-fiber crossings until the ray dies into a sink;
//  * algebraically, by extracting the return data (h, X, lam) of the fiber:
//    classes of the fiber transfer into the next translate through h, the
//    saddle rays enter through X, and deaths are read off by lam, giving
//    n_k = lam(h^{k-1} X).
// Their agreement on a verified scenario is the point of the whole exercise.

#ifndef NOV_FLOW_HPP
#define NOV_FLOW_HPP

#include "nov/chain.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace nov::flow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// ---- the field ------------------------------------------------------------

/// One Fourier mode of the periodic part of F.
struct FourierTerm {
    int mx = 0;
    int my = 0;
    double ac = 0.0;  // coefficient of cos(2 pi (mx x + my y))
    double as = 0.0;  // coefficient of sin(2 pi (mx x + my y))
};

/// Smooth bump of compact support (radius r around a torus point), used for
/// perturbation experiments: amp * exp(1 - 1/(1 - d^2/r^2)) inside, 0 outside.
struct Bump {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.1;
    double amp = 0.0;
};

struct TorusMorseMap {
    int winding = 1;
    std::vector<FourierTerm> terms{{1, 1, 0.30, 0.0}, {0, 1, 0.0, 0.35}};
    std::vector<Bump> bumps;
    int sign = +1;  // Psi = sign * F

    double value(const Vec2& p) const;
    Vec2 grad(const Vec2& p) const;
    Mat2 hess(const Vec2& p) const;
    /// Deck shift d with Psi(p + d) = Psi(p) - 1 (y untouched).
    Vec2 deck() const { return {-static_cast<double>(sign), 0.0}; }
};

// ---- critical points ------------------------------------------------------

struct CriticalPoint {
    Vec2 p;          // representative with x, y in [0, 1)
    int index = 0;   // number of negative Hessian eigenvalues of Psi
    double value = 0.0;
};

/// Newton iteration seeded on an n x n grid over the fundamental domain,
/// deduplicated modulo Z^2.  Sorted by index, then by value.
std::vector<CriticalPoint> find_critical_points(const TorusMorseMap& f, int grid = 64);

/// Unit eigenvector for the descending (negative eigenvalue) direction,
/// with a fixed sign convention so ray orientations are reproducible.
Vec2 descending_direction(const TorusMorseMap& f, const Vec2& saddle);
Vec2 ascending_direction(const TorusMorseMap& f, const Vec2& saddle);

// ---- integration ----------------------------------------------------------

struct IntegratorOptions {
    double tol = 1e-12;       // local error tolerance of the embedded pair
    double h_init = 1e-3;
    double h_max = 0.05;
    double t_max = 400.0;     // give up past this flow time
    double sink_grad2 = 1e-22;  // |grad|^2 threshold for sink convergence
};

enum class FateKind { Sink, Crossed, Stuck };

struct Fate {
    FateKind kind = FateKind::Stuck;
    Vec2 end = Vec2::Zero();
    // Sink: which sink (index into the sink list) and deck depth
    int sink_id = -1;
    int depth = 0;       // end ~ sink + depth * deck + (0, integer)
    // crossing log: refined points where Psi passed level - j
    std::vector<Vec2> crossings;
};

/// Integrate the descending flow of Psi from p0 with a Dormand--Prince 5(4)
/// pair.  Records every crossing of the levels `station_level - j`
/// (j = 0, 1, ...), refined by bisection; stops when the trajectory either
/// converges to one of `sinks` or drops below `stop_level`.
Fate descend(const TorusMorseMap& f, const Vec2& p0, double station_level, double stop_level,
             const std::vector<CriticalPoint>& sinks, const IntegratorOptions& opts = {});

// ---- direct counting ------------------------------------------------------

struct RayCount {
    int ray_sign = 0;   // orientation of the separatrix ray in the 0-sphere
    int sink_id = -1;
    int k = 0;          // number of reference-fiber crossings
};

/// Shoot both separatrix rays of a saddle and report, for each, the sink it
/// dies into and how many times it crossed the reference fiber on the way.
std::array<RayCount, 2> shoot_saddle(const TorusMorseMap& f, const CriticalPoint& saddle,
                                     double station_level, const std::vector<CriticalPoint>& sinks,
                                     int max_depth, const IntegratorOptions& opts = {});

/// Direct incidence counts n_k (k = 1..kmax) between a saddle and a sink.
std::vector<Int> count_intersections(const TorusMorseMap& f, const CriticalPoint& saddle,
                                     int sink_id, const std::vector<CriticalPoint>& sinks,
                                     double station_level, int kmax,
                                     const IntegratorOptions& opts = {});

// ---- the reference fiber and its return data ------------------------------

struct StationComponent {
    std::vector<Vec2> pts;   // closed polyline on the level set
    bool winding = false;    // wraps around the y circle
    std::vector<double> cum; // cumulative arc length at each point
    double length = 0.0;
};

struct Station {
    double level = 0.0;
    std::vector<StationComponent> comps;
};

/// Trace every component of the level set {Psi = level} in the cylinder.
Station trace_station(const TorusMorseMap& f, double level);

struct ConditionCNotVerified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Return data of the reference fiber.  Basis: one class per contractible
/// component (each hugging a sink), then one class per arc of the winding
/// component cut by the stable manifolds of the saddles one window below.
struct ReturnData {
    Station station;
    int n_classes = 0;
    int n_circle_classes = 0;           // contractible components, listed first
    std::vector<int> circle_sink;       // sink id each contractible class dies into
    std::vector<double> cut_params;     // arc boundaries on the winding component
    IntMatrix h;                        // transfer into the next fiber translate
    std::vector<IntCovector> lam;       // one death functional per sink
    std::vector<IntVector> X;           // one first-crossing vector per saddle
};

/// Extract (h, X, lam) by sampling.  Every arc sample must behave coherently
/// with its neighbours (same component runs when the sampling is refined);
/// anything else throws ConditionCNotVerified.
ReturnData extract_return_data(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                               double station_level, int samples_per_arc = 48,
                               const IntegratorOptions& opts = {});

/// The algebraic incidence route: n_k = lam_sink(h^{k-1} X_saddle).
CyclicIncidence incidence_from_return_data(const ReturnData& rd, int saddle_idx, int sink_id);

// ---- verification passes --------------------------------------------------

struct ConditionCReport {
    bool ok = false;
    int samples = 0;
    int died = 0;
    int passed = 0;
    std::string reason;
};

/// Funnelling check at fixed resolution: every fiber sample must either die
/// into a sink of the current window or reach the next fiber translate; the
/// landing set must again lie on the fiber (it does by construction, which
/// is re-verified), and no sample may linger near a saddle.
ConditionCReport check_condition_C(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                                   double station_level, int resolution = 2048,
                                   const IntegratorOptions& opts = {});

struct TransversalityReport {
    bool ok = false;
    double min_hessian_det = 0.0;   // over all critical points
    double min_crossing_angle = 0.0;  // separatrix vs fiber tangent, radians
    std::string reason;
};

TransversalityReport check_transversality(const TorusMorseMap& f,
                                          const std::vector<CriticalPoint>& crits,
                                          double station_level,
                                          const IntegratorOptions& opts = {});

/// Recount after a parameter nudge; structurally stable counts must agree.
bool perturb_and_recount(const TorusMorseMap& f, double eps, double station_level, int kmax,
                         const IntegratorOptions& opts = {});

// ---- exact benchmarks for the integrator ----------------------------------

/// For the planar model field -grad((x^2 - y^2)/2) the flow is
/// (x0 e^{-t}, y0 e^t).  Largest deviation of the integrator from the exact
/// trajectory over [0, T].
double standard_model_error(const Vec2& p0, double T, const IntegratorOptions& opts = {});

/// Time the model trajectory through p0 spends in the annulus r < |p| < R.
/// Exact statement: it is at most ln(q^2 + sqrt(q^4 - 1)) with q = R / r.
double standard_annulus_time(const Vec2& p0, double r, double R);
double standard_annulus_bound(double q);

/// Time the model trajectory spends in the square max(|x|, |y|) <= s.  For
/// an entry through the x-wall (x0 > s, 0 < y0 < s, y0 x0 <= s^2) the time
/// is exactly ln(s^2 / (x0 y0)): in particular it stays below 2 whenever
/// the entry height x-> y0 x0 / s is at least s e^{-2}, and degenerates
/// only along the stable manifold y0 -> 0.
double standard_slab_time(const Vec2& p0, double s);

// ---- pictures -------------------------------------------------------------

/// Draw the fundamental domain: fiber components, separatrix rays, critical
/// points.  Returns the SVG document as a string.
std::string render_svg(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                       const Station& station, const IntegratorOptions& opts = {});

}  // namespace nov::flow

#endif
