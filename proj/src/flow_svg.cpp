#include "nov/flow.hpp"

#include <cmath>
#include <sstream>

namespace nov::flow {

namespace {

constexpr double W = 640.0;  // canvas size; the window shows x, y in [0, 1]

double sx(double x) { return (x - std::floor(x)) * W; }
double sy(double y) { return (1.0 - (y - std::floor(y))) * W; }

/// Emit a polyline in torus coordinates, breaking it where it wraps around
/// the fundamental domain so no spurious full-width segments appear.
void emit_path(std::ostringstream& out, const std::vector<Vec2>& pts, const char* style) {
    bool open = false;
    Vec2 prev = Vec2::Zero();
    for (const auto& p : pts) {
        bool jump = open && (std::abs(sx(p.x()) - sx(prev.x())) > W / 2 ||
                             std::abs(sy(p.y()) - sy(prev.y())) > W / 2);
        if (!open || jump) {
            if (open) out << "\" " << style << "/>\n";
            out << "<polyline points=\"";
            open = true;
        }
        out << sx(p.x()) << "," << sy(p.y()) << " ";
        prev = p;
    }
    if (open) out << "\" " << style << "/>\n";
}

}  // namespace

std::string render_svg(const TorusMorseMap& f, const std::vector<CriticalPoint>& crits,
                       const Station& station, const IntegratorOptions& opts) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W
        << "\" viewBox=\"0 0 " << W << " " << W << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << W << "\" fill=\"#fdfdf8\"/>\n";

    // faint level sets of Psi for orientation
    for (int j = -2; j <= 2; ++j) {
        Station bg = trace_station(f, station.level + 0.25 * j);
        for (const auto& comp : bg.comps)
            emit_path(out, comp.pts, "fill=\"none\" stroke=\"#d8d8d0\" stroke-width=\"1\"");
    }

    // the reference fiber
    for (const auto& comp : station.comps)
        emit_path(out, comp.pts,
                  comp.winding ? "fill=\"none\" stroke=\"#2266aa\" stroke-width=\"2.5\""
                               : "fill=\"none\" stroke=\"#22aa66\" stroke-width=\"2.5\"");

    // separatrix rays of every saddle
    std::vector<CriticalPoint> sinks;
    for (const auto& c : crits)
        if (c.index == 0) sinks.push_back(c);
    for (const auto& c : crits) {
        if (c.index != 1) continue;
        Vec2 dir = descending_direction(f, c.p);
        for (int r = 0; r < 2; ++r) {
            Fate fate = descend(f, c.p + (r ? -1e-7 : 1e-7) * dir, station.level,
                                station.level - 6, sinks, opts);
            std::vector<Vec2> path;
            path.push_back(c.p);
            for (const auto& q : fate.crossings) path.push_back(q);
            path.push_back(fate.end);
            emit_path(out, path, "fill=\"none\" stroke=\"#cc4433\" stroke-width=\"1.5\" "
                                 "stroke-dasharray=\"6 3\"");
        }
    }

    // critical points: circle = sink, diamond = saddle, square = source
    for (const auto& c : crits) {
        double x = sx(c.p.x()), y = sy(c.p.y());
        if (c.index == 0)
            out << "<circle cx=\"" << x << "\" cy=\"" << y
                << "\" r=\"6\" fill=\"#224488\"/>\n";
        else if (c.index == 1)
            out << "<rect x=\"" << x - 6 << "\" y=\"" << y - 6
                << "\" width=\"12\" height=\"12\" fill=\"#cc4433\" transform=\"rotate(45 " << x
                << " " << y << ")\"/>\n";
        else
            out << "<rect x=\"" << x - 5 << "\" y=\"" << y - 5
                << "\" width=\"10\" height=\"10\" fill=\"#558822\"/>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace nov::flow
