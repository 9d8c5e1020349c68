// JSON encodings of the library's value types, plus the two input-file
// formats of the command line tool (incidence problems and flow scenarios).
//
// Big integers travel as decimal strings so nothing is lost to doubles.

#ifndef NOV_JSON_IO_HPP
#define NOV_JSON_IO_HPP

#include "nov/flow.hpp"
#include "nov/twisted.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace nov {

using Json = nlohmann::json;

// ---- series and rational functions ----------------------------------------

// {"min_exp": int, "coeffs": ["dec", ...], "trunc": int}
Json laurent_to_json(const LaurentSeries& s);
LaurentSeries laurent_from_json(const Json& j);

// {"m": int, "P": ["dec", ...], "Q": ["dec", ...]}
Json rational_to_json(const RationalFn& f);
RationalFn rational_from_json(const Json& j);

// ---- twisted objects ------------------------------------------------------

// {"m": int, "Phi": [[int]]}
Json group_to_json(const TwistedGroup& G);
TwistedGroup group_from_json(const Json& j);

// [{"h": [int], "c": "dec"}, ...]
Json ga_to_json(const GroupAlgebraElt& a);
GroupAlgebraElt ga_from_json(const Json& j, int m);

// {"min_power": int, "levels": [elt, ...], "trunc": int}
Json nov_to_json(const NovikovElt& x);
NovikovElt nov_from_json(const Json& j, int m);

// ---- input files ----------------------------------------------------------

/// An incidence problem: named critical points with Morse indices, a shared
/// return endomorphism h, an entry vector X per index-1 point and a death
/// covector lambda per index-0 point.  With "group" present all entries are
/// group-algebra elements and the computation runs over the twisted
/// completion; without it they are plain integers.
struct NovikovProblem {
    std::map<std::string, int> indices;
    std::optional<TwistedGroup> group;
    // Z((t)) data
    IntMatrix h;
    std::map<std::string, IntVector> X;
    std::map<std::string, IntCovector> lam;
    // twisted data (used when group is set)
    std::vector<std::vector<GroupAlgebraElt>> hA;
    std::map<std::string, std::vector<GroupAlgebraElt>> XA;
    std::map<std::string, std::vector<GroupAlgebraElt>> lamA;
};

NovikovProblem problem_from_json(const Json& j);

/// A flow scenario on the torus; "station" may be omitted, in which case it
/// is placed halfway between the top sink value and the bottom saddle value.
struct FlowScenario {
    flow::TorusMorseMap map;
    double delta = 1e-3;           // admissible bump amplitude cap
    double station = std::numeric_limits<double>::quiet_NaN();
    int kmax = 6;
    flow::IntegratorOptions opts;
};

FlowScenario scenario_from_json(const Json& j);

}  // namespace nov

#endif
