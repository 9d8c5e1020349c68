// Chain complexes: integer Morse complexes, circle-valued incidence data,
// and Novikov complexes over Z((t)).
//
// The circle-valued incidence between critical points x, y is the count of
// flow lines graded by how often they cross a reference fiber:
//   n(x, y) = sum_{k >= 1} lam(h^{k-1} X) t^k
// for a return matrix h, an initial crossing vector X and a counting
// functional lam.  Its closed form is t times the matrix-iteration series of
// (h, X, lam), a rational function with denominator det(1 - h t).

#ifndef NOV_CHAIN_HPP
#define NOV_CHAIN_HPP

#include "nov/cramer.hpp"
#include "nov/semilinear.hpp"
#include "nov/twisted.hpp"

namespace nov {

// ---- integer Morse complexes ----------------------------------------------

struct ChainComplexZ {
    std::vector<int> ranks;        // rank of C_k
    std::vector<IntMatrix> d;      // d[k]: C_k -> C_{k-1}; d[0] unused
};

/// Validate shapes and package incidence matrices into a complex.
ChainComplexZ build_morse_complex(std::vector<int> ranks, std::vector<IntMatrix> boundaries);

bool check_d2(const ChainComplexZ& c);

struct HomologySummary {
    int betti = 0;
    std::vector<Int> torsion;  // invariant factors > 1
};

/// Diagonal of the Smith normal form (nonnegative, divisibility chain).
std::vector<Int> smith_invariants(IntMatrix M);

std::vector<HomologySummary> homology_Z(const ChainComplexZ& c);

// ---- circle-valued incidence over Z((t)) ----------------------------------

struct CyclicIncidence {
    IntMatrix h;      // return matrix on fiber classes
    IntVector X;      // first-crossing vector
    IntCovector lam;  // signed counting functional
};

LaurentSeries incidence_series(const CyclicIncidence& inc, int order);
RationalFn incidence_rational(const CyclicIncidence& inc);

// ---- equivariant incidence over the twisted completion --------------------

/// The equivariant incidence attached to a type-(L) datum: each fiber return
/// contributes one power of theta, so the series is
///   n(x, y) = g1 (sum_{s >= 0} Y A^s X theta) g2  (term s at theta^{s+1}).
NovikovElt equivariant_incidence(const TwistedGroup& G, const TypeLElement& e, int order);

/// Changing base lifts x -> x g1, y -> y g2 conjugates the incidence:
/// n(x g1, y g2) = g2^{-1} n(x, y) g1.
NovikovElt base_change(const TwistedGroup& G, const NovikovElt& n, const GroupElt& g1,
                       const GroupElt& g2);

// ---- Novikov complexes over Z((t)) ----------------------------------------

/// Field-style arithmetic on RationalFn; division is restricted to
/// Z((t))-units so the Q(0) = 1 invariant survives.
RationalFn rf_add(const RationalFn& a, const RationalFn& b);
RationalFn rf_neg(const RationalFn& a);
RationalFn rf_sub(const RationalFn& a, const RationalFn& b);
RationalFn rf_mul(const RationalFn& a, const RationalFn& b);
bool rf_is_zero(const RationalFn& a);
/// Unit of Z((t)): lowest series coefficient is +-1.
bool rf_is_unit(const RationalFn& a);
RationalFn rf_inv_unit(const RationalFn& a);
RationalFn rf_div_unit(const RationalFn& a, const RationalFn& b);

using RFMatrix = std::vector<std::vector<RationalFn>>;

struct NovikovComplex {
    std::vector<int> ranks;
    std::vector<RFMatrix> d;  // d[k]: C_k -> C_{k-1}; d[0] unused
};

NovikovComplex assemble_novikov_complex(std::vector<int> ranks, std::vector<RFMatrix> boundaries);

/// d^2 = 0, checked exactly on the closed forms.
bool check_d2_novikov(const NovikovComplex& c);

/// Number of Z((t))-unit pivots Gaussian elimination finds; equals the rank
/// when every pivot stage exposes a unit, in which case the cokernel of the
/// map is free over Z((t)).
int unit_rank(RFMatrix M);

/// True iff every homology module vanishes, certified by unit-pivot
/// elimination (each boundary map must reduce completely by unit pivots and
/// the ranks must pair off).
bool novikov_complex_acyclic(const NovikovComplex& c);

}  // namespace nov

#endif
