// theta-semilinear endomorphisms of free ZH-modules.
//
// An endomorphism here is x -> xi . Phi(x) for a ZH matrix xi: the matrix of
// a module map that twists scalars by the monodromy before acting.  Iterates
// obey (xi theta)^n = eta_n theta^n with eta_n in ZH-matrices, which gives a
// second, independent route to n-fold application.

#ifndef NOV_SEMILINEAR_HPP
#define NOV_SEMILINEAR_HPP

#include "nov/twisted.hpp"

namespace nov {

using GAVector = std::vector<GroupAlgebraElt>;
using GAMatrix = std::vector<std::vector<GroupAlgebraElt>>;

struct SemilinearEndo {
    GAMatrix xi;  // n x n over ZH

    size_t dim() const { return xi.size(); }
};

/// One application: (endo x)_j = sum_i xi[j][i] Phi(x_i).
GAVector apply(const TwistedGroup& G, const SemilinearEndo& endo, const GAVector& x);

/// The ZH matrix eta_n with (xi theta)^n = eta_n theta^n, computed by the
/// recurrence eta_{n+1} = xi . Phi(eta_n), eta_0 = 1.
GAMatrix power_matrix(const TwistedGroup& G, const SemilinearEndo& endo, int n);

/// n-fold application in one step: eta_n . Phi^n(x).
GAVector apply_power(const TwistedGroup& G, const SemilinearEndo& endo, int n, const GAVector& x);

/// A sampled value of a ZH-linear functional: l(e_i h0) = v.
struct HomTriple {
    size_t i = 0;
    HVec h0;
    GroupAlgebraElt v;
};

/// Reconstruct the covector of a ZH-linear functional from sampled values:
/// l(e_i h0) = l_i h0 forces l_i = v h0^{-1}.  Generators without a sample
/// stay zero; conflicting samples throw.
GAVector underline_hom(const TwistedGroup& G, size_t n, const std::vector<HomTriple>& samples);

/// Evaluate a covector on a vector: sum_i l_i x_i.
GroupAlgebraElt pair_covector(const GAVector& l, const GAVector& x);

/// The generating series sum_{n >= 0} l(endo^n x) theta^n as an element of
/// the Novikov completion.
NovikovElt summed_series(const TwistedGroup& G, const SemilinearEndo& endo, const GAVector& l,
                         const GAVector& x, int order);

}  // namespace nov

#endif
