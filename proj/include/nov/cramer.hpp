// Closed form for generating series of matrix iteration.
//
// For an integer matrix A, a vector p and a covector lam, the series
// sum_k lam(A^k p) t^k equals P(t)/Q(t) with Q(t) = det(1 - A t) and
// P = lam . adj(1 - A t) . p.  Matrix sizes stay small (n <= 5), so the
// determinant and adjugate of the polynomial matrix are computed by
// Laplace expansion.

#ifndef NOV_CRAMER_HPP
#define NOV_CRAMER_HPP

#include "nov/laurent.hpp"

namespace nov {

using PolyMatrix = std::vector<std::vector<Poly>>;

Poly polymat_det(const PolyMatrix& M);

struct CramerResult {
    RationalFn fn;   // gcd-reduced closed form, Q(0) = 1
    Poly raw_num;    // lam . adj(1 - A t) . p, before reduction
    Poly raw_den;    // det(1 - A t), before reduction
};

CramerResult cramer_series(const IntMatrix& A, const IntVector& p, const IntCovector& lam);

}  // namespace nov

#endif
