#include "nov/cramer.hpp"

namespace nov {

namespace {

PolyMatrix minor_of(const PolyMatrix& M, size_t row, size_t col) {
    size_t n = M.size();
    PolyMatrix R(n - 1, std::vector<Poly>(n - 1));
    for (size_t i = 0, ri = 0; i < n; ++i) {
        if (i == row) continue;
        for (size_t j = 0, rj = 0; j < n; ++j) {
            if (j == col) continue;
            R[ri][rj] = M[i][j];
            ++rj;
        }
        ++ri;
    }
    return R;
}

}  // namespace

Poly polymat_det(const PolyMatrix& M) {
    size_t n = M.size();
    if (n == 0) return {Int(1)};
    if (n == 1) return M[0][0];
    Poly det;
    for (size_t j = 0; j < n; ++j) {
        if (poly_is_zero(M[0][j])) continue;
        Poly term = poly_mul(M[0][j], polymat_det(minor_of(M, 0, j)));
        det = (j % 2 == 0) ? poly_add(det, term) : poly_sub(det, term);
    }
    return det;
}

CramerResult cramer_series(const IntMatrix& A, const IntVector& p, const IntCovector& lam) {
    const auto n = static_cast<size_t>(A.rows());
    if (A.cols() != A.rows() || p.size() != A.rows() || lam.size() != A.rows())
        throw std::invalid_argument("cramer_series: dimension mismatch");

    // M = 1 - A t as a polynomial matrix
    PolyMatrix M(n, std::vector<Poly>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Poly e{Int(i == j ? 1 : 0), Int(-A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))};
            poly_trim(e);
            M[i][j] = std::move(e);
        }

    Poly Q = polymat_det(M);

    // P = lam . adj(M) . p with adj(M)_{ij} = (-1)^{i+j} det(minor_{ji})
    Poly P;
    for (size_t i = 0; i < n; ++i) {
        Int li = lam(static_cast<Eigen::Index>(i));
        if (li == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            Int pj = p(static_cast<Eigen::Index>(j));
            if (pj == 0) continue;
            Poly cof = n == 1 ? Poly{Int(1)} : polymat_det(minor_of(M, j, i));
            Poly term = poly_scale(cof, li * pj);
            P = ((i + j) % 2 == 0) ? poly_add(P, term) : poly_sub(P, term);
        }
    }

    CramerResult r;
    r.raw_num = P;
    r.raw_den = Q;
    r.fn = rational_normalize(RationalFn(0, std::move(P), std::move(Q)));
    return r;
}

}  // namespace nov
