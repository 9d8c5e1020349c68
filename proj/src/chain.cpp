#include "nov/chain.hpp"

namespace nov {

ChainComplexZ build_morse_complex(std::vector<int> ranks, std::vector<IntMatrix> boundaries) {
    if (boundaries.size() != ranks.size())
        throw std::invalid_argument("build_morse_complex: need one boundary slot per degree");
    for (size_t k = 1; k < ranks.size(); ++k) {
        if (boundaries[k].rows() != ranks[k - 1] || boundaries[k].cols() != ranks[k])
            throw std::invalid_argument("build_morse_complex: boundary shape mismatch");
    }
    return {std::move(ranks), std::move(boundaries)};
}

bool check_d2(const ChainComplexZ& c) {
    for (size_t k = 2; k < c.d.size(); ++k) {
        IntMatrix prod = c.d[k - 1] * c.d[k];
        for (Eigen::Index i = 0; i < prod.rows(); ++i)
            for (Eigen::Index j = 0; j < prod.cols(); ++j)
                if (prod(i, j) != 0) return false;
    }
    return true;
}

std::vector<Int> smith_invariants(IntMatrix M) {
    const Eigen::Index rows = M.rows(), cols = M.cols();
    std::vector<Int> inv;
    Eigen::Index top = 0;
    while (top < rows && top < cols) {
        // locate a nonzero entry of minimal absolute value in the working block
        Eigen::Index pr = -1, pc = -1;
        Int best = 0;
        for (Eigen::Index i = top; i < rows; ++i)
            for (Eigen::Index j = top; j < cols; ++j) {
                if (M(i, j) == 0) continue;
                Int a = abs_int(M(i, j));
                if (pr < 0 || a < best) {
                    best = a;
                    pr = i;
                    pc = j;
                }
            }
        if (pr < 0) break;  // block is zero
        M.row(top).swap(M.row(pr));
        M.col(top).swap(M.col(pc));
        bool clean = true;
        // clear the pivot row and column by division with remainder
        for (Eigen::Index i = top + 1; i < rows; ++i) {
            if (M(i, top) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M(i, top).get_mpz_t(), M(top, top).get_mpz_t());
            M.row(i) -= q * M.row(top);
            if (M(i, top) != 0) clean = false;
        }
        for (Eigen::Index j = top + 1; j < cols; ++j) {
            if (M(top, j) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M(top, j).get_mpz_t(), M(top, top).get_mpz_t());
            M.col(j) -= q * M.col(top);
            if (M(top, j) != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders appeared; pick a new pivot
        // ensure the pivot divides the rest of the block
        bool divides = true;
        for (Eigen::Index i = top + 1; i < rows && divides; ++i)
            for (Eigen::Index j = top + 1; j < cols && divides; ++j) {
                if (M(i, j) == 0) continue;
                Int r;
                mpz_fdiv_r(r.get_mpz_t(), M(i, j).get_mpz_t(), M(top, top).get_mpz_t());
                if (r != 0) {
                    M.row(top) += M.row(i);
                    divides = false;
                }
            }
        if (!divides) continue;
        inv.push_back(abs_int(M(top, top)));
        ++top;
    }
    return inv;
}

std::vector<HomologySummary> homology_Z(const ChainComplexZ& c) {
    size_t n = c.ranks.size();
    std::vector<std::vector<Int>> invs(n + 1);
    for (size_t k = 1; k < n; ++k) invs[k] = smith_invariants(c.d[k]);
    std::vector<HomologySummary> h(n);
    for (size_t k = 0; k < n; ++k) {
        int rk = static_cast<int>(invs[k].size());          // rank of d_k (out of C_k)
        int rk1 = k + 1 < n ? static_cast<int>(invs[k + 1].size()) : 0;  // rank of d_{k+1}
        h[k].betti = c.ranks[k] - rk - rk1;
        if (k + 1 < n)
            for (const auto& f : invs[k + 1])
                if (f > 1) h[k].torsion.push_back(f);
    }
    return h;
}

// ---------------------------------------------------------------------------

LaurentSeries incidence_series(const CyclicIncidence& inc, int order) {
    std::vector<Int> coeffs;
    IntVector v = inc.X;
    for (int k = 1; k <= order; ++k) {
        coeffs.push_back((inc.lam * v)(0, 0));
        if (k < order) v = (inc.h * v).eval();
    }
    LaurentSeries s(1, std::move(coeffs), order);
    s.normalize();
    return s;
}

RationalFn incidence_rational(const CyclicIncidence& inc) {
    CramerResult cr = cramer_series(inc.h, inc.X, inc.lam);
    RationalFn f = cr.fn;
    f.m += 1;  // one reference-fiber crossing before the first count
    return rational_normalize(f);
}

NovikovElt equivariant_incidence(const TwistedGroup& G, const TypeLElement& e, int order) {
    // fold the extra fiber crossing theta into the right framing
    TypeLElement shifted = e;
    GroupElt theta{HVec(static_cast<size_t>(G.m), 0), 1};
    shifted.g2 = group_mul(G, theta, e.g2);
    NovikovElt raw = expand_typeL(G, shifted, order);
    // report uniformly through theta^order whatever the framing shift is
    if (raw.trunc_power <= order) return raw;  // negative framing shift: keep honest truncation
    std::vector<GroupAlgebraElt> lv;
    for (int k = raw.min_power; k <= order; ++k) lv.push_back(raw.coeff(k));
    NovikovElt out(std::min(raw.min_power, order), std::move(lv), order);
    out.normalize();
    return out;
}

NovikovElt base_change(const TwistedGroup& G, const NovikovElt& n, const GroupElt& g1,
                       const GroupElt& g2) {
    return nov_mul_group(G, nov_mul_group(G, group_inv(G, g2), n), g1);
}

// ---------------------------------------------------------------------------

bool rf_is_zero(const RationalFn& a) { return poly_is_zero(a.P); }

RationalFn rf_add(const RationalFn& a, const RationalFn& b) {
    if (rf_is_zero(a)) return b;
    if (rf_is_zero(b)) return a;
    int m = std::min(a.m, b.m);
    Poly pa = poly_shift(poly_mul(a.P, b.Q), a.m - m);
    Poly pb = poly_shift(poly_mul(b.P, a.Q), b.m - m);
    return rational_normalize(RationalFn(m, poly_add(pa, pb), poly_mul(a.Q, b.Q)));
}

RationalFn rf_neg(const RationalFn& a) {
    RationalFn r = a;
    r.P = poly_neg(r.P);
    return r;
}

RationalFn rf_sub(const RationalFn& a, const RationalFn& b) { return rf_add(a, rf_neg(b)); }

RationalFn rf_mul(const RationalFn& a, const RationalFn& b) {
    if (rf_is_zero(a) || rf_is_zero(b)) return RationalFn();
    return rational_normalize(RationalFn(a.m + b.m, poly_mul(a.P, b.P), poly_mul(a.Q, b.Q)));
}

bool rf_is_unit(const RationalFn& a) {
    // Q(0) = 1, so the lowest series coefficient is the lowest coefficient
    // of P; after rational_normalize that is P[0]
    if (rf_is_zero(a)) return false;
    RationalFn n = rational_normalize(a);
    return n.P[0] == 1 || n.P[0] == -1;
}

RationalFn rf_inv_unit(const RationalFn& a) {
    RationalFn n = rational_normalize(a);
    if (n.P.empty() || (n.P[0] != 1 && n.P[0] != -1))
        throw std::invalid_argument("rf_inv_unit: not a unit of Z((t))");
    // (t^m P/Q)^{-1} = t^{-m} Q/P, with the sign arranged so the new
    // denominator has constant term 1
    Poly newP = n.Q, newQ = n.P;
    if (newQ[0] == -1) {
        newP = poly_neg(newP);
        newQ = poly_neg(newQ);
    }
    return rational_normalize(RationalFn(-n.m, std::move(newP), std::move(newQ)));
}

RationalFn rf_div_unit(const RationalFn& a, const RationalFn& b) { return rf_mul(a, rf_inv_unit(b)); }

NovikovComplex assemble_novikov_complex(std::vector<int> ranks, std::vector<RFMatrix> boundaries) {
    if (boundaries.size() != ranks.size())
        throw std::invalid_argument("assemble_novikov_complex: need one boundary slot per degree");
    for (size_t k = 1; k < ranks.size(); ++k) {
        if (static_cast<int>(boundaries[k].size()) != ranks[k - 1])
            throw std::invalid_argument("assemble_novikov_complex: boundary shape mismatch");
        for (const auto& row : boundaries[k])
            if (static_cast<int>(row.size()) != ranks[k])
                throw std::invalid_argument("assemble_novikov_complex: boundary shape mismatch");
    }
    return {std::move(ranks), std::move(boundaries)};
}

bool check_d2_novikov(const NovikovComplex& c) {
    for (size_t k = 2; k < c.d.size(); ++k) {
        const RFMatrix& A = c.d[k - 1];
        const RFMatrix& B = c.d[k];
        for (size_t i = 0; i < A.size(); ++i)
            for (size_t j = 0; B.size() > 0 && j < B[0].size(); ++j) {
                RationalFn s;
                for (size_t l = 0; l < B.size(); ++l) s = rf_add(s, rf_mul(A[i][l], B[l][j]));
                if (!rf_is_zero(s)) return false;
            }
    }
    return true;
}

int unit_rank(RFMatrix M) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    size_t top = 0;
    int rank = 0;
    while (top < rows && top < cols) {
        // find a unit pivot in the working block
        size_t pr = rows, pc = cols;
        bool any_nonzero = false;
        for (size_t i = top; i < rows && pr == rows; ++i)
            for (size_t j = top; j < cols; ++j) {
                if (rf_is_zero(M[i][j])) continue;
                any_nonzero = true;
                if (rf_is_unit(M[i][j])) {
                    pr = i;
                    pc = j;
                    break;
                }
            }
        if (!any_nonzero) return rank;
        if (pr == rows) return -1;  // nonzero block, but no unit pivot to certify with
        std::swap(M[top], M[pr]);
        for (size_t i = 0; i < rows; ++i) std::swap(M[i][top], M[i][pc]);
        RationalFn piv = M[top][top];
        for (size_t i = top + 1; i < rows; ++i) {
            if (rf_is_zero(M[i][top])) continue;
            RationalFn f = rf_div_unit(M[i][top], piv);
            for (size_t j = top; j < cols; ++j) M[i][j] = rf_sub(M[i][j], rf_mul(f, M[top][j]));
        }
        ++rank;
        ++top;
    }
    // rows/cols exhausted: nothing left to certify unless a nonzero remainder hides
    for (size_t i = top; i < rows; ++i)
        for (size_t j = top; j < cols; ++j)
            if (!rf_is_zero(M[i][j])) return -1;
    return rank;
}

bool novikov_complex_acyclic(const NovikovComplex& c) {
    size_t n = c.ranks.size();
    std::vector<int> u(n + 1, 0);
    for (size_t k = 1; k < n; ++k) {
        u[k] = unit_rank(c.d[k]);
        if (u[k] < 0) return false;  // cannot certify freeness of the cokernel
    }
    for (size_t k = 0; k < n; ++k) {
        int above = k + 1 < n ? u[k + 1] : 0;
        if (c.ranks[k] != u[k] + above) return false;
    }
    return true;
}

}  // namespace nov
