#include "nov/semilinear.hpp"

namespace nov {

namespace {

GAVector twist_vec(const TwistedGroup& G, const GAVector& x, long power) {
    GAVector r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = ga_twist(G, x[i], power);
    return r;
}

GAMatrix ga_mat_mul(const GAMatrix& a, const GAMatrix& b) {
    size_t n = a.size();
    GAMatrix r(n, GAVector(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            GroupAlgebraElt v;
            for (size_t k = 0; k < n; ++k) {
                if (a[i][k].is_zero() || b[k][j].is_zero()) continue;
                ga_accumulate(v, ga_mul(a[i][k], b[k][j]));
            }
            r[i][j] = std::move(v);
        }
    return r;
}

GAMatrix twist_mat(const TwistedGroup& G, const GAMatrix& a, long power) {
    GAMatrix r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = twist_vec(G, a[i], power);
    return r;
}

}  // namespace

GAVector apply(const TwistedGroup& G, const SemilinearEndo& endo, const GAVector& x) {
    size_t n = endo.dim();
    if (x.size() != n) throw std::invalid_argument("apply: dimension mismatch");
    GAVector px = twist_vec(G, x, 1);
    GAVector r(n);
    for (size_t j = 0; j < n; ++j) {
        GroupAlgebraElt v;
        for (size_t i = 0; i < n; ++i) {
            if (endo.xi[j][i].is_zero() || px[i].is_zero()) continue;
            ga_accumulate(v, ga_mul(endo.xi[j][i], px[i]));
        }
        r[j] = std::move(v);
    }
    return r;
}

GAMatrix power_matrix(const TwistedGroup& G, const SemilinearEndo& endo, int n) {
    size_t d = endo.dim();
    GAMatrix eta(d, GAVector(d));
    for (size_t i = 0; i < d; ++i) eta[i][i] = GroupAlgebraElt::constant(G.m, 1);
    for (int s = 0; s < n; ++s) eta = ga_mat_mul(endo.xi, twist_mat(G, eta, 1));
    return eta;
}

GAVector apply_power(const TwistedGroup& G, const SemilinearEndo& endo, int n, const GAVector& x) {
    if (x.size() != endo.dim()) throw std::invalid_argument("apply_power: dimension mismatch");
    GAMatrix eta = power_matrix(G, endo, n);
    GAVector px = twist_vec(G, x, n);
    GAVector r(endo.dim());
    for (size_t j = 0; j < endo.dim(); ++j) {
        GroupAlgebraElt v;
        for (size_t i = 0; i < endo.dim(); ++i) {
            if (eta[j][i].is_zero() || px[i].is_zero()) continue;
            ga_accumulate(v, ga_mul(eta[j][i], px[i]));
        }
        r[j] = std::move(v);
    }
    return r;
}

GAVector underline_hom(const TwistedGroup& G, size_t n, const std::vector<HomTriple>& samples) {
    GAVector l(n);
    std::vector<bool> seen(n, false);
    for (const auto& s : samples) {
        if (s.i >= n) throw std::invalid_argument("underline_hom: generator index out of range");
        HVec inv = s.h0;
        for (auto& e : inv) e = -e;
        GroupAlgebraElt li = ga_mul(s.v, GroupAlgebraElt::monomial(inv, Int(1)));
        if (seen[s.i]) {
            if (!(l[s.i] == li)) throw std::invalid_argument("underline_hom: inconsistent samples");
        } else {
            l[s.i] = std::move(li);
            seen[s.i] = true;
        }
    }
    (void)G;
    return l;
}

GroupAlgebraElt pair_covector(const GAVector& l, const GAVector& x) {
    if (l.size() != x.size()) throw std::invalid_argument("pair_covector: dimension mismatch");
    GroupAlgebraElt v;
    for (size_t i = 0; i < l.size(); ++i) {
        if (l[i].is_zero() || x[i].is_zero()) continue;
        ga_accumulate(v, ga_mul(l[i], x[i]));
    }
    return v;
}

NovikovElt summed_series(const TwistedGroup& G, const SemilinearEndo& endo, const GAVector& l,
                         const GAVector& x, int order) {
    GAVector cur = x;
    std::vector<GroupAlgebraElt> lv;
    for (int s = 0; s <= order; ++s) {
        lv.push_back(pair_covector(l, cur));
        if (s < order) cur = apply(G, endo, cur);
    }
    NovikovElt r(0, std::move(lv), order);
    r.normalize();
    return r;
}

}  // namespace nov
