// Dense univariate polynomials with exact integer coefficients.
//
// A Poly is a coefficient vector c[0..d] representing c[0] + c[1] t + ... .
// The zero polynomial is the empty vector.  These are the workhorses behind
// the closed-form incidence fractions, so everything here is exact.

#ifndef NOV_POLY_HPP
#define NOV_POLY_HPP

#include "nov/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace nov {

using Poly = std::vector<Int>;

inline void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline bool poly_is_zero(const Poly& p) {
    for (const auto& c : p)
        if (c != 0) return false;
    return true;
}

inline Int poly_coeff(const Poly& p, int k) {
    if (k < 0 || k >= static_cast<int>(p.size())) return 0;
    return p[static_cast<size_t>(k)];
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

inline Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& c : r) c = -c;
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (poly_is_zero(a) || poly_is_zero(b)) return {};
    Poly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    poly_trim(r);
    return r;
}

inline Poly poly_scale(const Poly& a, const Int& s) {
    if (s == 0) return {};
    Poly r = a;
    for (auto& c : r) c *= s;
    return r;
}

/// Multiply by t^k (k >= 0).
inline Poly poly_shift(const Poly& a, int k) {
    if (poly_is_zero(a)) return {};
    Poly r(a.size() + static_cast<size_t>(k), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i + static_cast<size_t>(k)] = a[i];
    return r;
}

inline Int poly_content(const Poly& p) {
    Int g = 0;
    for (const auto& c : p) {
        if (c == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    return g;  // 0 for the zero polynomial
}

inline Int poly_eval(const Poly& p, const Int& x) {
    Int acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// ---- rational-coefficient helpers (used for gcd normalisation) ----

using PolyQ = std::vector<Rat>;

inline void polyq_trim(PolyQ& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline PolyQ polyq_from(const Poly& p) {
    PolyQ r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = Rat(p[i]);
    return r;
}

/// Polynomial remainder of a mod b over the rationals; b must be nonzero.
inline PolyQ polyq_rem(PolyQ a, const PolyQ& b) {
    if (b.empty()) throw std::invalid_argument("polyq_rem: division by zero polynomial");
    while (a.size() >= b.size()) {
        Rat q = a.back() / b.back();
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
        a.pop_back();
        polyq_trim(a);
        if (a.empty()) break;
    }
    return a;
}

/// Monic gcd over the rationals (Euclid).  gcd(0,0) = 0.
inline PolyQ polyq_gcd(PolyQ a, PolyQ b) {
    polyq_trim(a);
    polyq_trim(b);
    while (!b.empty()) {
        PolyQ r = polyq_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

/// Exact quotient a / b over the rationals; throws if the division is not exact.
inline PolyQ polyq_div_exact(PolyQ a, const PolyQ& b) {
    if (b.empty()) throw std::invalid_argument("polyq_div_exact: division by zero polynomial");
    polyq_trim(a);
    if (a.empty()) return {};
    if (a.size() < b.size()) throw std::invalid_argument("polyq_div_exact: not divisible");
    PolyQ q(a.size() - b.size() + 1, Rat(0));
    while (a.size() >= b.size()) {
        Rat c = a.back() / b.back();
        size_t off = a.size() - b.size();
        q[off] = c;
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a.pop_back();
        polyq_trim(a);
        if (a.empty()) break;
        if (a.size() < b.size()) throw std::invalid_argument("polyq_div_exact: not divisible");
    }
    return q;
}

}  // namespace nov

#endif
