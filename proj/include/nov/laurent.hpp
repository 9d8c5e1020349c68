// Truncated Laurent series over the integers and their closed forms.
//
// A LaurentSeries stores the coefficients of exponents min_exp..trunc_order
// and says nothing about exponents above the truncation order.  A RationalFn
// is the exact object t^m P(t)/Q(t) with Q(0) = 1 and gcd(P,Q) = 1; every
// such function expands to a well-defined element of Z((t)).

#ifndef NOV_LAURENT_HPP
#define NOV_LAURENT_HPP

#include "nov/exp_bound.hpp"
#include "nov/poly.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nov {

struct LaurentSeries {
    int min_exp = 0;            // exponent of coeffs[0]
    std::vector<Int> coeffs;    // coefficients for min_exp .. min_exp+size-1
    int trunc_order = 0;        // coefficients beyond this exponent are unknown

    LaurentSeries() = default;
    LaurentSeries(int min_exp_, std::vector<Int> coeffs_, int trunc_order_)
        : min_exp(min_exp_), coeffs(std::move(coeffs_)), trunc_order(trunc_order_) {
        if (min_exp + static_cast<int>(coeffs.size()) - 1 > trunc_order)
            throw std::invalid_argument("LaurentSeries: coefficients past truncation order");
    }

    Int coeff(int k) const {
        if (k > trunc_order) throw std::out_of_range("LaurentSeries::coeff: beyond truncation order");
        int idx = k - min_exp;
        if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return 0;
        return coeffs[static_cast<size_t>(idx)];
    }

    /// Drop leading zero coefficients (raising min_exp) and trailing zeros.
    void normalize() {
        size_t lead = 0;
        while (lead < coeffs.size() && coeffs[lead] == 0) ++lead;
        if (lead > 0) {
            coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
            min_exp += static_cast<int>(lead);
        }
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
        if (coeffs.empty()) min_exp = 0;
    }

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (c != 0) return false;
        return true;
    }
};

inline bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.trunc_order != b.trunc_order) return false;
    int lo = std::min(a.min_exp, b.min_exp);
    for (int k = lo; k <= a.trunc_order; ++k)
        if (a.coeff(k) != b.coeff(k)) return false;
    return true;
}

inline LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
    int trunc = std::min(a.trunc_order, b.trunc_order);
    int lo = std::min(a.min_exp, b.min_exp);
    if (lo > trunc) lo = trunc;
    std::vector<Int> c(static_cast<size_t>(trunc - lo + 1), Int(0));
    for (int k = lo; k <= trunc; ++k) {
        Int v = 0;
        if (k >= a.min_exp && k <= a.trunc_order) v += a.coeff(k);
        if (k >= b.min_exp && k <= b.trunc_order) v += b.coeff(k);
        c[static_cast<size_t>(k - lo)] = v;
    }
    LaurentSeries r(lo, std::move(c), trunc);
    r.normalize();
    return r;
}

inline LaurentSeries series_neg(const LaurentSeries& a) {
    LaurentSeries r = a;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

inline LaurentSeries series_sub(const LaurentSeries& a, const LaurentSeries& b) {
    return series_add(a, series_neg(b));
}

/// Product of truncated series.  The result is reliable up to
/// min(a.min_exp + b.trunc, b.min_exp + a.trunc): beyond that exponent the
/// product would need coefficients neither factor knows.
inline LaurentSeries series_mul(const LaurentSeries& a_in, const LaurentSeries& b_in) {
    // known leading zeros extend the reliable range, so normalize first
    LaurentSeries a = a_in, b = b_in;
    a.normalize();
    b.normalize();
    int trunc = std::min(a.min_exp + b.trunc_order, b.min_exp + a.trunc_order);
    int lo = a.min_exp + b.min_exp;
    if (a.is_zero() || b.is_zero()) return LaurentSeries(0, {}, trunc);
    if (lo > trunc) return LaurentSeries(0, {}, trunc);
    std::vector<Int> c(static_cast<size_t>(trunc - lo + 1), Int(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs.size(); ++j) {
            int k = a.min_exp + static_cast<int>(i) + b.min_exp + static_cast<int>(j);
            if (k > trunc) break;
            c[static_cast<size_t>(k - lo)] += a.coeffs[i] * b.coeffs[j];
        }
    }
    LaurentSeries r(lo, std::move(c), trunc);
    r.normalize();
    return r;
}

// ---------------------------------------------------------------------------

struct RationalFn {
    int m = 0;   // power-of-t prefactor
    Poly P;      // numerator
    Poly Q;      // denominator, Q(0) = 1

    RationalFn() : Q{Int(1)} {}
    RationalFn(int m_, Poly P_, Poly Q_) : m(m_), P(std::move(P_)), Q(std::move(Q_)) {
        poly_trim(P);
        poly_trim(Q);
        if (Q.empty() || Q[0] != 1)
            throw std::invalid_argument("RationalFn: denominator must satisfy Q(0) = 1");
    }
};

inline bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.m == b.m && a.P == b.P && a.Q == b.Q;
}

/// Reduce P/Q by their (monic, rational) gcd and rescale so Q(0) = 1 again,
/// then pull the power of t dividing P into the prefactor m.  The reduced
/// pair stays integral whenever the fraction is a genuine Z((t)) element
/// in lowest terms (Fatou); a fractional outcome throws.
RationalFn rational_normalize(const RationalFn& f);

/// Expand t^m P/Q as a Laurent series with coefficients up to `order`.
LaurentSeries expand_rational(const RationalFn& f, int order);

enum class ReconstructError { InsufficientData };

struct ReconstructResult {
    std::optional<RationalFn> fn;
    ReconstructError error = ReconstructError::InsufficientData;
    bool ok() const { return fn.has_value(); }
};

/// Recover the minimal rational function generating a truncated series by
/// Berlekamp--Massey over Q.  The fit is only accepted when the minimal
/// recurrence is determined by the data (2d+1 coefficients for recurrence
/// length d) and re-expansion reproduces every known coefficient; otherwise
/// the result is InsufficientData and no function is returned.
ReconstructResult reconstruct_rational(const LaurentSeries& s);

/// True iff every known coefficient satisfies |c_k| <= C e^{k D}, decided
/// with exact rational enclosures of the exponentials.
bool coefficient_growth_check(const LaurentSeries& s, const Rat& C, const Rat& D);

}  // namespace nov

#endif
