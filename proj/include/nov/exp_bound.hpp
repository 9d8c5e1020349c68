// Certified rational enclosures of e^x for rational x.
//
// Growth certificates of the form |n_k| <= C e^{kD} must be checked exactly,
// so we never touch floating point here: the Taylor partial sum gives a lower
// bound for x >= 0, and a geometric tail estimate gives an upper bound.
// Negative arguments go through 1/e^{|x|}.  Comparisons against exact
// rationals are decided by refining the enclosure; for x != 0 the value e^x
// is irrational, so strict comparisons always terminate.

#ifndef NOV_EXP_BOUND_HPP
#define NOV_EXP_BOUND_HPP

#include "nov/scalar.hpp"

#include <stdexcept>

namespace nov {

struct RatInterval {
    Rat lo;
    Rat hi;
};

/// Enclosure of e^x using an N-term Taylor expansion.  Requires x >= 0 and
/// N + 2 > x so that the tail is bounded by a convergent geometric series.
inline RatInterval exp_enclosure_nonneg(const Rat& x, int terms) {
    Rat sum = 0;
    Rat term = 1;
    for (int i = 0; i < terms; ++i) {
        sum += term;
        term = term * x / (i + 1);
    }
    // tail = sum_{i >= terms} x^i/i! <= term * 1/(1 - x/(terms+1))
    Rat ratio = x / (terms + 1);
    if (ratio >= 1) throw std::invalid_argument("exp_enclosure_nonneg: too few terms for argument");
    Rat tail = term / (1 - ratio);
    return {sum, sum + tail};
}

/// Enclosure of e^x for arbitrary rational x; `terms` controls the precision.
inline RatInterval exp_enclosure(const Rat& x, int terms) {
    if (x >= 0) return exp_enclosure_nonneg(x, terms);
    RatInterval pos = exp_enclosure_nonneg(Rat(-x), terms);
    return {1 / pos.hi, 1 / pos.lo};
}

inline Rat rat_pow(Rat base, long e) {
    bool inv = e < 0;
    if (inv) e = -e;
    Rat acc = 1;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return inv ? Rat(1 / acc) : acc;
}

/// Decide whether v <= C * e^{k x} holds, exactly.  The enclosure is built at
/// the small argument x and raised to the k-th power, which keeps the exact
/// rationals manageable even for |k x| in the hundreds.  Requires that
/// equality does not occur with e^{k x} irrational (k x != 0); for k x == 0
/// the comparison is settled directly.
inline bool cmp_le_times_exp_pow(const Rat& v, const Rat& C, const Rat& x, long k) {
    if (x == 0 || k == 0) return v <= C;
    if (C == 0) return v <= 0;
    long num_terms = 8;
    Rat ax = x < 0 ? Rat(-x) : x;
    while (Rat(num_terms + 1) <= ax) num_terms *= 2;
    for (int rounds = 0; rounds < 64; ++rounds) {
        RatInterval e = exp_enclosure(x, static_cast<int>(num_terms));
        Rat lo, hi;
        if (k > 0) {
            lo = rat_pow(e.lo, k);
            hi = rat_pow(e.hi, k);
        } else {
            lo = rat_pow(e.hi, k);
            hi = rat_pow(e.lo, k);
        }
        if (C > 0) {
            if (v <= C * lo) return true;
            if (v > C * hi) return false;
        } else {
            if (v <= C * hi) return true;
            if (v > C * lo) return false;
        }
        num_terms *= 2;
        // keep the per-term rationals small: canonicalized intervals only
    }
    throw std::runtime_error("cmp_le_times_exp_pow: enclosure failed to separate (equality with irrational?)");
}

/// Decide whether v <= C * e^{x} holds, exactly.
inline bool cmp_le_times_exp(const Rat& v, const Rat& C, const Rat& x) {
    return cmp_le_times_exp_pow(v, C, x, 1);
}

}  // namespace nov

#endif
