// Twisted group rings and their Novikov completion.
//
// The group is G = Z^m x| Z with monodromy Phi in GL(m, Z): writing H = Z^m
// multiplicatively and theta for the generator of the Z factor, the twist is
// theta h theta^{-1} = Phi(h).  The weight xi: G -> Z kills H and sends theta
// to -1, so theta^k sits at level -k and the Novikov completion of ZG along
// xi consists of series sum_{k >= k0} a_k theta^k with a_k in ZH.
//
// H elements are exponent vectors; a GroupAlgebraElt is a finite ZH sum.

#ifndef NOV_TWISTED_HPP
#define NOV_TWISTED_HPP

#include "nov/exp_bound.hpp"
#include "nov/laurent.hpp"
#include "nov/scalar.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace nov {

using HVec = std::vector<long>;

struct TwistedGroup {
    int m = 0;
    IntMatrix Phi;      // automorphism of Z^m, det = +-1
    IntMatrix PhiInv;   // exact inverse

    TwistedGroup() : Phi(0, 0), PhiInv(0, 0) {}
    explicit TwistedGroup(IntMatrix Phi_);

    /// Apply Phi^power (any sign) to an exponent vector.
    HVec twist(const HVec& h, long power) const;
};

/// Finite element of the group ring ZH, H = Z^m.
struct GroupAlgebraElt {
    std::map<HVec, Int> terms;

    GroupAlgebraElt() = default;
    static GroupAlgebraElt monomial(const HVec& h, const Int& c) {
        GroupAlgebraElt e;
        if (c != 0) e.terms[h] = c;
        return e;
    }
    static GroupAlgebraElt constant(int m, const Int& c) {
        return monomial(HVec(static_cast<size_t>(m), 0), c);
    }

    bool is_zero() const { return terms.empty(); }
    void add_term(const HVec& h, const Int& c);
};

bool operator==(const GroupAlgebraElt& a, const GroupAlgebraElt& b);
GroupAlgebraElt ga_add(const GroupAlgebraElt& a, const GroupAlgebraElt& b);
/// In-place `a += b`, avoiding the copy `a = ga_add(a, b)` would make.
void ga_accumulate(GroupAlgebraElt& a, const GroupAlgebraElt& b);
GroupAlgebraElt ga_neg(const GroupAlgebraElt& a);
GroupAlgebraElt ga_sub(const GroupAlgebraElt& a, const GroupAlgebraElt& b);
GroupAlgebraElt ga_mul(const GroupAlgebraElt& a, const GroupAlgebraElt& b);
GroupAlgebraElt ga_scale(const GroupAlgebraElt& a, const Int& s);
/// Image of the element under Phi^power applied to every exponent vector.
GroupAlgebraElt ga_twist(const TwistedGroup& G, const GroupAlgebraElt& a, long power);
/// Sum of absolute values of the coefficients.
Int l1_norm(const GroupAlgebraElt& a);

/// A group element h theta^p of G.
struct GroupElt {
    HVec h;
    long theta_pow = 0;
};

GroupElt group_mul(const TwistedGroup& G, const GroupElt& a, const GroupElt& b);
GroupElt group_inv(const TwistedGroup& G, const GroupElt& a);

// ---------------------------------------------------------------------------

/// Truncated element of the Novikov completion: the ZH coefficients of
/// theta^{min_power} .. theta^{trunc_power}; higher powers are unknown.
struct NovikovElt {
    int min_power = 0;
    std::vector<GroupAlgebraElt> levels;
    int trunc_power = 0;

    NovikovElt() = default;
    NovikovElt(int min_power_, std::vector<GroupAlgebraElt> levels_, int trunc_power_)
        : min_power(min_power_), levels(std::move(levels_)), trunc_power(trunc_power_) {
        if (min_power + static_cast<int>(levels.size()) - 1 > trunc_power)
            throw std::invalid_argument("NovikovElt: coefficients past truncation");
    }

    GroupAlgebraElt coeff(int k) const;
    void normalize();
    bool is_zero() const;
};

bool operator==(const NovikovElt& a, const NovikovElt& b);
NovikovElt nov_add(const NovikovElt& a, const NovikovElt& b);
NovikovElt nov_neg(const NovikovElt& a);
NovikovElt nov_sub(const NovikovElt& a, const NovikovElt& b);
/// Twisted product: (a theta^p)(b theta^q) = a Phi^p(b) theta^{p+q}.
NovikovElt nov_mul(const TwistedGroup& G, const NovikovElt& a, const NovikovElt& b);
/// Conjugation theta x theta^{-1}, i.e. Phi on every coefficient.
NovikovElt conj_by_theta(const TwistedGroup& G, const NovikovElt& x);
/// Left/right multiplication by a single group element.
NovikovElt nov_mul_group(const TwistedGroup& G, const GroupElt& g, const NovikovElt& x);
NovikovElt nov_mul_group(const TwistedGroup& G, const NovikovElt& x, const GroupElt& g);

/// Keep only the part at levels >= c (powers theta^k with -k >= c).
NovikovElt truncate_at_level(const NovikovElt& x, int c);

/// Partial-sum norm |x_[c]|: total l1 mass at levels >= c.
Int level_partial_norm(const NovikovElt& x, int c);

/// True iff |x_[c]| <= A e^{-B c} for every level c represented in x,
/// decided exactly.
bool check_exponential_growth(const NovikovElt& x, const Rat& A, const Rat& B);

/// For m = 0 the completion is Z((t)) on the nose (theta -> t).
LaurentSeries to_laurent(const NovikovElt& x);
NovikovElt from_laurent(const LaurentSeries& s);

// ---------------------------------------------------------------------------

/// Type-(L) presentation g1 (sum_{s>=0} Y A^s X) g2 where Y is a ZH covector,
/// X a ZH vector, and A a matrix with entries in (ZH) theta stored by their
/// ZH parts.
struct TypeLElement {
    GroupElt g1;
    std::vector<GroupAlgebraElt> Y;               // 1 x n
    std::vector<std::vector<GroupAlgebraElt>> A;  // n x n, implicit theta
    std::vector<GroupAlgebraElt> X;               // n x 1
    GroupElt g2;
};

/// Expand the series through theta-power `order` (relative to the intrinsic
/// s = 0 term, before the g1/g2 shift).
NovikovElt expand_typeL(const TwistedGroup& G, const TypeLElement& e, int order);

struct GrowthConstants {
    Rat A;
    Rat B;
};

/// Certified constants with |expand(e)_[c]| <= A e^{-B c} for all c: the norm
/// of the s-th term is bounded through ||A||, and B is a rational number whose
/// exponential provably dominates the base of that bound.
GrowthConstants growth_constants_for_typeL(const TwistedGroup& G, const TypeLElement& e);

}  // namespace nov

#endif
