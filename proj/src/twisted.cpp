#include "nov/twisted.hpp"

#include <algorithm>

namespace nov {

namespace {

Int int_det(const IntMatrix& M) {
    const auto n = M.rows();
    if (n == 0) return 1;
    if (n == 1) return M(0, 0);
    Int det = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (M(0, j) == 0) continue;
        IntMatrix sub(n - 1, n - 1);
        for (Eigen::Index i = 1; i < n; ++i)
            for (Eigen::Index k = 0, c = 0; k < n; ++k) {
                if (k == j) continue;
                sub(i - 1, c++) = M(i, k);
            }
        Int term = M(0, j) * int_det(sub);
        det += (j % 2 == 0) ? term : Int(-term);
    }
    return det;
}

IntMatrix int_adjugate(const IntMatrix& M) {
    const auto n = M.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            IntMatrix sub(n - 1, n - 1);
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    sub(rr, cc++) = M(r, c);
                }
                ++rr;
            }
            Int cof = int_det(sub);
            adj(i, j) = ((i + j) % 2 == 0) ? cof : Int(-cof);
        }
    return adj;
}

IntMatrix int_mat_pow(const IntMatrix& M, long p) {
    const auto n = M.rows();
    IntMatrix r = IntMatrix::Identity(n, n);
    IntMatrix base = M;
    while (p > 0) {
        if (p & 1) r = (r * base).eval();
        base = (base * base).eval();
        p >>= 1;
    }
    return r;
}

HVec apply_int_mat(const IntMatrix& M, const HVec& h) {
    const auto n = M.rows();
    HVec out(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Int v = 0;
        for (Eigen::Index j = 0; j < n; ++j) v += M(i, j) * h[static_cast<size_t>(j)];
        if (!v.fits_slong_p()) throw std::overflow_error("twist: exponent overflow");
        out[static_cast<size_t>(i)] = v.get_si();
    }
    return out;
}

}  // namespace

TwistedGroup::TwistedGroup(IntMatrix Phi_) : Phi(std::move(Phi_)) {
    if (Phi.rows() != Phi.cols()) throw std::invalid_argument("TwistedGroup: Phi must be square");
    m = static_cast<int>(Phi.rows());
    Int d = int_det(Phi);
    if (d != 1 && d != -1) throw std::invalid_argument("TwistedGroup: Phi must lie in GL(m, Z)");
    PhiInv = int_adjugate(Phi);
    if (d == -1) PhiInv = (-PhiInv).eval();
}

HVec TwistedGroup::twist(const HVec& h, long power) const {
    if (static_cast<int>(h.size()) != m) throw std::invalid_argument("twist: wrong H rank");
    if (power == 0 || m == 0) return h;
    IntMatrix M = int_mat_pow(power > 0 ? Phi : PhiInv, power > 0 ? power : -power);
    return apply_int_mat(M, h);
}

void GroupAlgebraElt::add_term(const HVec& h, const Int& c) {
    if (c == 0) return;
    auto it = terms.find(h);
    if (it == terms.end()) {
        terms.emplace(h, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

bool operator==(const GroupAlgebraElt& a, const GroupAlgebraElt& b) { return a.terms == b.terms; }

GroupAlgebraElt ga_add(const GroupAlgebraElt& a, const GroupAlgebraElt& b) {
    GroupAlgebraElt r = a;
    ga_accumulate(r, b);
    return r;
}

void ga_accumulate(GroupAlgebraElt& a, const GroupAlgebraElt& b) {
    for (const auto& [h, c] : b.terms) a.add_term(h, c);
}

GroupAlgebraElt ga_neg(const GroupAlgebraElt& a) {
    GroupAlgebraElt r = a;
    for (auto& [h, c] : r.terms) c = -c;
    return r;
}

GroupAlgebraElt ga_sub(const GroupAlgebraElt& a, const GroupAlgebraElt& b) { return ga_add(a, ga_neg(b)); }

GroupAlgebraElt ga_mul(const GroupAlgebraElt& a, const GroupAlgebraElt& b) {
    // monomial factor: shifting every exponent by a fixed vector preserves
    // the lexicographic key order, so the result map builds in linear time
    if (b.terms.size() == 1) {
        const auto& [h2, c2] = *b.terms.begin();
        GroupAlgebraElt r;
        for (const auto& [h1, c1] : a.terms) {
            HVec h = h1;
            for (size_t i = 0; i < h.size(); ++i) h[i] += h2[i];
            r.terms.emplace_hint(r.terms.end(), std::move(h), c1 * c2);
        }
        return r;
    }
    if (a.terms.size() == 1) return ga_mul(b, a);  // H is abelian
    // general case: each term of the smaller factor shifts the larger factor
    // by a constant, giving one sorted run per term; merge the runs
    const GroupAlgebraElt* big = &a;
    const GroupAlgebraElt* small = &b;
    if (small->terms.size() > big->terms.size()) std::swap(big, small);  // H is abelian
    struct Run {
        std::map<HVec, Int>::const_iterator it, end;
        const HVec* shift;
        const Int* scale;
        HVec key;  // it->first + *shift
    };
    auto shifted = [](const HVec& h, const HVec& s) {
        HVec k = h;
        for (size_t i = 0; i < k.size(); ++i) k[i] += s[i];
        return k;
    };
    std::vector<Run> runs;
    runs.reserve(small->terms.size());
    for (const auto& [h2, c2] : small->terms)
        runs.push_back({big->terms.begin(), big->terms.end(), &h2, &c2,
                        shifted(big->terms.begin()->first, h2)});
    GroupAlgebraElt r;
    while (!runs.empty()) {
        size_t lo = 0;
        for (size_t i = 1; i < runs.size(); ++i)
            if (runs[i].key < runs[lo].key) lo = i;
        HVec key = runs[lo].key;
        Int c = 0;
        for (size_t i = 0; i < runs.size();) {
            Run& run = runs[i];
            if (run.key == key) {
                c += run.it->second * *run.scale;
                if (++run.it == run.end) {
                    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
                    continue;
                }
                run.key = shifted(run.it->first, *run.shift);
            }
            ++i;
        }
        if (c != 0) r.terms.emplace_hint(r.terms.end(), std::move(key), std::move(c));
    }
    return r;
}

GroupAlgebraElt ga_scale(const GroupAlgebraElt& a, const Int& s) {
    GroupAlgebraElt r;
    if (s == 0) return r;
    for (const auto& [h, c] : a.terms) r.terms[h] = c * s;
    return r;
}

GroupAlgebraElt ga_twist(const TwistedGroup& G, const GroupAlgebraElt& a, long power) {
    if (power == 0 || G.m == 0) return a;
    IntMatrix M = int_mat_pow(power > 0 ? G.Phi : G.PhiInv, power > 0 ? power : -power);
    GroupAlgebraElt r;
    for (const auto& [h, c] : a.terms) r.add_term(apply_int_mat(M, h), c);
    return r;
}

Int l1_norm(const GroupAlgebraElt& a) {
    Int n = 0;
    for (const auto& [h, c] : a.terms) n += abs_int(c);
    return n;
}

GroupElt group_mul(const TwistedGroup& G, const GroupElt& a, const GroupElt& b) {
    HVec h = a.h;
    HVec bh = G.twist(b.h, a.theta_pow);
    for (size_t i = 0; i < h.size(); ++i) h[i] += bh[i];
    return {h, a.theta_pow + b.theta_pow};
}

GroupElt group_inv(const TwistedGroup& G, const GroupElt& a) {
    HVec h = G.twist(a.h, -a.theta_pow);
    for (auto& v : h) v = -v;
    return {h, -a.theta_pow};
}

// ---------------------------------------------------------------------------

GroupAlgebraElt NovikovElt::coeff(int k) const {
    if (k > trunc_power) throw std::out_of_range("NovikovElt::coeff: beyond truncation");
    int idx = k - min_power;
    if (idx < 0 || idx >= static_cast<int>(levels.size())) return {};
    return levels[static_cast<size_t>(idx)];
}

void NovikovElt::normalize() {
    size_t lead = 0;
    while (lead < levels.size() && levels[lead].is_zero()) ++lead;
    if (lead > 0) {
        levels.erase(levels.begin(), levels.begin() + static_cast<long>(lead));
        min_power += static_cast<int>(lead);
    }
    while (!levels.empty() && levels.back().is_zero()) levels.pop_back();
    if (levels.empty()) min_power = 0;
}

bool NovikovElt::is_zero() const {
    for (const auto& l : levels)
        if (!l.is_zero()) return false;
    return true;
}

bool operator==(const NovikovElt& a, const NovikovElt& b) {
    if (a.trunc_power != b.trunc_power) return false;
    int lo = std::min(a.min_power, b.min_power);
    for (int k = lo; k <= a.trunc_power; ++k)
        if (!(a.coeff(k) == b.coeff(k))) return false;
    return true;
}

NovikovElt nov_add(const NovikovElt& a, const NovikovElt& b) {
    int trunc = std::min(a.trunc_power, b.trunc_power);
    int lo = std::min(a.min_power, b.min_power);
    if (lo > trunc) lo = trunc;
    std::vector<GroupAlgebraElt> lv(static_cast<size_t>(trunc - lo + 1));
    for (int k = lo; k <= trunc; ++k) {
        GroupAlgebraElt v;
        if (k >= a.min_power && k <= a.trunc_power) v = ga_add(v, a.coeff(k));
        if (k >= b.min_power && k <= b.trunc_power) v = ga_add(v, b.coeff(k));
        lv[static_cast<size_t>(k - lo)] = std::move(v);
    }
    NovikovElt r(lo, std::move(lv), trunc);
    r.normalize();
    return r;
}

NovikovElt nov_neg(const NovikovElt& a) {
    NovikovElt r = a;
    for (auto& l : r.levels) l = ga_neg(l);
    return r;
}

NovikovElt nov_sub(const NovikovElt& a, const NovikovElt& b) { return nov_add(a, nov_neg(b)); }

NovikovElt nov_mul(const TwistedGroup& G, const NovikovElt& a_in, const NovikovElt& b_in) {
    NovikovElt a = a_in, b = b_in;
    a.normalize();
    b.normalize();
    int trunc = std::min(a.min_power + b.trunc_power, b.min_power + a.trunc_power);
    if (a.is_zero() || b.is_zero()) return NovikovElt(0, {}, trunc);
    int lo = a.min_power + b.min_power;
    if (lo > trunc) return NovikovElt(0, {}, trunc);
    std::vector<GroupAlgebraElt> lv(static_cast<size_t>(trunc - lo + 1));
    for (size_t i = 0; i < a.levels.size(); ++i) {
        if (a.levels[i].is_zero()) continue;
        int p = a.min_power + static_cast<int>(i);
        for (size_t j = 0; j < b.levels.size(); ++j) {
            int k = p + b.min_power + static_cast<int>(j);
            if (k > trunc) break;
            if (b.levels[j].is_zero()) continue;
            ga_accumulate(lv[static_cast<size_t>(k - lo)],
                          ga_mul(a.levels[i], ga_twist(G, b.levels[j], p)));
        }
    }
    NovikovElt r(lo, std::move(lv), trunc);
    r.normalize();
    return r;
}

NovikovElt conj_by_theta(const TwistedGroup& G, const NovikovElt& x) {
    NovikovElt r = x;
    for (auto& l : r.levels) l = ga_twist(G, l, 1);
    return r;
}

NovikovElt nov_mul_group(const TwistedGroup& G, const GroupElt& g, const NovikovElt& x) {
    // (h theta^p)(a theta^k) = h Phi^p(a) theta^{p+k}
    std::vector<GroupAlgebraElt> lv;
    lv.reserve(x.levels.size());
    GroupAlgebraElt hmono = GroupAlgebraElt::monomial(g.h, Int(1));
    for (const auto& l : x.levels) lv.push_back(ga_mul(hmono, ga_twist(G, l, g.theta_pow)));
    int shift = static_cast<int>(g.theta_pow);
    NovikovElt r(x.min_power + shift, std::move(lv), x.trunc_power + shift);
    r.normalize();
    return r;
}

NovikovElt nov_mul_group(const TwistedGroup& G, const NovikovElt& x, const GroupElt& g) {
    // (a theta^k)(h theta^q) = a Phi^k(h) theta^{k+q}
    std::vector<GroupAlgebraElt> lv;
    lv.reserve(x.levels.size());
    for (size_t i = 0; i < x.levels.size(); ++i) {
        int k = x.min_power + static_cast<int>(i);
        GroupAlgebraElt hk = GroupAlgebraElt::monomial(G.twist(g.h, k), Int(1));
        lv.push_back(ga_mul(x.levels[i], hk));
    }
    int shift = static_cast<int>(g.theta_pow);
    NovikovElt r(x.min_power + shift, std::move(lv), x.trunc_power + shift);
    r.normalize();
    return r;
}

NovikovElt truncate_at_level(const NovikovElt& x, int c) {
    // level of theta^k is -k, so keep powers k <= -c
    int hi = -c;
    if (hi >= x.trunc_power) return x;
    std::vector<GroupAlgebraElt> lv;
    for (int k = x.min_power; k <= hi; ++k) lv.push_back(x.coeff(k));
    NovikovElt r(x.min_power, std::move(lv), x.trunc_power);
    r.normalize();
    return r;
}

Int level_partial_norm(const NovikovElt& x, int c) {
    Int n = 0;
    for (size_t i = 0; i < x.levels.size(); ++i) {
        int k = x.min_power + static_cast<int>(i);
        if (-k >= c) n += l1_norm(x.levels[i]);
    }
    return n;
}

bool check_exponential_growth(const NovikovElt& x, const Rat& A, const Rat& B) {
    for (int c = -x.trunc_power; c <= -x.min_power; ++c) {
        Int nrm = level_partial_norm(x, c);
        if (nrm == 0) continue;
        if (!cmp_le_times_exp_pow(Rat(nrm), A, B, -c)) return false;
    }
    return true;
}

LaurentSeries to_laurent(const NovikovElt& x) {
    std::vector<Int> c(x.levels.size(), Int(0));
    for (size_t i = 0; i < x.levels.size(); ++i) {
        const auto& t = x.levels[i].terms;
        if (t.size() > 1) throw std::invalid_argument("to_laurent: requires H trivial (m = 0)");
        if (!t.empty()) {
            if (!t.begin()->first.empty())
                throw std::invalid_argument("to_laurent: requires H trivial (m = 0)");
            c[i] = t.begin()->second;
        }
    }
    LaurentSeries r(x.min_power, std::move(c), x.trunc_power);
    r.normalize();
    return r;
}

NovikovElt from_laurent(const LaurentSeries& s) {
    std::vector<GroupAlgebraElt> lv(s.coeffs.size());
    for (size_t i = 0; i < s.coeffs.size(); ++i) lv[i] = GroupAlgebraElt::monomial({}, s.coeffs[i]);
    NovikovElt r(s.min_exp, std::move(lv), s.trunc_order);
    r.normalize();
    return r;
}

// ---------------------------------------------------------------------------

NovikovElt expand_typeL(const TwistedGroup& G, const TypeLElement& e, int order) {
    const size_t n = e.Y.size();
    if (e.A.size() != n || e.X.size() != n) throw std::invalid_argument("expand_typeL: dimension mismatch");
    for (const auto& row : e.A)
        if (row.size() != n) throw std::invalid_argument("expand_typeL: A must be square");

    // M_s = ZH part of A^s (A entries are alpha theta): M_0 = 1,
    // M_{s+1} = M_s . Phi^s(alpha)
    std::vector<std::vector<GroupAlgebraElt>> M(n, std::vector<GroupAlgebraElt>(n));
    for (size_t i = 0; i < n; ++i) M[i][i] = GroupAlgebraElt::constant(G.m, 1);

    // twisted copies maintained incrementally: at step s they hold Phi^s(A)
    // and Phi^s(X), updated by a single power-1 twist per step
    std::vector<std::vector<GroupAlgebraElt>> Atw = e.A;
    std::vector<GroupAlgebraElt> Xtw = e.X;

    std::vector<GroupAlgebraElt> coeffs;  // c_s = Y M_s Phi^s(X)
    for (int s = 0; s <= order; ++s) {
        GroupAlgebraElt c;
        for (size_t i = 0; i < n; ++i) {
            if (e.Y[i].is_zero()) continue;
            for (size_t k = 0; k < n; ++k) {
                if (M[i][k].is_zero() || Xtw[k].is_zero()) continue;
                ga_accumulate(c, ga_mul(e.Y[i], ga_mul(M[i][k], Xtw[k])));
            }
        }
        coeffs.push_back(std::move(c));
        if (s == order) break;
        std::vector<std::vector<GroupAlgebraElt>> next(n, std::vector<GroupAlgebraElt>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                GroupAlgebraElt v;
                for (size_t k = 0; k < n; ++k) {
                    if (M[i][k].is_zero() || Atw[k][j].is_zero()) continue;
                    ga_accumulate(v, ga_mul(M[i][k], Atw[k][j]));
                }
                next[i][j] = std::move(v);
            }
        M = std::move(next);
        for (auto& row : Atw)
            for (auto& a : row) a = ga_twist(G, a, 1);
        for (auto& x : Xtw) x = ga_twist(G, x, 1);
    }

    NovikovElt core(0, std::move(coeffs), order);
    core.normalize();
    core = nov_mul_group(G, e.g1, core);
    core = nov_mul_group(G, core, e.g2);
    return core;
}

GrowthConstants growth_constants_for_typeL(const TwistedGroup& G, const TypeLElement& e) {
    const size_t n = e.Y.size();
    // ||A|| = max entry l1 norm; ||M_s|| entries bounded by (n ||A||)^s, and the
    // partial sums over s <= k stay below N^{k+1} once N > max(2, n ||A||)
    Int a_norm = 0;
    for (const auto& row : e.A)
        for (const auto& entry : row) a_norm = std::max(a_norm, l1_norm(entry));
    Int N = Int(n) * a_norm + 1;
    if (N < 3) N = 3;

    Int ynorm = 0, xnorm = 0;
    for (const auto& y : e.Y) ynorm += l1_norm(y);
    for (const auto& x : e.X) xnorm += l1_norm(x);
    Int C = ynorm * xnorm;
    if (C == 0) C = 1;

    // B: any rational with e^B >= N certifies e^{Bk} >= N^k; take a crude
    // upper bound ceil(log2 N) * 0.6932 < B via bit length
    size_t bits = mpz_sizeinbase(N.get_mpz_t(), 2);
    Rat B = Rat(6932, 10000) * Rat(static_cast<long>(bits));
    // verify e^B >= N exactly, growing B if the crude bound fell short
    while (!cmp_le_times_exp(Rat(N), Rat(1), B)) B += 1;

    // the g1/g2 theta powers shift every term by `shift` levels; a negative
    // shift pushes mass to positive levels, where the certificate needs the
    // extra factor e^{B |shift|} (bounded from above exactly)
    long shift = e.g1.theta_pow + e.g2.theta_pow;
    Rat A = Rat(C * N);
    if (shift < 0) {
        Rat arg = B * Rat(-shift);
        int terms = 64;
        while (Rat(terms + 1) <= arg) terms *= 2;
        A *= exp_enclosure(arg, terms).hi;
    }
    return {A, B};
}

}  // namespace nov
