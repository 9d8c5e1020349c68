#include "nov/laurent.hpp"

namespace nov {

RationalFn rational_normalize(const RationalFn& f) {
    Poly P = f.P;
    Poly Q = f.Q;
    poly_trim(P);
    poly_trim(Q);
    int m = f.m;
    if (P.empty()) return RationalFn(0, {}, {Int(1)});

    PolyQ g = polyq_gcd(polyq_from(P), polyq_from(Q));
    if (g.size() > 1) {
        PolyQ pq = polyq_div_exact(polyq_from(P), g);
        PolyQ qq = polyq_div_exact(polyq_from(Q), g);
        // rescale so the reduced denominator has constant term 1
        if (qq.empty() || qq[0] == 0)
            throw std::runtime_error("rational_normalize: reduced denominator lost Q(0) != 0");
        Rat c0 = qq[0];
        Poly Pn(pq.size()), Qn(qq.size());
        for (size_t i = 0; i < pq.size(); ++i) {
            Rat v = pq[i] / c0;
            if (v.get_den() != 1)
                throw std::runtime_error("rational_normalize: non-integral reduced numerator");
            Pn[i] = v.get_num();
        }
        for (size_t i = 0; i < qq.size(); ++i) {
            Rat v = qq[i] / c0;
            if (v.get_den() != 1)
                throw std::runtime_error("rational_normalize: non-integral reduced denominator");
            Qn[i] = v.get_num();
        }
        P = std::move(Pn);
        Q = std::move(Qn);
    }
    // move any power of t dividing P into the prefactor
    size_t v = 0;
    while (v < P.size() && P[v] == 0) ++v;
    if (v > 0) {
        P.erase(P.begin(), P.begin() + static_cast<long>(v));
        m += static_cast<int>(v);
    }
    return RationalFn(m, std::move(P), std::move(Q));
}

LaurentSeries expand_rational(const RationalFn& f, int order) {
    if (poly_is_zero(f.P)) return LaurentSeries(0, {}, order);
    // coefficients a_k of P/Q from the linear recurrence Q * (P/Q) = P:
    //   a_k = P_k - sum_{j=1..deg Q} Q_j a_{k-j}
    int n = order - f.m;  // expansion order needed for P/Q itself
    if (n < 0) return LaurentSeries(0, {}, order);
    std::vector<Int> a(static_cast<size_t>(n) + 1, Int(0));
    for (int k = 0; k <= n; ++k) {
        Int v = poly_coeff(f.P, k);
        for (int j = 1; j <= poly_degree(f.Q) && j <= k; ++j)
            v -= poly_coeff(f.Q, j) * a[static_cast<size_t>(k - j)];
        a[static_cast<size_t>(k)] = v;
    }
    LaurentSeries r(f.m, std::move(a), order);
    r.normalize();
    return r;
}

namespace {

struct BMResult {
    PolyQ C;  // connection polynomial, may have degree below L
    int L;    // register length of the minimal LFSR
};

/// Berlekamp--Massey over Q: minimal LFSR of length L with connection
/// polynomial C(x) = 1 + c_1 x + ... such that
/// s_n + sum_{i=1..L} c_i s_{n-i} = 0 for all n >= L.  The register length
/// matters on its own: for eventually-zero sequences deg C < L, and the
/// numerator of the rational fit may have degree up to L - 1.
BMResult berlekamp_massey(const std::vector<Rat>& s) {
    PolyQ C{Rat(1)}, B{Rat(1)};
    int L = 0, m = 1;
    Rat b = 1;
    for (size_t n = 0; n < s.size(); ++n) {
        Rat d = s[n];
        for (int i = 1; i <= L; ++i)
            if (static_cast<size_t>(i) < C.size()) d += C[static_cast<size_t>(i)] * s[n - static_cast<size_t>(i)];
        if (d == 0) {
            ++m;
        } else if (2 * L <= static_cast<int>(n)) {
            PolyQ T = C;
            Rat coef = d / b;
            if (C.size() < B.size() + static_cast<size_t>(m)) C.resize(B.size() + static_cast<size_t>(m), Rat(0));
            for (size_t i = 0; i < B.size(); ++i) C[i + static_cast<size_t>(m)] -= coef * B[i];
            L = static_cast<int>(n) + 1 - L;
            B = std::move(T);
            b = d;
            m = 1;
        } else {
            Rat coef = d / b;
            if (C.size() < B.size() + static_cast<size_t>(m)) C.resize(B.size() + static_cast<size_t>(m), Rat(0));
            for (size_t i = 0; i < B.size(); ++i) C[i + static_cast<size_t>(m)] -= coef * B[i];
            ++m;
        }
    }
    polyq_trim(C);
    return {C, L};
}

}  // namespace

ReconstructResult reconstruct_rational(const LaurentSeries& s) {
    ReconstructResult fail;
    LaurentSeries in = s;
    in.normalize();
    if (in.coeffs.empty()) {
        ReconstructResult r;
        r.fn = RationalFn(0, {}, {Int(1)});
        return r;
    }
    // sequence of known coefficients of t^{-min_exp} * s, starting at t^0
    size_t len = static_cast<size_t>(in.trunc_order - in.min_exp) + 1;
    std::vector<Rat> seq(len, Rat(0));
    for (size_t i = 0; i < in.coeffs.size(); ++i) seq[i] = Rat(in.coeffs[i]);

    BMResult bm = berlekamp_massey(seq);
    const PolyQ& C = bm.C;
    int L = bm.L;
    int degC = static_cast<int>(C.size()) - 1;

    // numerator N = C * seq truncated below the register length L
    PolyQ N(static_cast<size_t>(L > 0 ? L : 1), Rat(0));
    for (int k = 0; k < std::max(L, 1); ++k) {
        Rat v = 0;
        for (int i = 0; i <= k && i <= degC; ++i)
            if (static_cast<size_t>(k - i) < seq.size()) v += C[static_cast<size_t>(i)] * seq[static_cast<size_t>(k - i)];
        N[static_cast<size_t>(k)] = v;
    }
    polyq_trim(N);

    int d = std::max(L, static_cast<int>(N.size()));
    if (static_cast<int>(len) < 2 * d + 1) return fail;

    // clear denominators; the common scale keeps Q(0) = 1 only when the
    // minimal form is integral (Fatou), which we require
    Int lcm = 1;
    for (const auto& c : C) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& c : N) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    if (lcm != 1) return fail;

    Poly P(N.size()), Q(C.size());
    for (size_t i = 0; i < N.size(); ++i) P[i] = N[i].get_num();
    for (size_t i = 0; i < C.size(); ++i) Q[i] = C[i].get_num();

    RationalFn fn;
    try {
        fn = rational_normalize(RationalFn(in.min_exp, std::move(P), std::move(Q)));
    } catch (const std::exception&) {
        return fail;
    }
    // the fit must reproduce every known coefficient
    if (!(expand_rational(fn, s.trunc_order) == s)) return fail;
    ReconstructResult r;
    r.fn = std::move(fn);
    return r;
}

bool coefficient_growth_check(const LaurentSeries& s, const Rat& C, const Rat& D) {
    for (size_t i = 0; i < s.coeffs.size(); ++i) {
        if (s.coeffs[i] == 0) continue;
        int k = s.min_exp + static_cast<int>(i);
        Rat v(abs_int(s.coeffs[i]));
        if (!cmp_le_times_exp_pow(v, C, D, k)) return false;
    }
    return true;
}

}  // namespace nov
