#pragma once

#include <bp/birkhoff.hpp>
#include <bp/cobound.hpp>
#include <bp/endo.hpp>
#include <bp/nilgroup.hpp>
#include <bp/polynomial.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

struct RTable {
    // r[i][n-1] = R_{i,n}(x), i = 0..depth, n = 1..trunc
    std::vector<std::vector<Poly>> r;
    const Poly& at(int i, int n) const { return r.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(n - 1)); }
    int depth() const { return static_cast<int>(r.size()) - 1; }
    int trunc() const { return r.empty() ? 0 : static_cast<int>(r[0].size()); }
};

// R_{i,n}(x): coordinate n of L^i(x, 0) with x kept as an indeterminate.
inline RTable r_polynomials(const Endomorphism& L, int depth) {
    if (depth < 0) throw std::invalid_argument("negative depth");
    std::size_t T = L.trunc();
    RTable out;
    Poly z = Poly::x();
    std::vector<Poly> s(T);
    out.r.push_back(s);
    for (int i = 1; i <= depth; ++i) {
        std::vector<Poly> t(T);
        for (std::size_t k = 1; k <= T; ++k) {
            Poly bz = binom_poly(z, static_cast<long>(k));
            const auto& pd = L.delta_column(k - 1);
            const auto& pb = L.beta_column(k - 1);
            for (std::size_t n = k - 1; n < T; ++n) {
                if (!s[k - 1].is_zero() && pd[n] != 0) t[n] += s[k - 1] * pd[n];
                if (pb[n] != 0) t[n] += bz * pb[n];
            }
        }
        s = std::move(t);
        z = z * L.lambda();
        out.r.push_back(s);
    }
    return out;
}

struct CVector {
    std::vector<Q> values;
    std::string route;
};

inline CVector c_from_R(const Endomorphism& L, int count) {
    if (!L.delta1_zero()) throw std::invalid_argument("delta_1 must vanish");
    if (count < 1) return {{}, "R-diagonal"};
    auto W = L.with_trunc(static_cast<std::size_t>(count));
    auto R = r_polynomials(W, count);
    CVector c{{}, "R-diagonal"};
    for (int i = 0; i < count; ++i) c.values.push_back(R.at(i + 1, i + 1)(qpow(L.lambda(), -(i + 1))));
    return c;
}

// Solves L(1, c) = (1, c)^lambda = (lambda, B(lambda) c) coordinate by coordinate.
inline CVector c_from_eigen(const Endomorphism& L, int count) {
    if (!L.delta1_zero()) throw std::invalid_argument("delta_1 must vanish");
    if (L.delta_at(2) == 0) throw std::invalid_argument("delta_2 must be nonzero");
    CVector c{{}, "eigen"};
    if (count < 1) return c;
    auto W = L.with_trunc(static_cast<std::size_t>(count));
    const Q& lam = W.lambda();
    std::vector<Q> bl;  // binom(lambda, j+1)
    for (int j = 0; j < count; ++j) bl.push_back(binom(lam, j + 1));
    for (int n = 1; n <= count; ++n) {
        auto un = static_cast<std::size_t>(n);
        Q rhs = W.beta_column(0)[un - 1];
        for (std::size_t k = 1; k < un; ++k) rhs += c.values[k - 1] * W.delta_column(k - 1)[un - 1];
        for (std::size_t j = 1; j < un; ++j) rhs -= bl[j] * c.values[un - 1 - j];
        Q pivot = lam - W.delta_column(un - 1)[un - 1];
        if (pivot == 0) throw std::runtime_error("singular pivot in eigen system");
        c.values.push_back(rhs / pivot);
    }
    return c;
}

// c_0 is the mean of phi; c_i = -psi_i at the fixed point, chain built on the centered weight.
inline CVector c_from_cobound(const Substitution& sigma, const WeightFunction& phi, int count) {
    CVector c{{}, "cobound"};
    if (count < 1) return c;
    auto v = common_column(sigma);
    Q mean = 0;
    for (std::size_t a = 0; a < v.size(); ++a) mean += Q(v[a]) * phi(static_cast<Letter>(a));
    mean /= static_cast<long>(sigma.length());
    PsiChain chain(sigma, phi.shifted(mean), std::max(count - 1, 0));
    c.values = chain.c_values(count);
    c.values[0] = mean;
    return c;
}

// L(1, c) against (1, c)^lambda; zero vector part when c solves the eigen relation.
inline Element eigen_residual(const Endomorphism& L, const std::vector<Q>& c) {
    auto W = L.with_trunc(c.size());
    Element g{Q(1), c};
    auto lhs = W.apply(g);
    auto rhs = power(g, W.lambda());
    return {lhs.z - rhs.z, lhs.s - rhs.s};
}

struct PPolynomial {
    int level;
    Poly p;
};

// p_l(x) = sum_{i<=l} c_i binom(x, l-i)
inline std::vector<PPolynomial> p_polynomials(const std::vector<Q>& c) {
    std::vector<PPolynomial> out;
    std::vector<Poly> bx;
    for (std::size_t k = 0; k < c.size(); ++k) bx.push_back(binom_poly(Poly::x(), static_cast<long>(k)));
    for (std::size_t l = 0; l < c.size(); ++l) {
        Poly p;
        for (std::size_t i = 0; i <= l; ++i) p += bx[l - i] * c[i];
        out.push_back({static_cast<int>(l), p});
    }
    return out;
}

struct WindowTrend {
    std::vector<Q> window_max;  // over [lambda^k, lambda^(k+1))
    bool bounded_trend = true;
};

inline WindowTrend window_trend(const std::vector<Q>& dev, std::size_t lambda) {
    WindowTrend w;
    std::size_t lo = 1;
    while (lo < dev.size()) {
        std::size_t hi = std::min(dev.size(), lo * lambda);
        Q m = 0;
        for (std::size_t n = lo; n < hi; ++n) m = std::max(m, qabs(dev[n]));
        w.window_max.push_back(m);
        lo = hi;
    }
    if (w.window_max.size() >= 2) {
        Q early = 0;
        for (std::size_t k = 0; k + 1 < w.window_max.size(); ++k) early = std::max(early, w.window_max[k]);
        w.bounded_trend = w.window_max.back() <= early;
    }
    return w;
}

struct RecentringReport {
    bool exact = true;
    std::size_t first_failure = 0;  // multiple index n with a nonzero residual
    Q sup_deviation;                // sup_n |S^(l)_n - p_l(n)|
    WindowTrend trend;
    std::vector<Q> c;
};

// Along the fixed point w: S^(l)_{n lambda^l} = p_l(n lambda^l) - c_l.
inline RecentringReport recentring_check(const Substitution& sigma, const WeightFunction& phi, int l, std::size_t n_max) {
    require_pair(phi, sigma);
    if (l < 1) throw std::invalid_argument("order must be positive");
    auto L = build_from_pair(phi, sigma, static_cast<std::size_t>(l) + 1);
    if (!L.delta1_zero()) throw std::invalid_argument("delta_1 must vanish");
    RecentringReport rep;
    rep.c = c_from_R(L, l + 1).values;
    auto p = p_polynomials(rep.c)[static_cast<std::size_t>(l)].p;
    std::size_t lam = sigma.length(), block = 1;
    for (int j = 0; j < l; ++j) block *= lam;
    std::size_t N = n_max * block;
    Word w = fixed_point_prefix(sigma, 0, N);
    SumStream st(phi, l);
    std::vector<Q> dev(N + 1, Q(0));
    for (std::size_t n = 1; n <= N; ++n) {
        st.push(w[n - 1]);
        dev[n] = st[l] - p(Q(static_cast<long>(n)));
        rep.sup_deviation = std::max(rep.sup_deviation, qabs(dev[n]));
        if (n % block == 0 && dev[n] != -rep.c[static_cast<std::size_t>(l)] && rep.exact) {
            rep.exact = false;
            rep.first_failure = n / block;
        }
    }
    rep.trend = window_trend(dev, lam);
    return rep;
}

struct TailReport {
    std::vector<Q> renormalized;
    std::vector<double> diffs;  // |c~_{l+1} - c~_l|
};

// c~_l = c_l delta_2^{-l} lambda^{-(l-1)(l-2)/2}
inline TailReport c_renormalized_tail(const std::vector<Q>& c, const Endomorphism& L) {
    Q d2 = L.delta_at(2), lam = L.lambda();
    if (d2 == 0) throw std::invalid_argument("delta_2 must be nonzero");
    TailReport t;
    for (std::size_t l = 0; l < c.size(); ++l) {
        long e = (static_cast<long>(l) - 1) * (static_cast<long>(l) - 2) / 2;
        t.renormalized.push_back(c[l] / (qpow(d2, static_cast<long>(l)) * qpow(lam, e)));
    }
    for (std::size_t l = 0; l + 1 < t.renormalized.size(); ++l)
        t.diffs.push_back(qabs(t.renormalized[l + 1] - t.renormalized[l]).get_d());
    return t;
}

struct RijReport {
    std::vector<Q> sequence;       // n = 0..n_max
    bool matches_prop_phi = true;  // equality with the renormalized coordinate k of X^{-n} L^n(0, R_k(x))
    std::optional<Q> closed_limit;
    std::vector<double> rel_gap;
};

// (R_{n+k,n+k}(x) - R_{n,n+k}(lambda^k x)) / (delta_2^n lambda^{(n+k-1)(n+k-2)/2})
inline RijReport rij_difference_limit(const Endomorphism& L, int k, const Q& x, int n_max) {
    if (!L.delta1_zero()) throw std::invalid_argument("delta_1 must vanish");
    Q d2 = L.delta_at(2), lam = L.lambda();
    if (d2 == 0) throw std::invalid_argument("delta_2 must be nonzero");
    RijReport rep;
    auto W = L.with_trunc(static_cast<std::size_t>(n_max + k + 1));
    Element left{x, Series<Q>(W.trunc())};
    left = W.iterate(left, k);
    std::vector<Q> s(left.s.coeffs().begin(), left.s.coeffs().begin() + k);
    Element right{x * qpow(lam, k), Series<Q>(W.trunc())};
    std::optional<PropPhiReport> pp;
    if (k >= 1) pp = prop_phi_limits(L, s, n_max);
    for (int n = 0; n <= n_max; ++n) {
        long e = (n + k - 1L) * (n + k - 2L) / 2;
        Q v = 0;
        if (n + k >= 1) {
            auto idx = static_cast<std::size_t>(n + k - 1);
            v = (left.s[idx] - right.s[idx]) / (qpow(d2, n) * qpow(lam, e));
        }
        rep.sequence.push_back(v);
        if (pp && pp->renormalized[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)] != v)
            rep.matches_prop_phi = false;
        if (k == 0 && v != 0) rep.matches_prop_phi = false;
        left = W.apply(left);
        right = W.apply(right);
    }
    if (k == 1) rep.closed_limit = s[0];
    if (k == 2) rep.closed_limit = pp->phi2;
    if (rep.closed_limit) {
        for (const auto& v : rep.sequence) {
            double gap = qabs(v - *rep.closed_limit).get_d();
            double den = qabs(*rep.closed_limit).get_d();
            rep.rel_gap.push_back(den > 0 ? gap / den : gap);
        }
    }
    return rep;
}

}  // namespace bp
