#pragma once

#include <bp/birkhoff.hpp>
#include <bp/nilgroup.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

struct QPolyTable {
    Q lambda;
    int N = 0;
    std::vector<std::vector<Q>> q;  // q[i][n], 0 <= i, n <= N; zero for i > n

    const Q& at(int i, int n) const { return q.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(n)); }
    bool operator==(const QPolyTable& o) const { return lambda == o.lambda && N == o.N && q == o.q; }

    std::string csv() const {
        std::ostringstream os;
        os << "i,n,value\n";
        for (int i = 0; i <= N; ++i)
            for (int n = i; n <= N; ++n) os << i << "," << n << "," << at(i, n).get_str() << "\n";
        return os.str();
    }
};

// Row i holds the coefficients of (A^lambda - 1)^i up to X^N.
inline QPolyTable q_table_series(const Q& lambda, int N) {
    if (N < 0) throw std::invalid_argument("negative bound");
    auto n1 = static_cast<std::size_t>(N + 1);
    auto d = a_power(lambda, n1) - Series<Q>::identity(n1);
    QPolyTable t{lambda, N, {}};
    auto p = Series<Q>::identity(n1);
    for (int i = 0; i <= N; ++i) {
        t.q.push_back(p.coeffs());
        p = p * d;
    }
    return t;
}

inline QPolyTable q_table_recurrence(const Q& lambda, int N) {
    if (N < 0) throw std::invalid_argument("negative bound");
    auto n1 = static_cast<std::size_t>(N + 1);
    QPolyTable t{lambda, N, std::vector<std::vector<Q>>(n1, std::vector<Q>(n1, Q(0)))};
    auto& q = t.q;
    q[0][0] = 1;
    for (int n = 1; n <= N; ++n) {
        q[1][static_cast<std::size_t>(n)] = binom(lambda, n);
        q[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)] = qpow(lambda, n);
    }
    for (int n = 2; n <= N; ++n)
        for (int i = 2; i < n; ++i) {
            auto ui = static_cast<std::size_t>(i), un = static_cast<std::size_t>(n);
            q[ui][un] = lambda * i / n * q[ui - 1][un - 1] + (lambda * i - (n - 1)) / n * q[ui][un - 1];
        }
    return t;
}

// Shared tables per lambda; readers share, extension takes the writer lock.
class QTableCache {
public:
    std::shared_ptr<const QPolyTable> get(const Q& lambda, int N) {
        std::string key = lambda.get_str();
        {
            std::shared_lock lock(mu_);
            auto it = tables_.find(key);
            if (it != tables_.end() && it->second->N >= N) return it->second;
        }
        std::unique_lock lock(mu_);
        auto it = tables_.find(key);
        if (it != tables_.end() && it->second->N >= N) return it->second;
        int target = N;
        if (it != tables_.end()) target = std::max(N, 2 * it->second->N);
        auto t = std::make_shared<const QPolyTable>(q_table_recurrence(lambda, target));
        tables_[key] = t;
        return t;
    }
    static QTableCache& global() {
        static QTableCache cache;
        return cache;
    }

private:
    std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<const QPolyTable>> tables_;
};

struct AsymptoticsReport {
    Q ratio;
    double ratio_float = 0;
    bool sup_bound_ok = true;
    int first_violation = -1;
    double worst_bound_fraction = 0;  // max over n of sup q / (2 lambda - 1)^n
};

// q_{n,n+i} against (lambda-1)^i/(2^i i!) n^i lambda^n, plus the bound sup q_{i,j} <= (2 lambda - 1)^n.
inline AsymptoticsReport q_asymptotics_check(long lambda, int i, int n) {
    if (lambda < 2 || i < 1 || n < 1) throw std::invalid_argument("need lambda >= 2, i >= 1, n >= 1");
    Q lam(lambda);
    auto t = q_table_recurrence(lam, n + i);
    AsymptoticsReport r;
    Z fact = 1;
    for (int k = 2; k <= i; ++k) fact *= k;
    Q denom = qpow(lam - 1, i) / (qpow(Q(2), i) * Q(fact)) * qpow(Q(n), i) * qpow(lam, n);
    r.ratio = t.at(n, n + i) / denom;
    r.ratio_float = r.ratio.get_d();
    Q sup = 0;
    for (int m = 0; m <= n; ++m) {
        for (int a = 0; a <= m; ++a) sup = std::max(sup, qabs(t.at(a, m)));
        Q bound = qpow(Q(2 * lambda - 1), m);
        if (sup > bound && r.sup_bound_ok) {
            r.sup_bound_ok = false;
            r.first_violation = m;
        }
        r.worst_bound_fraction = std::max(r.worst_bound_fraction, Q(sup / bound).get_d());
    }
    return r;
}

// (A^mu - 1)((A^lambda - 1) delta - (A^mu - 1) beta): zero iff the pair defines an endomorphism.
inline Series<Q> endo_condition(const Q& lambda, const Q& mu, const Series<Q>& beta, const Series<Q>& delta) {
    auto t = beta.trunc();
    auto id = Series<Q>::identity(t);
    auto am = a_power(mu, t) - id;
    return am * ((a_power(lambda, t) - id) * delta - am * beta);
}

class Endomorphism {
public:
    Endomorphism(Q lambda, std::vector<Q> beta, std::vector<Q> delta, std::size_t trunc)
        : lambda_(std::move(lambda)), beta_(std::move(beta)), delta_(std::move(delta)), trunc_(trunc) {
        if (trunc_ == 0) throw std::invalid_argument("truncation must be positive");
        auto d = a_power(lambda_, trunc_) - Series<Q>::identity(trunc_);
        Series<Q> pd = padded(delta_), pb = padded(beta_);
        for (std::size_t k = 0; k < trunc_; ++k) {
            pdelta_.push_back(pd);
            pbeta_.push_back(pb);
            pd = d * pd;
            pb = d * pb;
        }
    }

    const Q& lambda() const { return lambda_; }
    const std::vector<Q>& beta() const { return beta_; }
    const std::vector<Q>& delta() const { return delta_; }
    std::size_t trunc() const { return trunc_; }
    Q delta_at(std::size_t i) const { return i >= 1 && i <= delta_.size() ? delta_[i - 1] : Q(0); }
    bool delta1_zero() const { return delta_at(1) == 0; }

    Endomorphism with_trunc(std::size_t trunc) const { return {lambda_, beta_, delta_, trunc}; }

    // (z, s) -> (lambda z, sum_k s_k (A^lambda-1)^{k-1} delta + binom(z,k) (A^lambda-1)^{k-1} beta)
    Element apply(const Element& g) const {
        if (g.trunc() != trunc_) throw std::invalid_argument("truncation mismatch");
        Series<Q> t(trunc_);
        Q b = 1;
        for (std::size_t k = 1; k <= trunc_; ++k) {
            b *= g.z - static_cast<long>(k - 1);
            b /= static_cast<long>(k);
            const Q& sk = g.s[k - 1];
            for (std::size_t n = k - 1; n < trunc_; ++n) {
                if (sk != 0) t[n] += sk * pdelta_[k - 1][n];
                if (b != 0) t[n] += b * pbeta_[k - 1][n];
            }
        }
        return {lambda_ * g.z, t};
    }
    Element operator()(const Element& g) const { return apply(g); }

    Element iterate(Element g, int k) const {
        for (int j = 0; j < k; ++j) g = apply(g);
        return g;
    }

    // (A^lambda - 1)^k delta and (A^lambda - 1)^k beta at this truncation.
    const Series<Q>& delta_column(std::size_t k) const { return pdelta_.at(k); }
    const Series<Q>& beta_column(std::size_t k) const { return pbeta_.at(k); }

private:
    Series<Q> padded(const std::vector<Q>& v) const {
        Series<Q> s(trunc_);
        for (std::size_t i = 0; i < std::min(trunc_, v.size()); ++i) s[i] = v[i];
        return s;
    }

    Q lambda_;
    std::vector<Q> beta_, delta_;
    std::size_t trunc_;
    std::vector<Series<Q>> pdelta_, pbeta_;
};

inline Element apply_endo(const Endomorphism& L, const Element& g) { return L.apply(g); }

inline void require_pair(const WeightFunction& phi, const Substitution& sigma) {
    if (sigma.alphabet().size() != 2) throw std::invalid_argument("two-letter alphabet required");
    if (!sigma.uniform()) throw std::invalid_argument("substitution is not of constant length");
    if (sigma.length() < 2) throw std::invalid_argument("substitution length must be at least 2");
    if (sigma.image(0) == sigma.image(1)) throw std::invalid_argument("identical images");
    if (!phi.non_constant()) throw std::invalid_argument("weight function is constant");
    if (!(phi.alphabet() == sigma.alphabet())) throw std::invalid_argument("alphabet mismatch");
}

inline Endomorphism build_from_pair(const WeightFunction& phi, const Substitution& sigma, std::size_t trunc) {
    require_pair(phi, sigma);
    auto delta = delta_vector(sigma);
    auto lam = static_cast<int>(sigma.length());
    auto sa = final_sums(phi, sigma.image(0), lam);
    std::vector<Q> beta;
    for (int i = 0; i < lam; ++i) beta.push_back(sa[static_cast<std::size_t>(i)] - phi(0) * delta[static_cast<std::size_t>(i)]);
    return {Q(lam), beta, delta, trunc};
}

inline Element fast_birkhoff(const Endomorphism& L, const WeightFunction& phi, const Word& u, int k) {
    return L.iterate(project(phi, u, L.trunc()), k);
}

struct PropPhiReport {
    // renormalized[n][l-1] = s_l^(n) / (delta2^n lambda^((n+l-1)(n+l-2)/2))
    std::vector<std::vector<Q>> renormalized;
    bool coord1_exact = true;
    bool has_phi2 = false;
    Q phi2;
    std::vector<double> coord2_rel_gap;
    std::vector<Q> limit_estimate;  // last row
};

inline PropPhiReport prop_phi_limits(const Endomorphism& L, const std::vector<Q>& s, int n_max) {
    if (!L.delta1_zero()) throw std::invalid_argument("delta_1 must vanish");
    Q d2 = L.delta_at(2), d3 = L.delta_at(3), lam = L.lambda();
    if (d2 == 0) throw std::invalid_argument("delta_2 must be nonzero");
    std::size_t m = s.size();
    auto W = L.with_trunc(static_cast<std::size_t>(n_max) + m);
    Series<Q> v(W.trunc());
    for (std::size_t i = 0; i < m; ++i) v[i] = s[i];
    Element g{Q(0), v};
    PropPhiReport r;
    if (m >= 2) {
        r.has_phi2 = true;
        r.phi2 = s[1] + (Q(1, 2) + d3 / d2) * s[0] / (lam - 1);
    }
    for (int n = 0; n <= n_max; ++n) {
        std::vector<Q> row;
        for (std::size_t l = 1; l <= m; ++l) {
            long e = (n + static_cast<long>(l) - 1) * (n + static_cast<long>(l) - 2) / 2;
            row.push_back(g.s[static_cast<std::size_t>(n) + l - 1] / (qpow(d2, n) * qpow(lam, e)));
        }
        if (m >= 1 && row[0] != s[0]) r.coord1_exact = false;
        if (r.has_phi2) {
            Q gap = qabs(row[1] - r.phi2);
            double den = std::max(qabs(r.phi2).get_d(), 1e-300);
            r.coord2_rel_gap.push_back(r.phi2 == 0 ? gap.get_d() : gap.get_d() / den);
        }
        r.renormalized.push_back(std::move(row));
        if (n < n_max) g = W.apply(g);
    }
    r.limit_estimate = r.renormalized.back();
    return r;
}

}  // namespace bp
