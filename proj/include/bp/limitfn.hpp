#pragma once

#include <bp/birkhoff.hpp>
#include <bp/cobound.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

// k_i = delta_2^(i-1) lambda^((i-1)(i-2)/2)
inline Q normalization(const Q& delta2, const Q& lambda, int i) {
    long e = (i - 1L) * (i - 2L) / 2;
    return qpow(delta2, i - 1) * qpow(lambda, e);
}

struct SampledStepFunction {
    int level = 0;
    Q lambda;
    Q step;    // 1 / lambda^(level-1)
    Q domain;  // Lambda
    Q k;       // normalization
    Q delta2;
    std::vector<Q> values;  // cell m covers [m step, (m+1) step)

    std::size_t cells() const { return values.size(); }
    const Q& at(const Q& x) const {
        long m = floor_long(x / step);
        if (m < 0 || static_cast<std::size_t>(m) >= values.size()) throw std::out_of_range("point outside the sampled domain");
        return values[static_cast<std::size_t>(m)];
    }
    Q sup_abs() const {
        Q s = 0;
        for (const auto& v : values) s = std::max(s, qabs(v));
        return s;
    }

    // x,value_exact,value_float at the left end of every cell
    std::string csv(int digits = 17) const {
        std::ostringstream os;
        os << "x,value_exact,value_float\n";
        for (std::size_t m = 0; m < values.size(); ++m)
            os << Q(step * static_cast<long>(m)).get_str() << "," << values[m].get_str() << ","
               << format_double(values[m].get_d(), digits) << "\n";
        return os.str();
    }
};

struct LetterFunction {
    Letter letter = 0;
    int level = 0;
    Q lambda;
    Q step;
    std::vector<Q> values;  // lambda^level cells on [0, lambda)
    Q end_value;            // value at x = lambda, shared by every letter

    const Q& at(const Q& x) const {
        if (x == lambda) return end_value;
        long m = floor_long(x / step);
        if (m < 0 || static_cast<std::size_t>(m) >= values.size()) throw std::out_of_range("point outside [0, lambda]");
        return values[static_cast<std::size_t>(m)];
    }
};

struct Approximant {
    SampledStepFunction f;
    std::vector<LetterFunction> letters;
};

struct ConstructionData {
    Q lambda, delta2;
    WeightFunction phi;  // centered
    std::vector<long> v;
};

inline ConstructionData check_construction(const Substitution& sigma, const WeightFunction& phi) {
    if (sigma.alphabet().size() != 2) throw std::invalid_argument("two-letter alphabet required");
    if (!(phi.alphabet() == sigma.alphabet())) throw std::invalid_argument("alphabet mismatch");
    auto d = delta_vector(sigma);
    if (d[0] != 0) throw std::invalid_argument("delta_1 must vanish");
    if (d.size() < 2 || d[1] == 0) throw std::invalid_argument("delta_2 must be nonzero");
    ConstructionData c{Q(static_cast<long>(sigma.length())), d[1], phi, common_column(sigma)};
    Q mean = (Q(c.v[0]) * phi(0) + Q(c.v[1]) * phi(1)) / c.lambda;
    c.phi = phi.shifted(mean);
    return c;
}

// |sigma(a)|_b chi_a - |sigma(a)|_a chi_b
inline WeightFunction recommended_phi(const Substitution& sigma) {
    auto v = common_column(sigma);
    return WeightFunction(sigma.alphabet(), {Q(v[1]), Q(-v[0])});
}

inline Approximant approximant_from_chain(const PsiChain& chain, const ConstructionData& cd, int i, const Q& Lambda) {
    if (i < 1 || i > chain.depth()) throw std::invalid_argument("level outside the chain");
    if (Lambda <= 0 || !is_integer(Lambda / cd.lambda)) throw std::invalid_argument("domain must be a positive multiple of lambda");
    std::size_t lam = chain.lambda();
    std::size_t per = ipow(lam, i - 1);
    auto cells = static_cast<std::size_t>(floor_long(Lambda)) * per;
    Q k = normalization(cd.delta2, cd.lambda, i);
    Approximant a;
    a.f = {i, cd.lambda, qpow(cd.lambda, -(i - 1)), Lambda, k, cd.delta2, {}};
    Word w = chain.fixed_point(cells / (per * lam) + 2);
    a.f.values.reserve(cells);
    for (std::size_t m = 0; m < cells; ++m) a.f.values.push_back(chain.at(i, m, w) / k);
    const auto& t = chain.level(i);
    for (std::size_t l = 0; l < chain.substitution().alphabet().size(); ++l) {
        LetterFunction lf{static_cast<Letter>(l), i, cd.lambda, a.f.step, {}, t.at(0, 0) / k};
        for (const auto& x : t.values[l]) lf.values.push_back(x / k);
        a.letters.push_back(std::move(lf));
    }
    return a;
}

inline std::vector<Approximant> approximants(const Substitution& sigma, const WeightFunction& phi, int i_max,
                                             std::optional<Q> Lambda = std::nullopt) {
    auto cd = check_construction(sigma, phi);
    Q dom = Lambda ? *Lambda : cd.lambda * cd.lambda;
    PsiChain chain(sigma, cd.phi, i_max);
    std::vector<Approximant> out;
    for (int i = 1; i <= i_max; ++i) out.push_back(approximant_from_chain(chain, cd, i, dom));
    return out;
}

inline Approximant approximant(const Substitution& sigma, const WeightFunction& phi, int i,
                               std::optional<Q> Lambda = std::nullopt) {
    return approximants(sigma, phi, i, Lambda).back();
}

// f^(i)(x + 1/lambda^(i-1)) - f^(i)(x) = f^(i-1)(lambda x) / (delta_2 lambda^(i-2)) on every cell where both sides exist.
inline bool step_identity_check(const SampledStepFunction& fi, const SampledStepFunction& fprev) {
    if (fi.level != fprev.level + 1 || fi.lambda != fprev.lambda) throw std::invalid_argument("level mismatch");
    Q scale = fi.delta2 * qpow(fi.lambda, fi.level - 2);
    for (std::size_t m = 0; m + 1 < fi.cells() && m < fprev.cells(); ++m)
        if (fi.values[m + 1] - fi.values[m] != fprev.values[m] / scale) return false;
    return true;
}

// sum_{j<n} f^(i)(j/lambda^(i-1)) / lambda^(i-1) = delta_2 (f^(i+1)(n/lambda^i) - f^(i+1)(0))
inline bool discrete_integral_check(const SampledStepFunction& fi, const SampledStepFunction& fnext) {
    if (fnext.level != fi.level + 1 || fi.lambda != fnext.lambda) throw std::invalid_argument("level mismatch");
    Q integral = 0;
    for (std::size_t n = 0; n < fnext.cells(); ++n) {
        if (integral != fi.delta2 * (fnext.values[n] - fnext.values[0])) return false;
        if (n >= fi.cells()) break;
        integral += fi.values[n] * fi.step;
    }
    return true;
}

// sup over letters alpha and grid points y of
// | int_0^{lambda y} f^(left)_{sigma(alpha)} - delta_2 (f^(right)_alpha(y) - f^(right)_alpha(0)) |,
// y running over multiples of 1/lambda^(right-1) in [0, lambda].
inline Q substitution_identity_residual(const Substitution& sigma, const Approximant& left, const Approximant& right) {
    const Q& lam = left.f.lambda;
    Q d2 = left.f.delta2;
    Q sup = 0;
    for (std::size_t a = 0; a < left.letters.size(); ++a) {
        const Word& im = sigma.image(static_cast<Letter>(a));
        // cumulative integral of the concatenated left function over [0, lambda^2]
        std::vector<Q> cum{Q(0)};
        for (Letter b : im)
            for (const auto& v : left.letters[static_cast<std::size_t>(b)].values) cum.push_back(cum.back() + v * left.f.step);
        const auto& fr = right.letters[a];
        std::size_t ny = fr.values.size();
        for (std::size_t j = 0; j <= ny; ++j) {
            Q y = fr.step * static_cast<long>(j);
            Q cellpos = lam * y / left.f.step;
            Q lhs;
            auto c = static_cast<std::size_t>(floor_long(cellpos));
            if (is_integer(cellpos))
                lhs = cum.at(c);
            else
                lhs = cum.at(c) + (cellpos - static_cast<long>(c)) * (cum.at(c + 1) - cum.at(c));
            Q rhs = d2 * (fr.at(y) - fr.at(Q(0)));
            sup = std::max(sup, qabs(lhs - rhs));
        }
    }
    return sup;
}

struct LevelStats {
    int i = 0;
    Q sup_abs;
    std::optional<Q> sup_diff_prev;
    std::optional<double> lipschitz_ratio;
};

struct ConvergenceReport {
    std::vector<LevelStats> levels;
    bool integer_increments_ok = true;
    std::vector<Q> expected_increments;  // per letter value of the centered weight
};

// Integer-point increments f_alpha(k) - f_alpha(k-1) against the centered weight of (sigma(alpha))_{k-1}.
inline bool integer_increment_check(const Substitution& sigma, const WeightFunction& centered, const Approximant& a) {
    auto lam = static_cast<long>(sigma.length());
    for (const auto& lf : a.letters)
        for (long k = 1; k <= lam; ++k) {
            Q diff = lf.at(Q(k)) - lf.at(Q(k - 1));
            if (diff != centered(sigma.image(lf.letter)[static_cast<std::size_t>(k - 1)])) return false;
        }
    return true;
}

inline ConvergenceReport convergence_report(const Substitution& sigma, const WeightFunction& phi, int i_max,
                                            std::optional<Q> Lambda = std::nullopt) {
    auto cd = check_construction(sigma, phi);
    auto fs = approximants(sigma, phi, i_max, Lambda);
    ConvergenceReport rep;
    for (std::size_t l = 0; l < cd.phi.values().size(); ++l) rep.expected_increments.push_back(cd.phi.values()[l]);
    auto lam = static_cast<std::size_t>(floor_long(cd.lambda));
    for (int i = 1; i <= i_max; ++i) {
        const auto& f = fs[static_cast<std::size_t>(i - 1)].f;
        LevelStats st{i, f.sup_abs(), std::nullopt, std::nullopt};
        if (!integer_increment_check(sigma, cd.phi, fs[static_cast<std::size_t>(i - 1)])) rep.integer_increments_ok = false;
        if (i >= 2) {
            const auto& g = fs[static_cast<std::size_t>(i - 2)].f;
            Q d = 0;
            for (std::size_t m = 0; m < f.cells(); ++m) d = std::max(d, qabs(f.values[m] - g.values[m / lam]));
            st.sup_diff_prev = d;
            Q prevnorm = g.sup_abs();
            if (prevnorm != 0) {
                double best = 0;
                Q bound_scale = cd.lambda / qabs(cd.delta2) * prevnorm;
                for (std::size_t span = 1; span < f.cells(); span *= lam) {
                    Q mx = 0;
                    for (std::size_t m = 0; m + span < f.cells(); ++m) mx = std::max(mx, qabs(f.values[m + span] - f.values[m]));
                    Q h = f.step * static_cast<long>(span);
                    Q bound = bound_scale * (h + 2 * f.step);
                    best = std::max(best, Q(mx / bound).get_d());
                }
                st.lipschitz_ratio = best;
            }
        }
        rep.levels.push_back(st);
    }
    return rep;
}

struct ZeroScan {
    enum class Kind { SignChange, ExactZero, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Q left, right;
};

// Looks for a sign change or an exact zero of f inside [t/delta, t lambda^3/delta].
inline ZeroScan zero_window_scan(const SampledStepFunction& f, const Q& delta, const Q& t) {
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    if (t <= delta / (f.lambda * (f.lambda - 1))) throw std::invalid_argument("t too small for the window statement");
    Q lo = t / delta, hi = t * qpow(f.lambda, 3) / delta;
    if (hi > f.domain) throw std::out_of_range("window outside the sampled domain");
    auto mlo = static_cast<std::size_t>(floor_long(lo / f.step));
    auto mhi = static_cast<std::size_t>(std::max(0L, floor_long(hi / f.step) - (is_integer(hi / f.step) ? 1 : 0)));
    ZeroScan z;
    // opposite signs on two nonzero cells, possibly separated by a run of zero cells
    std::size_t last_nonzero = mlo;
    bool have = false, zero_seen = false;
    std::size_t first_zero = 0;
    for (std::size_t m = mlo; m <= mhi && m < f.cells(); ++m) {
        int s = sgn(f.values[m]);
        if (s == 0) {
            if (!zero_seen) first_zero = m;
            zero_seen = true;
            continue;
        }
        if (have && s * sgn(f.values[last_nonzero]) < 0)
            return {ZeroScan::Kind::SignChange, f.step * static_cast<long>(last_nonzero), f.step * static_cast<long>(m + 1)};
        have = true;
        last_nonzero = m;
    }
    if (zero_seen) return {ZeroScan::Kind::ExactZero, f.step * static_cast<long>(first_zero), f.step * static_cast<long>(first_zero + 1)};
    return z;
}

}  // namespace bp
