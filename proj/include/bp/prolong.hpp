#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bp {

// Float solution of f'(x) = (lambda/delta) f(lambda x) on [lambda^-nb, lambda^nf],
// one segment per interval [lambda^k, lambda^(k+1)], each sampled at N+1 points.
struct Extension {
    double lambda = 2, delta = 1;
    int n_backward = 0, n_forward = 1;
    int order = 2;
    std::size_t N = 0;
    std::vector<std::vector<double>> segments;  // segments[k + n_backward]
    double residual = 0;                        // sup |f' - (lambda/delta) f(lambda x)| on interior nodes

    double spacing(int k) const { return (lambda - 1) / static_cast<double>(N) * std::pow(lambda, k); }
    double node(int k, std::size_t j) const { return std::pow(lambda, k) + spacing(k) * static_cast<double>(j); }
    const std::vector<double>& segment(int k) const { return segments.at(static_cast<std::size_t>(k + n_backward)); }

    // Flattened (x, f) pairs with shared interval ends listed once.
    std::vector<std::pair<double, double>> samples() const {
        std::vector<std::pair<double, double>> out;
        for (int k = -n_backward; k < n_forward; ++k) {
            const auto& s = segment(k);
            for (std::size_t j = (k == -n_backward ? 0 : 1); j <= N; ++j) out.emplace_back(node(k, j), s[j]);
        }
        return out;
    }
};

namespace detail {

inline std::vector<double> derivative(const std::vector<double>& f, double h, int order) {
    std::size_t N = f.size() - 1;
    std::vector<double> d(N + 1);
    if (order == 2) {
        d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
        d[N] = (3 * f[N] - 4 * f[N - 1] + f[N - 2]) / (2 * h);
        for (std::size_t j = 1; j < N; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2 * h);
        return d;
    }
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    d[N - 1] = -(-3 * f[N] - 10 * f[N - 1] + 18 * f[N - 2] - 6 * f[N - 3] + f[N - 4]) / (12 * h);
    d[N] = -(-25 * f[N] + 48 * f[N - 1] - 36 * f[N - 2] + 16 * f[N - 3] - 3 * f[N - 4]) / (12 * h);
    for (std::size_t j = 2; j + 2 <= N; ++j) d[j] = (f[j - 2] - 8 * f[j - 1] + 8 * f[j + 1] - f[j + 2]) / (12 * h);
    return d;
}

// tail[j] = integral of f from node j to node N
inline std::vector<double> tail_integral(const std::vector<double>& f, double h, int order) {
    std::size_t N = f.size() - 1;
    std::vector<double> piece(N);
    if (order == 2) {
        for (std::size_t j = 0; j < N; ++j) piece[j] = h * (f[j] + f[j + 1]) / 2;
    } else {
        piece[0] = h / 24 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
        piece[N - 1] = h / 24 * (9 * f[N] + 19 * f[N - 1] - 5 * f[N - 2] + f[N - 3]);
        for (std::size_t j = 1; j + 1 < N; ++j) piece[j] = h / 24 * (-f[j - 1] + 13 * f[j] + 13 * f[j + 1] - f[j + 2]);
    }
    std::vector<double> t(N + 1, 0.0);
    for (std::size_t j = N; j-- > 0;) t[j] = t[j + 1] + piece[j];
    return t;
}

}  // namespace detail

inline double flatness_defect(const std::vector<double>& f) {
    std::size_t N = f.size() - 1;
    return std::max({std::abs(f[1] - f[0]), std::abs(f[2] - 2 * f[1] + f[0]), std::abs(f[N] - f[N - 1]),
                     std::abs(f[N] - 2 * f[N - 1] + f[N - 2])});
}

// base: samples of f on [1, lambda] at N+1 equally spaced nodes.
inline Extension extend_solution(const std::vector<double>& base, double lambda, double delta, int n_forward,
                                 int n_backward, int order = 2, double flat_tol = 1e-6) {
    if (delta == 0) throw std::invalid_argument("delta must be nonzero");
    if (lambda <= 1) throw std::invalid_argument("lambda must exceed 1");
    if (order != 2 && order != 4) throw std::invalid_argument("order must be 2 or 4");
    if (n_forward < 1 || n_backward < 0) throw std::invalid_argument("need n_forward >= 1 and n_backward >= 0");
    if (base.size() < 9) throw std::invalid_argument("insufficient resolution: at least 8 intervals required");
    double scale = 1;
    for (double v : base) scale = std::max(scale, std::abs(v));
    if (flatness_defect(base) > flat_tol * scale) throw std::invalid_argument("input is not flat at the interval ends");

    Extension e;
    e.lambda = lambda;
    e.delta = delta;
    e.n_backward = n_backward;
    e.n_forward = n_forward;
    e.order = order;
    e.N = base.size() - 1;
    std::vector<std::vector<double>> fwd{base};
    for (int k = 0; k + 1 < n_forward; ++k) {
        auto d = detail::derivative(fwd.back(), e.spacing(k), order);
        for (auto& v : d) v *= delta / lambda;
        fwd.push_back(std::move(d));
    }
    std::vector<std::vector<double>> back;
    const std::vector<double>* upper = &base;
    for (int k = 0; k > -n_backward; --k) {
        auto t = detail::tail_integral(*upper, e.spacing(k), order);
        std::vector<double> f(e.N + 1);
        for (std::size_t j = 0; j <= e.N; ++j) f[j] = (*upper)[0] - t[j] / delta;
        back.push_back(std::move(f));
        upper = &back.back();
    }
    for (auto it = back.rbegin(); it != back.rend(); ++it) e.segments.push_back(*it);
    for (auto& s : fwd) e.segments.push_back(std::move(s));

    for (int k = -n_backward; k + 1 < n_forward; ++k) {
        const auto& f = e.segment(k);
        const auto& g = e.segment(k + 1);
        double h = e.spacing(k);
        for (std::size_t j = 2; j + 2 <= e.N; ++j) {
            double d = (f[j - 2] - 8 * f[j - 1] + 8 * f[j + 1] - f[j + 2]) / (12 * h);
            e.residual = std::max(e.residual, std::abs(d - lambda / delta * g[j]));
        }
    }
    return e;
}

inline std::vector<double> sample_base(const std::function<double(double)>& f, double lambda, std::size_t N) {
    std::vector<double> v(N + 1);
    for (std::size_t j = 0; j <= N; ++j) v[j] = f(1 + (lambda - 1) * static_cast<double>(j) / static_cast<double>(N));
    return v;
}

// (1 - cos(2 pi (x-1)/(lambda-1)))^2: vanishes to third order at both ends.
inline double flat_bump(double x, double lambda) {
    double c = 1 - std::cos(2 * M_PI * (x - 1) / (lambda - 1));
    return c * c;
}

}  // namespace bp
