#pragma once

#include <bp/rational.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace bp {

// Dense polynomial in one variable, coefficients in increasing degree.
template <class R = Q>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<R> c) : c_(std::move(c)) { trim(); }
    static Polynomial constant(const R& k) { return Polynomial(std::vector<R>{k}); }
    static Polynomial x() { return Polynomial(std::vector<R>{R(0), R(1)}); }
    // a x + b
    static Polynomial linear(const R& a, const R& b) { return Polynomial(std::vector<R>{b, a}); }

    const std::vector<R>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    R coeff(std::size_t i) const { return i < c_.size() ? c_[i] : R(0); }

    R operator()(const R& x) const {
        R r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<R> r(std::max(c_.size(), o.c_.size()), R(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Polynomial(std::move(r));
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
    Polynomial operator*(const R& k) const {
        if (k == 0) return {};
        Polynomial r = *this;
        for (auto& x : r.c_) x *= k;
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<R> r(c_.size() + o.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Polynomial(std::move(r));
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    bool operator==(const Polynomial& o) const { return c_ == o.c_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // p(q(x))
    Polynomial compose(const Polynomial& q) const {
        Polynomial r;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * q + constant(c_[i]);
        return r;
    }
    Polynomial shift(const R& h) const { return compose(linear(R(1), h)); }
    Polynomial scale(const R& a) const {
        Polynomial r = *this;
        R p = 1;
        for (auto& x : r.c_) {
            x *= p;
            p *= a;
        }
        r.trim();
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
        os << "]";
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<R> c_;
};

using Poly = Polynomial<Q>;

// binom(p(x), k) = p(p-1)...(p-k+1)/k! as a polynomial.
inline Poly binom_poly(const Poly& p, long k) {
    Poly r = Poly::constant(1);
    for (long j = 0; j < k; ++j) r = r * (p - Poly::constant(j)) * (Q(1) / Q(j + 1));
    return r;
}

}  // namespace bp
