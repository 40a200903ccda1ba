#pragma once

#include <bp/birkhoff.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

// Truncated series c0 + c1 X + ... + c_{l-1} X^{l-1}. Vectors of Q^l are
// identified with series of the same truncation; X shifts coordinates up.
template <class R = Q>
class Series {
public:
    Series() = default;
    explicit Series(std::size_t trunc) : c_(trunc, R(0)) {}
    explicit Series(std::vector<R> coeffs) : c_(std::move(coeffs)) {}

    static Series identity(std::size_t trunc) {
        Series s(trunc);
        if (trunc) s.c_[0] = 1;
        return s;
    }

    std::size_t trunc() const { return c_.size(); }
    const R& operator[](std::size_t i) const { return c_[i]; }
    R& operator[](std::size_t i) { return c_[i]; }
    const std::vector<R>& coeffs() const { return c_; }

    Series operator+(const Series& o) const {
        check(o);
        Series r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }
    Series operator-(const Series& o) const {
        check(o);
        Series r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
        return r;
    }
    Series operator-() const {
        Series r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Series operator*(const R& k) const {
        Series r = *this;
        for (auto& x : r.c_) x *= k;
        return r;
    }
    Series operator*(const Series& o) const {
        check(o);
        Series r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; i + j < c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
        }
        return r;
    }
    bool operator==(const Series& o) const { return c_ == o.c_; }
    bool operator!=(const Series& o) const { return !(*this == o); }

    Series pow(unsigned k) const {
        Series r = identity(c_.size()), b = *this;
        while (k) {
            if (k & 1U) r = r * b;
            b = b * b;
            k >>= 1U;
        }
        return r;
    }

    // Multiplicative inverse; the constant term must be nonzero.
    Series inverse() const {
        if (c_.empty()) return *this;
        if (c_[0] == 0) throw std::domain_error("series with zero constant term is not invertible");
        Series r(c_.size());
        R inv0 = R(1) / c_[0];
        r.c_[0] = inv0;
        for (std::size_t n = 1; n < c_.size(); ++n) {
            R acc = 0;
            for (std::size_t k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
            r.c_[n] = -acc * inv0;
        }
        return r;
    }

    Series resized(std::size_t trunc) const {
        Series r(trunc);
        for (std::size_t i = 0; i < std::min(trunc, c_.size()); ++i) r.c_[i] = c_[i];
        return r;
    }

private:
    void check(const Series& o) const {
        if (o.c_.size() != c_.size()) throw std::invalid_argument("truncation mismatch");
    }
    std::vector<R> c_;
};

// A^xi = sum binom(xi, i) X^i
inline Series<Q> a_power(const Q& xi, std::size_t trunc) {
    Series<Q> s(trunc);
    Q b = 1;
    for (std::size_t i = 0; i < trunc; ++i) {
        s[i] = b;
        b *= xi - static_cast<long>(i);
        b /= static_cast<long>(i) + 1;
    }
    return s;
}

// B(xi) = (A^xi - 1)/X = sum binom(xi, n+1) X^n
inline Series<Q> b_series(const Q& xi, std::size_t trunc) {
    Series<Q> s(trunc);
    auto a = a_power(xi, trunc + 1);
    for (std::size_t i = 0; i < trunc; ++i) s[i] = a[i + 1];
    return s;
}

template <class R = Q>
struct GroupElement {
    R z;
    Series<R> s;

    GroupElement() = default;
    GroupElement(R z_, Series<R> s_) : z(std::move(z_)), s(std::move(s_)) {}
    GroupElement(R z_, std::vector<R> s_) : z(std::move(z_)), s(std::move(s_)) {}

    static GroupElement identity(std::size_t trunc) { return {R(0), Series<R>(trunc)}; }
    std::size_t trunc() const { return s.trunc(); }

    bool operator==(const GroupElement& o) const { return z == o.z && s == o.s; }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }
    bool operator<(const GroupElement& o) const {
        if (z != o.z) return z < o.z;
        return s.coeffs() < o.s.coeffs();
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "(" << z.get_str() << ";";
        for (std::size_t i = 0; i < s.trunc(); ++i) os << (i ? ", " : " ") << s[i].get_str();
        os << ")";
        return os.str();
    }

    static GroupElement parse(std::string_view text) {
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        skip();
        if (i >= text.size() || text[i] != '(') throw ParseError(i, "expected '('");
        ++i;
        auto semi = text.find(';', i);
        if (semi == std::string_view::npos) throw ParseError(i, "expected ';'");
        auto close = text.find(')', semi);
        if (close == std::string_view::npos) throw ParseError(semi, "expected ')'");
        for (std::size_t j = close + 1; j < text.size(); ++j)
            if (!std::isspace(static_cast<unsigned char>(text[j]))) throw ParseError(j, "trailing characters");
        R z;
        try {
            z = parse_rational(text.substr(i, semi - i));
        } catch (const std::exception& e) {
            throw ParseError(i, e.what());
        }
        std::vector<R> v;
        std::size_t p = semi + 1;
        std::string_view body = text.substr(p, close - p);
        bool blank = body.find_first_not_of(" \t\n") == std::string_view::npos;
        while (!blank) {
            auto comma = text.find(',', p);
            if (comma == std::string_view::npos || comma > close) comma = close;
            try {
                v.push_back(parse_rational(text.substr(p, comma - p)));
            } catch (const std::exception& e) {
                throw ParseError(p, e.what());
            }
            if (comma == close) break;
            p = comma + 1;
        }
        return {z, v};
    }
};

using Element = GroupElement<Q>;

inline void check_trunc(const Element& g, const Element& h) {
    if (g.trunc() != h.trunc()) throw std::invalid_argument("truncation mismatch");
}

// (xi, s)(zeta, t) = (xi + zeta, A^zeta s + t)
inline Element mul(const Element& g, const Element& h) {
    check_trunc(g, h);
    if (h.z == 0) return {g.z, g.s + h.s};
    return {g.z + h.z, a_power(h.z, g.trunc()) * g.s + h.s};
}

inline Element operator*(const Element& g, const Element& h) { return mul(g, h); }

inline Element inverse(const Element& g) { return {-g.z, -(a_power(-g.z, g.trunc()) * g.s)}; }

// g^-1 h^-1 g h = (0, (A^zeta - I)s - (A^xi - I)t)
inline Element commutator(const Element& g, const Element& h) {
    check_trunc(g, h);
    auto id = Series<Q>::identity(g.trunc());
    auto ax = a_power(g.z, g.trunc()), az = a_power(h.z, g.trunc());
    return {Q(0), (az - id) * g.s - (ax - id) * h.s};
}

inline Element power(const Element& g, const Q& xi) {
    if (g.z == 0) return {Q(0), g.s * xi};
    auto t = g.trunc();
    return {g.z * xi, b_series(g.z * xi, t) * b_series(g.z, t).inverse() * g.s};
}

// Generator (1, (phi(l), 0, ..., 0)).
inline Element letter_element(const WeightFunction& phi, Letter l, std::size_t trunc) {
    Series<Q> s(trunc);
    if (trunc) s[0] = phi(l);
    return {Q(1), s};
}

inline Element project(const WeightFunction& phi, const Word& u, std::size_t trunc) {
    // Each step multiplies by a letter element; A^1 acting on s is s + Xs.
    Element g = Element::identity(trunc);
    for (Letter l : u) {
        for (std::size_t k = trunc; k-- > 1;) g.s[k] += g.s[k - 1];
        if (trunc) g.s[0] += phi(l);
        g.z += 1;
    }
    return g;
}

// Product form of the projection, kept separate as a check on the fast loop above.
inline Element project_by_products(const WeightFunction& phi, const Word& u, std::size_t trunc) {
    Element g = Element::identity(trunc);
    for (Letter l : u) g = mul(g, letter_element(phi, l, trunc));
    return g;
}

inline bool injectivity_probe(const WeightFunction& phi, std::size_t n) {
    if (!phi.non_constant()) throw std::invalid_argument("constant weight function");
    if (n > 20) throw std::invalid_argument("length too large for exhaustive enumeration");
    std::set<Element> seen;
    std::size_t total = std::size_t{1} << n;
    for (std::size_t code = 0; code < total; ++code) {
        Word w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<Letter>((code >> (n - 1 - i)) & 1U);
        if (!seen.insert(project(phi, w, n)).second) return false;
    }
    return true;
}

}  // namespace bp
