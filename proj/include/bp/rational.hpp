#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bp {

using Q = mpq_class;
using Z = mpz_class;

inline std::string to_string(const Q& q) { return q.get_str(); }

inline double to_double(const Q& q) { return q.get_d(); }

// Accepts "p", "-p", "p/q" and plain decimals such as "0.25".
inline Q parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        bool neg = s[0] == '-';
        std::string intpart = s.substr(neg || s[0] == '+' ? 1 : 0, dot - (neg || s[0] == '+' ? 1 : 0));
        std::string frac = s.substr(dot + 1);
        if (intpart.empty()) intpart = "0";
        for (char c : intpart + frac)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad rational '" + s + "'");
        Z num(intpart + frac, 10);
        Z den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Q r(num, den);
        r.canonicalize();
        return neg ? Q(-r) : r;
    }
    if (s[0] == '+') s.erase(0, 1);
    std::size_t start = s[0] == '-' ? 1 : 0;
    bool slash = false;
    if (start == s.size()) throw std::invalid_argument("bad rational '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] == '/' && !slash && i > start && i + 1 < s.size()) {
            slash = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("bad rational '" + s + "'");
    }
    Q r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

inline Q qpow(const Q& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        return qpow(Q(1) / base, -e);
    }
    Z num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Q(num, den);
}

// Generalized binomial coefficient x(x-1)...(x-k+1)/k! for rational x.
inline Q binom(const Q& x, long k) {
    if (k < 0) return 0;
    Q r = 1;
    for (long j = 0; j < k; ++j) {
        r *= x - j;
        r /= j + 1;
    }
    return r;
}

inline Q qabs(const Q& q) { return q < 0 ? Q(-q) : q; }

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

// Exact floor of a rational, as a signed long.
inline long floor_long(const Q& q) {
    Z f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

inline std::string format_double(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::vector<std::string> to_strings(const std::vector<Q>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(q.get_str());
    return out;
}

}  // namespace bp
