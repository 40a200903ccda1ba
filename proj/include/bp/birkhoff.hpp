#pragma once

#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bp {

class WeightFunction {
public:
    WeightFunction() = default;
    WeightFunction(Alphabet alphabet, std::vector<Q> values) : alphabet_(std::move(alphabet)), values_(std::move(values)) {
        if (values_.size() != alphabet_.size()) throw std::invalid_argument("one weight per letter required");
    }
    static WeightFunction indicator(const Alphabet& alphabet, Letter l) {
        std::vector<Q> v(alphabet.size(), Q(0));
        v.at(static_cast<std::size_t>(l)) = 1;
        return {alphabet, v};
    }
    static WeightFunction zero(const Alphabet& alphabet) { return {alphabet, std::vector<Q>(alphabet.size(), Q(0))}; }

    // "a=1,b=-2/3"; letters not mentioned get weight 0.
    static WeightFunction parse(const Alphabet& alphabet, std::string_view text) {
        std::vector<Q> v(alphabet.size(), Q(0));
        std::size_t i = 0;
        while (i < text.size()) {
            auto comma = text.find(',', i);
            if (comma == std::string_view::npos) comma = text.size();
            auto item = text.substr(i, comma - i);
            auto eq = item.find('=');
            if (eq == std::string_view::npos) throw ParseError(i, "expected letter=value");
            std::string key;
            for (char c : item.substr(0, eq))
                if (!std::isspace(static_cast<unsigned char>(c))) key.push_back(c);
            Letter l;
            try {
                l = alphabet.index_of(key);
            } catch (const std::exception&) {
                throw ParseError(i, "unknown letter '" + key + "'");
            }
            try {
                v[static_cast<std::size_t>(l)] = parse_rational(item.substr(eq + 1));
            } catch (const std::exception& e) {
                throw ParseError(i + eq + 1, e.what());
            }
            i = comma + 1;
        }
        return {alphabet, v};
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Q>& values() const { return values_; }
    const Q& operator()(Letter l) const { return values_.at(static_cast<std::size_t>(l)); }

    bool non_constant() const {
        for (const auto& v : values_)
            if (v != values_[0]) return true;
        return false;
    }
    bool is_zero() const {
        for (const auto& v : values_)
            if (v != 0) return false;
        return true;
    }

    WeightFunction affine(const Q& alpha, const Q& beta) const {
        std::vector<Q> v;
        for (const auto& x : values_) v.push_back(alpha * x + beta);
        return {alphabet_, v};
    }
    WeightFunction shifted(const Q& c) const { return affine(1, -c); }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (i) s += ",";
            s += alphabet_.symbol(static_cast<Letter>(i)) + "=" + values_[i].get_str();
        }
        return s;
    }

private:
    Alphabet alphabet_;
    std::vector<Q> values_;
};

struct BirkhoffColumn {
    int order = 1;
    std::vector<Q> values;  // S_0 ... S_n
};

// Columns 1..max_order, each of length |u|+1.
inline std::vector<BirkhoffColumn> iterated_sums(const WeightFunction& phi, const Word& u, int max_order) {
    if (max_order < 1) throw std::invalid_argument("order must be positive");
    std::vector<BirkhoffColumn> cols(static_cast<std::size_t>(max_order));
    for (int l = 0; l < max_order; ++l) {
        cols[l].order = l + 1;
        cols[l].values.assign(u.size() + 1, Q(0));
    }
    for (std::size_t n = 0; n < u.size(); ++n) {
        cols[0].values[n + 1] = cols[0].values[n] + phi(u[n]);
        for (int l = 1; l < max_order; ++l) cols[l].values[n + 1] = cols[l].values[n] + cols[l - 1].values[n];
    }
    return cols;
}

// Running sums S^(1..L)_n without storing the columns.
class SumStream {
public:
    SumStream(const WeightFunction& phi, int max_order) : phi_(&phi), s_(static_cast<std::size_t>(max_order), Q(0)) {}
    void push(Letter l) {
        for (std::size_t k = s_.size(); k-- > 1;) s_[k] += s_[k - 1];
        s_[0] += (*phi_)(l);
        ++n_;
    }
    const Q& operator[](int order) const { return s_.at(static_cast<std::size_t>(order - 1)); }
    const std::vector<Q>& all() const { return s_; }
    std::size_t time() const { return n_; }

private:
    const WeightFunction* phi_;
    std::vector<Q> s_;
    std::size_t n_ = 0;
};

inline Q explicit_sum(const WeightFunction& phi, const Word& u, int order, std::size_t n) {
    if (order < 1) throw std::invalid_argument("order must be positive");
    if (n > u.size()) throw std::out_of_range("time beyond the word");
    Q s = 0;
    for (long k = 0; k <= static_cast<long>(n) - order; ++k)
        s += binom(Q(static_cast<long>(n) - k - 1), order - 1) * phi(u[static_cast<std::size_t>(k)]);
    return s;
}

// S^(1..L)_{|u|}(phi, u)
inline std::vector<Q> final_sums(const WeightFunction& phi, const Word& u, int max_order) {
    SumStream st(phi, max_order);
    for (Letter l : u) st.push(l);
    return st.all();
}

inline std::vector<Q> delta_quotient(const Substitution& sigma, const WeightFunction& phi) {
    if (!sigma.uniform()) throw std::invalid_argument("substitution is not of constant length");
    if (sigma.alphabet().size() != 2) throw std::invalid_argument("two-letter alphabet required");
    if (!phi.non_constant()) throw std::invalid_argument("weight function is constant");
    int lam = static_cast<int>(sigma.length());
    auto sa = final_sums(phi, sigma.image(0), lam);
    auto sb = final_sums(phi, sigma.image(1), lam);
    Q d = phi(0) - phi(1);
    std::vector<Q> out;
    for (int i = 0; i < lam; ++i) out.push_back((sa[i] - sb[i]) / d);
    return out;
}

inline std::vector<Q> delta_vector(const Substitution& sigma) {
    if (!sigma.uniform()) throw std::invalid_argument("substitution is not of constant length");
    if (sigma.alphabet().size() != 2) throw std::invalid_argument("two-letter alphabet required");
    if (sigma.image(0) == sigma.image(1)) throw std::invalid_argument("identical images");
    return delta_quotient(sigma, WeightFunction::indicator(sigma.alphabet(), 0));
}

inline unsigned long default_seed() {
    if (const char* s = std::getenv("BP_SEED")) return std::stoul(s);
    return 20240601UL;
}

inline Q random_rational(std::mt19937_64& rng, long range = 20, long max_den = 9) {
    std::uniform_int_distribution<long> num(-range, range), den(1, max_den);
    long p = num(rng);
    long d = den(rng);
    Q q(p, d);
    q.canonicalize();
    return q;
}

inline bool delta_independence_check(const Substitution& sigma, int trials, unsigned long seed = default_seed()) {
    std::mt19937_64 rng(seed);
    std::vector<Q> ref;
    for (int t = 0; t < trials; ++t) {
        std::vector<Q> v{random_rational(rng), random_rational(rng)};
        while (v[0] == v[1]) v[1] = random_rational(rng);
        auto d = delta_quotient(sigma, WeightFunction(sigma.alphabet(), v));
        if (t == 0)
            ref = d;
        else if (d != ref)
            return false;
    }
    return true;
}

struct EigenRow {
    std::string name;
    Q eigenvalue;
    bool holds = true;
    std::size_t first_failure = 0;
};

struct GrowthRow {
    std::string name;
    Q max_abs;
    std::vector<Q> window_max;  // over [2^k, 2^(k+1))
    bool bounded_trend = false;
};

struct EigencheckReport {
    std::vector<EigenRow> relations;
    std::vector<GrowthRow> growth;
    bool ok() const {
        for (const auto& r : relations)
            if (!r.holds) return false;
        return true;
    }
};

// Window maxima of |S_n| over complete dyadic windows; the trend is "bounded" when
// the later half of the windows never exceeds the earlier half.
inline GrowthRow growth_trend(const std::string& name, const std::vector<Q>& sums) {
    GrowthRow g{name, 0, {}, false};
    for (std::size_t lo = 1; 2 * lo <= sums.size(); lo *= 2) {
        Q m = 0;
        for (std::size_t n = lo; n < 2 * lo; ++n) m = std::max(m, qabs(sums[n]));
        g.window_max.push_back(m);
        g.max_abs = std::max(g.max_abs, m);
    }
    std::size_t half = (g.window_max.size() + 1) / 2;
    Q early = 0, late = 0;
    for (std::size_t k = 0; k < g.window_max.size(); ++k) {
        Q& side = k < half ? early : late;
        side = std::max(side, g.window_max[k]);
    }
    g.bounded_trend = late <= early;
    return g;
}

inline EigencheckReport ptm_block_eigencheck(std::size_t n_max, std::size_t growth_len = 4096) {
    auto ptm = Substitution::parse("a->ab,b->ba");
    std::size_t need = std::max(2 * n_max + 2, growth_len + 2);
    Word u = fixed_point_prefix(ptm, 0, need);
    auto coded = block_coding(ptm.alphabet(), u, 2);
    const Alphabet& B = coded.alphabet;  // aa, ab, ba, bb
    Letter AA = B.index_of("aa"), AB = B.index_of("ab"), BA = B.index_of("ba"), BB = B.index_of("bb");
    auto make = [&](Q aa, Q ab, Q ba, Q bb) {
        std::vector<Q> v(4);
        v[AA] = aa;
        v[AB] = ab;
        v[BA] = ba;
        v[BB] = bb;
        return WeightFunction(B, v);
    };
    struct Eig {
        std::string name;
        Q alpha;
        WeightFunction f;
    };
    std::vector<Eig> eigs = {
        {"phi_2", 2, make(1, 1, 1, 1)},
        {"phi_0", 0, make(1, 1, -1, -1)},
        {"phi_1", 1, make(0, 1, -1, 0)},
        {"phi_-1", -1, make(2, -1, -1, 2)},
    };
    EigencheckReport rep;
    for (const auto& e : eigs) {
        auto cols = iterated_sums(e.f, coded.word, 1);
        const auto& s = cols[0].values;
        EigenRow row{e.name, e.alpha, true, 0};
        for (std::size_t n = 1; n <= n_max; ++n)
            if (s[2 * n] != e.alpha * s[n]) {
                row.holds = false;
                row.first_failure = n;
                break;
            }
        rep.relations.push_back(row);
    }
    Word prefix(coded.word.begin(), coded.word.begin() + static_cast<long>(growth_len));
    for (std::size_t k : {1, 2}) {
        auto cols = iterated_sums(eigs[k].f, prefix, 1);
        rep.growth.push_back(growth_trend(eigs[k].name, cols[0].values));
    }
    for (Q c : {Q(0), Q(1, 6), Q(1, 4)}) {
        auto f = make(1, 0, 0, 0).shifted(c);
        auto cols = iterated_sums(f, prefix, 1);
        rep.growth.push_back(growth_trend("chi_aa-" + c.get_str(), cols[0].values));
    }
    return rep;
}

inline std::string columns_csv(const std::vector<BirkhoffColumn>& cols) {
    std::ostringstream os;
    os << "n";
    for (const auto& c : cols) os << ",S" << c.order;
    os << "\n";
    std::size_t len = cols.empty() ? 0 : cols[0].values.size();
    for (std::size_t n = 0; n < len; ++n) {
        os << n;
        for (const auto& c : cols) os << "," << c.values[n].get_str();
        os << "\n";
    }
    return os.str();
}

}  // namespace bp
