#pragma once

#include <bp/birkhoff.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

struct CylinderIndex {
    int level = 0;
    std::size_t offset = 0;  // in [0, lambda^level)
    Letter letter = 0;
    bool operator==(const CylinderIndex& o) const {
        return level == o.level && offset == o.offset && letter == o.letter;
    }
};

inline std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline std::vector<long> common_column(const Substitution& sigma) {
    auto ab = abelianization(sigma);
    if (!ab.equal_columns) throw std::invalid_argument("images do not share one abelianization");
    return ab.column(0);
}

// mu(Cyl(k, m, alpha)) = v_alpha / lambda^(k+1)
inline Q cylinder_measure(const Substitution& sigma, const CylinderIndex& idx) {
    if (!sigma.uniform()) throw std::invalid_argument("substitution is not of constant length");
    auto v = common_column(sigma);
    std::size_t lam = sigma.length();
    if (idx.offset >= ipow(lam, idx.level)) throw std::out_of_range("offset beyond lambda^level");
    return Q(v.at(static_cast<std::size_t>(idx.letter))) / qpow(Q(static_cast<long>(lam)), idx.level + 1);
}

struct PsiTable {
    int level = 0;
    std::size_t lambda = 0;
    std::vector<std::vector<Q>> values;  // values[letter][m], m < lambda^level

    const Q& at(std::size_t m, Letter a) const { return values.at(static_cast<std::size_t>(a)).at(m); }
    std::size_t width() const { return values.empty() ? 0 : values[0].size(); }
};

// Levels 0..expand.size(). Level j+1 is built from level j by expanding each
// letter through expand[j]; weights[j] are the letter counts that fix the zero
// mean at level j.
inline std::vector<PsiTable> build_psi_levels(const std::vector<const Substitution*>& expand,
                                              const std::vector<std::vector<long>>& weights,
                                              const WeightFunction& phi) {
    if (weights.size() != expand.size() + 1) throw std::invalid_argument("one weight vector per level required");
    const Alphabet& A = phi.alphabet();
    std::size_t nA = A.size();
    auto mean_num = [&](const PsiTable& t, const std::vector<long>& v) {
        Q s = 0;
        for (std::size_t a = 0; a < nA; ++a) {
            Q row = 0;
            for (const auto& x : t.values[a]) row += x;
            s += Q(v[a]) * row;
        }
        return s;
    };
    std::vector<PsiTable> out;
    PsiTable t0{0, expand.empty() ? 0 : expand[0]->length(), {}};
    for (std::size_t a = 0; a < nA; ++a) t0.values.push_back({phi(static_cast<Letter>(a))});
    if (mean_num(t0, weights[0]) != 0) throw std::invalid_argument("weight function does not have zero mean");
    out.push_back(t0);
    for (std::size_t j = 0; j < expand.size(); ++j) {
        const Substitution& sub = *expand[j];
        if (!(sub.alphabet() == A)) throw std::invalid_argument("alphabet mismatch");
        std::size_t lam = sub.length();
        const PsiTable& prev = out.back();
        std::size_t w = prev.width();
        PsiTable t{static_cast<int>(j + 1), lam, std::vector<std::vector<Q>>(nA)};
        for (std::size_t a = 0; a < nA; ++a) {
            auto& row = t.values[a];
            row.reserve(w * lam);
            Q acc = 0;
            for (Letter b : sub.image(static_cast<Letter>(a)))
                for (std::size_t r = 0; r < w; ++r) {
                    row.push_back(acc);
                    acc += prev.at(r, b);
                }
            if (acc != 0) throw std::logic_error("block sums do not vanish; abelianization hypothesis broken");
        }
        Q total = 0;
        for (auto v : weights[j + 1]) total += v;
        Q C = -mean_num(t, weights[j + 1]) / (total * static_cast<long>(w * lam));
        for (auto& row : t.values)
            for (auto& x : row) x += C;
        out.push_back(std::move(t));
    }
    return out;
}

class PsiChain {
public:
    PsiChain(Substitution sigma, WeightFunction phi, int i_max) : sigma_(std::move(sigma)), phi_(std::move(phi)) {
        if (!sigma_.uniform()) throw std::invalid_argument("substitution is not of constant length");
        if (sigma_.all_images_equal()) throw std::invalid_argument("all images equal: periodic subshift");
        if (!(phi_.alphabet() == sigma_.alphabet())) throw std::invalid_argument("alphabet mismatch");
        auto v = common_column(sigma_);
        seed_ = -1;
        for (std::size_t a = 0; a < sigma_.alphabet().size() && seed_ < 0; ++a)
            if (sigma_.image(static_cast<Letter>(a)).front() == static_cast<Letter>(a)) seed_ = static_cast<Letter>(a);
        if (seed_ < 0) throw std::invalid_argument("no letter starts its own image");
        std::vector<const Substitution*> expand(static_cast<std::size_t>(i_max), &sigma_);
        std::vector<std::vector<long>> weights(static_cast<std::size_t>(i_max) + 1, v);
        tables_ = build_psi_levels(expand, weights, phi_);
    }

    const Substitution& substitution() const { return sigma_; }
    const WeightFunction& phi() const { return phi_; }
    int depth() const { return static_cast<int>(tables_.size()) - 1; }
    const PsiTable& level(int i) const { return tables_.at(static_cast<std::size_t>(i)); }
    std::vector<PsiTable>& mutable_tables() { return tables_; }  // test hook for corrupted tables
    Letter seed() const { return seed_; }
    std::size_t lambda() const { return sigma_.length(); }

    Word fixed_point(std::size_t min_len) const { return fixed_point_prefix(sigma_, seed_, std::max<std::size_t>(min_len, 1)); }

    CylinderIndex cylinder(int i, std::size_t n, const Word& w) const {
        std::size_t b = ipow(lambda(), i);
        return {i, n % b, w.at(n / b)};
    }

    // psi_i(T^n w), with w a long enough prefix of the fixed point.
    const Q& at(int i, std::size_t n, const Word& w) const {
        auto c = cylinder(i, n, w);
        return level(i).at(c.offset, c.letter);
    }

    // c_i = -psi_i(w) for i >= 1; c_0 is the mean of phi.
    std::vector<Q> c_values(int count) const {
        std::vector<Q> c;
        for (int i = 0; i < count; ++i) c.push_back(i == 0 ? mean() : Q(-level(i).at(0, seed_)));
        return c;
    }

    Q mean() const {
        auto v = common_column(sigma_);
        Q s = 0;
        for (std::size_t a = 0; a < v.size(); ++a) s += Q(v[a]) * phi_(static_cast<Letter>(a));
        return s / static_cast<long>(lambda());
    }

    std::string csv() const {
        std::ostringstream os;
        os << "level,m,letter,value\n";
        const auto& A = sigma_.alphabet();
        for (const auto& t : tables_)
            for (std::size_t a = 0; a < A.size(); ++a)
                for (std::size_t m = 0; m < t.width(); ++m)
                    os << t.level << "," << m << "," << A.symbol(static_cast<Letter>(a)) << "," << t.values[a][m].get_str()
                       << "\n";
        return os.str();
    }

private:
    Substitution sigma_;
    WeightFunction phi_;
    Letter seed_ = 0;
    std::vector<PsiTable> tables_;
};

inline PsiChain psi_chain(const Substitution& sigma, const WeightFunction& phi, int i_max) { return {sigma, phi, i_max}; }

struct IdentityCheck {
    bool ok = true;
    int order = 0;
    std::size_t time = 0;  // first failing (order, time)
};

// S^(k)_n(phi, w) = psi_k(T^n w) - sum_{j=1..k} binom(n, k-j) psi_j(w)
inline IdentityCheck cobord_sum_identity_check(const PsiChain& chain, int i_max, std::size_t n_max) {
    if (i_max > chain.depth()) throw std::invalid_argument("chain too shallow");
    Word w = chain.fixed_point(n_max + 1);
    SumStream st(chain.phi(), std::max(i_max, 1));
    IdentityCheck r;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n) st.push(w[n - 1]);
        Q nn(static_cast<long>(n));
        for (int k = 1; k <= i_max; ++k) {
            Q rhs = chain.at(k, n, w);
            for (int j = 1; j <= k; ++j) rhs -= binom(nn, k - j) * chain.level(j).at(0, w[0]);
            if (st[k] != rhs) return {false, k, n};
        }
    }
    return r;
}

inline IdentityCheck cobord_sum_identity_check(const Substitution& sigma, const WeightFunction& phi, int i_max,
                                               std::size_t n_max) {
    return cobord_sum_identity_check(psi_chain(sigma, phi, i_max), i_max, n_max);
}

// psi_i(T^{n+1} w) - psi_i(T^n w) = psi_{i-1}(T^n w) along the orbit.
inline IdentityCheck telescoping_check(const PsiChain& chain, int i, std::size_t n_max) {
    Word w = chain.fixed_point(n_max + 2);
    for (std::size_t n = 0; n <= n_max; ++n)
        if (chain.at(i, n + 1, w) - chain.at(i, n, w) != chain.at(i - 1, n, w)) return {false, i, n};
    return {};
}

// Exact zero mean of every level under the cylinder measure.
inline bool zero_mean_check(const PsiChain& chain) {
    auto v = common_column(chain.substitution());
    for (int i = 0; i <= chain.depth(); ++i) {
        Q s = 0;
        const auto& t = chain.level(i);
        for (std::size_t a = 0; a < v.size(); ++a)
            for (const auto& x : t.values[a])
                s += cylinder_measure(chain.substitution(), {i, 0, static_cast<Letter>(a)}) * x;
        if (s != 0) return false;
    }
    return true;
}

struct PartitionReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
};

// Each position n of the fixed point should be claimed by exactly one
// Cyl(k, m, alpha): the aligned sigma^k block around n must be the image of a
// single letter.
inline PartitionReport partition_check(const Substitution& sigma, int k_max, std::size_t n_max) {
    Letter seed = -1;
    for (std::size_t a = 0; a < sigma.alphabet().size() && seed < 0; ++a)
        if (sigma.image(static_cast<Letter>(a)).front() == static_cast<Letter>(a)) seed = static_cast<Letter>(a);
    if (seed < 0) throw std::invalid_argument("no letter starts its own image");
    std::size_t lam = sigma.length();
    PartitionReport rep;
    for (int k = 0; k <= k_max; ++k) {
        std::size_t b = ipow(lam, k);
        Word w = fixed_point_prefix(sigma, seed, (n_max / b + 1) * b);
        std::vector<Word> images;
        for (std::size_t a = 0; a < sigma.alphabet().size(); ++a)
            images.push_back(sigma.iterate({static_cast<Letter>(a)}, k));
        for (std::size_t n = 0; n <= n_max; ++n) {
            ++rep.checked;
            std::size_t start = n - n % b;
            std::size_t claims = 0;
            for (const auto& im : images)
                if (std::equal(im.begin(), im.end(), w.begin() + static_cast<long>(start))) ++claims;
            if (claims != 1) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace bp
