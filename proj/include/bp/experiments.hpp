#pragma once

#include <bp/birkhoff.hpp>
#include <bp/cobound.hpp>
#include <bp/endo.hpp>
#include <bp/limitfn.hpp>
#include <bp/nilgroup.hpp>
#include <bp/rational.hpp>
#include <bp/words.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

struct Delta2ZeroTrace {
    int n = 0;
    bool even = true;
    int order = 0;               // 2n or 2n+1
    Q time_scale;                // x = t / time_scale
    Q value_scale;               // normalization of psi
    std::size_t integer_step = 0;  // integer points at multiples of this time
    std::vector<Q> values;       // t = 0 .. lambda^order
    std::vector<Q> integer_values;
    bool integer_identical = true;
    bool fast_path_ok = true;
};

struct Delta2ZeroReport {
    std::vector<Q> delta;
    WeightFunction phi;
    std::vector<Delta2ZeroTrace> traces;
    bool ok() const {
        for (const auto& t : traces)
            if (!t.fast_path_ok || (t.even && !t.integer_identical)) return false;
        return true;
    }
    std::string csv(int digits = 17) const {
        std::ostringstream os;
        os << "family,n,t,x,value_exact,value_float\n";
        for (const auto& tr : traces)
            for (std::size_t t = 0; t < tr.values.size(); ++t)
                os << (tr.even ? "even" : "odd") << "," << tr.n << "," << t << ","
                   << Q(Q(static_cast<long>(t)) / tr.time_scale).get_str() << "," << tr.values[t].get_str() << ","
                   << format_double(tr.values[t].get_d(), digits) << "\n";
        return os.str();
    }
};

// Even family: psi_2n(T^t w) / (delta_3^n lambda^((n-1)^2)), time renormalized by lambda^n,
// integer points at multiples of lambda^n. Odd family: psi_(2n+1)(T^t w) / (delta_3^n lambda^(n(n-1))),
// time renormalized by lambda^(n+2), integer points at multiples of lambda^(n+1).
// Integer-point values are cross-checked against L^j(pi(w[0,k))) through the cobord identity.
inline Delta2ZeroReport delta2_zero_experiment(const Substitution& sigma, int n_max,
                                               std::optional<WeightFunction> phi_in = std::nullopt) {
    if (sigma.alphabet().size() != 2) throw std::invalid_argument("two-letter alphabet required");
    auto d = delta_vector(sigma);
    if (d[0] != 0) throw std::invalid_argument("delta_1 must vanish");
    if (d.size() < 3) throw std::invalid_argument("substitution too short");
    if (d[1] != 0) throw std::invalid_argument("delta_2 is nonzero: use the main construction");
    if (d[2] == 0) throw std::invalid_argument("delta_3 must be nonzero");
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    WeightFunction phi = phi_in ? *phi_in : recommended_phi(sigma);
    Delta2ZeroReport rep{d, phi, {}};
    int depth = 2 * n_max + 1;
    PsiChain chain(sigma, phi, depth);
    std::size_t lam = sigma.length();
    Q qlam(static_cast<long>(lam));
    Word w = chain.fixed_point(ipow(lam, depth) + 1);
    auto L = build_from_pair(phi, sigma, static_cast<std::size_t>(depth));
    std::vector<Q> psi_w;
    for (int j = 0; j <= depth; ++j) psi_w.push_back(j == 0 ? Q(0) : chain.level(j).at(0, w[0]));

    for (int n = 1; n <= n_max; ++n)
        for (bool even : {true, false}) {
            Delta2ZeroTrace tr;
            tr.n = n;
            tr.even = even;
            tr.order = even ? 2 * n : 2 * n + 1;
            long nn = n;
            tr.time_scale = qpow(qlam, even ? n : n + 2);
            tr.value_scale = qpow(d[2], n) * qpow(qlam, even ? (nn - 1) * (nn - 1) : nn * (nn - 1));
            int blocks = even ? n : n + 1;
            tr.integer_step = ipow(lam, blocks);
            std::size_t T = ipow(lam, tr.order);
            for (std::size_t t = 0; t <= T; ++t) tr.values.push_back(chain.at(tr.order, t, w) / tr.value_scale);
            for (std::size_t t = 0; t <= T; t += tr.integer_step) {
                tr.integer_values.push_back(tr.values[t]);
                if (tr.values[t] != tr.values[0]) tr.integer_identical = false;
                // S^(order)_t from the fast path, t = k lambda^blocks
                Word prefix(w.begin(), w.begin() + static_cast<long>(t / tr.integer_step));
                auto g = fast_birkhoff(L, phi, prefix, blocks);
                Q s = g.s[static_cast<std::size_t>(tr.order - 1)];
                Q rhs = chain.at(tr.order, t, w);
                Q tt(static_cast<long>(t));
                for (int j = 1; j <= tr.order; ++j) rhs -= binom(tt, tr.order - j) * psi_w[static_cast<std::size_t>(j)];
                if (s != rhs) tr.fast_path_ok = false;
            }
            rep.traces.push_back(std::move(tr));
        }
    return rep;
}

struct SadicFunctions {
    int level = 0;
    std::vector<int> past;  // omega_{-i} .. omega_{-1}
    int omega0 = 0;
    std::vector<LetterFunction> letters;

    // f(k) - f(k-1) for k = 1..lambda, per letter
    std::vector<std::vector<Q>> integer_increments() const {
        std::vector<std::vector<Q>> out;
        for (const auto& lf : letters) {
            std::vector<Q> row;
            for (long k = 1; k <= floor_long(lf.lambda); ++k) row.push_back(lf.at(Q(k)) - lf.at(Q(k - 1)));
            out.push_back(std::move(row));
        }
        return out;
    }
};

// d.directive() = (omega_{-i}, ..., omega_{-1}, omega_0); level i = size - 1.
// phis[j] is the weight attached to substitution j (zero mean for its letter counts).
inline SadicFunctions sadic_functions(const DirectiveSequence& d, const std::vector<WeightFunction>& phis) {
    const auto& subs = d.substitutions();
    const auto& dir = d.directive();
    if (dir.size() < 2) throw std::invalid_argument("directive must hold at least omega_{-1} and omega_0");
    if (phis.size() != subs.size()) throw std::invalid_argument("one weight function per substitution required");
    auto d0 = delta_vector(subs[0]);
    if (d0[0] != 0) throw std::invalid_argument("delta_1 must vanish");
    if (d0.size() < 2 || d0[1] == 0) throw std::invalid_argument("delta_2 must be nonzero");
    for (const auto& s : subs)
        if (delta_vector(s) != d0) throw std::invalid_argument("substitutions do not share one delta vector");
    int i = static_cast<int>(dir.size()) - 1;
    std::vector<const Substitution*> expand;
    std::vector<std::vector<long>> weights;
    for (int j = 0; j < i; ++j) expand.push_back(&d.at(static_cast<std::size_t>(j)));
    for (int j = 0; j <= i; ++j) weights.push_back(common_column(d.at(static_cast<std::size_t>(j))));
    auto tables = build_psi_levels(expand, weights, phis[static_cast<std::size_t>(dir[0])]);
    Q lam(static_cast<long>(d.length()));
    Q k = normalization(d0[1], lam, i);
    SadicFunctions out;
    out.level = i;
    out.past.assign(dir.begin(), dir.end() - 1);
    out.omega0 = dir.back();
    const auto& t = tables.back();
    for (std::size_t a = 0; a < t.values.size(); ++a) {
        LetterFunction lf{static_cast<Letter>(a), i, lam, qpow(lam, -(i - 1)), {}, t.at(0, 0) / k};
        for (const auto& x : t.values[a]) lf.values.push_back(x / k);
        out.letters.push_back(std::move(lf));
    }
    return out;
}

inline std::vector<Substitution> sadic_default_family() {
    return {Substitution::parse("a->aaabb,b->aabab"), Substitution::parse("a->ababb,b->abbab")};
}

struct SadicIncrementReport {
    int max_level = 0;
    std::size_t contexts = 0;
    bool depends_only_on_last = true;
};

// Enumerates every past of length i <= max_level and every omega_0, grouping the
// integer increments by omega_{-1}.
inline SadicIncrementReport sadic_increment_check(const std::vector<Substitution>& family,
                                                  const std::vector<WeightFunction>& phis, int max_level) {
    SadicIncrementReport rep{max_level, 0, true};
    auto m = static_cast<int>(family.size());
    for (int i = 1; i <= max_level; ++i) {
        std::vector<std::vector<std::vector<Q>>> ref(family.size());
        std::vector<bool> seen(family.size(), false);
        std::size_t total = 1;
        for (int j = 0; j <= i; ++j) total *= static_cast<std::size_t>(m);
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<int> dir;
            std::size_t c = code;
            for (int j = 0; j <= i; ++j) {
                dir.push_back(static_cast<int>(c % static_cast<std::size_t>(m)));
                c /= static_cast<std::size_t>(m);
            }
            auto f = sadic_functions(DirectiveSequence(family, dir), phis);
            auto inc = f.integer_increments();
            auto last = static_cast<std::size_t>(dir[static_cast<std::size_t>(i - 1)]);
            ++rep.contexts;
            if (!seen[last]) {
                seen[last] = true;
                ref[last] = inc;
            } else if (ref[last] != inc) {
                rep.depends_only_on_last = false;
            }
        }
    }
    return rep;
}

}  // namespace bp
