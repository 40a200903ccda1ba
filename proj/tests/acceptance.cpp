#include <bp/bp.hpp>

#include "reference_tables.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string join(const std::vector<Q>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
    return s;
}

WeightFunction phi_of(const Substitution& s, const char* text) { return WeightFunction::parse(s.alphabet(), text); }

const Substitution ptm = Substitution::parse("a->ab,b->ba");
const Substitution aab_aba = Substitution::parse("a->aab,b->aba");
const Substitution aab_baa = Substitution::parse("a->aab,b->baa");
const Substitution abbaa = Substitution::parse("a->abbaa,b->baaab");

Outcome delta_vectors() {
    auto t0 = Clock::now();
    struct Row {
        const char* sub;
        std::vector<Q> delta;
    };
    std::vector<Row> rows = {
        {"a->ab,b->ba", {0, 1}},
        {"a->aab,b->aba", {0, 1, 0}},
        {"a->aab,b->baa", {0, 2, 1}},
        {"a->abbaa,b->baaab", {0, -1, 2, 3, 1}},
        {"a->ababa,b->baaab", {0, 0, 3, 3, 1}},
        {"a->abbaa,b->baaba", {0, 0, 2, 3, 1}},
        {"a->aaabb,b->aabab", {0, 1, 1, 0, 0}},
        {"a->ababb,b->abbab", {0, 1, 1, 0, 0}},
    };
    bool ok = true;
    std::string bad;
    for (const auto& r : rows)
        if (delta_vector(Substitution::parse(r.sub)) != r.delta) {
            ok = false;
            bad += std::string(" ") + r.sub;
        }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << rows.size() << " substitutions" << (bad.empty() ? "" : ", mismatches:" + bad) << ", " << dt << " s";
    return {ok && dt < 1.0, os.str()};
}

Outcome c_tables() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    auto routes = [](const Substitution& s, const WeightFunction& phi, int count) {
        auto L = build_from_pair(phi, s, static_cast<std::size_t>(count));
        return std::vector<CVector>{c_from_R(L, count), c_from_eigen(L, count), c_from_cobound(s, phi, count)};
    };
    struct Case {
        const Substitution* s;
        std::vector<Q> row;
        const char* name;
    };
    for (const auto& cs : {Case{&aab_aba, reftables::c_row_aab_aba(), "aab/aba"},
                           Case{&aab_baa, reftables::c_row_aab_baa(), "aab/baa"}}) {
        auto rs = routes(*cs.s, phi_of(*cs.s, "a=1,b=-2"), 7);
        for (const auto& r : rs) {
            if (r.values != rs[0].values) ok = false;
            std::vector<Q> shifted(r.values.begin() + 1, r.values.end());
            if (shifted != cs.row) ok = false;
        }
        os << "\n    " << cs.name << " computed c_0..c_6 = (" << join(rs[0].values) << ")";
    }
    auto rp = routes(ptm, phi_of(ptm, "a=1,b=-1"), 9);
    for (const auto& r : rp)
        for (const auto& v : r.values)
            if (v != 0) ok = false;
    double dt = seconds_since(t0);
    os << "\n    reference row matches computed c_1..c_6; computed c_0 is the mean of phi (0 here), an index offset"
       << "\n    PTM c_0..c_8 all zero by three routes; " << dt << " s";
    return {ok && dt < 5.0, os.str()};
}

Outcome q_tables() {
    bool ok = true;
    std::ostringstream os;
    for (long l : {2L, 3L, 4L, 5L, 7L})
        if (!(q_table_series(Q(l), 25) == q_table_recurrence(Q(l), 25))) {
            ok = false;
            os << " routes differ at lambda=" << l << ";";
        }
    int spots = 0;
    for (long l : {2L, 3L}) {
        auto t = q_table_recurrence(Q(l), 6);
        for (const auto& e : reftables::q_closed_forms()) {
            ++spots;
            if (t.at(e.i, e.n) != e.poly(Q(l))) {
                ok = false;
                os << " spot (" << e.i << "," << e.n << ") at lambda=" << l << ";";
            }
        }
    }
    for (long l : {2L, 3L}) {
        auto r = q_asymptotics_check(l, 1, 30);
        if (!r.sup_bound_ok) ok = false;
        os << " sup/(2l-1)^n max " << format_double(r.worst_bound_fraction, 4) << " at lambda=" << l << ";";
    }
    os << " routes agree for lambda in {2,3,4,5,7}, N=25; " << spots << " spot values";
    return {ok, os.str()};
}

Outcome pi_table() {
    Alphabet ab = ptm.alphabet();
    auto phi = WeightFunction::indicator(ab, 0);
    std::size_t good = 0;
    for (const auto& [word, s] : reftables::length4_projection()) {
        std::vector<Q> v(s.begin(), s.end());
        if (project(phi, ab.word(word), 4) == Element{Q(4), v}) ++good;
    }
    return {good == 16, std::to_string(good) + "/16 rows"};
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(default_seed());
    std::vector<const Substitution*> subs{&ptm, &aab_baa, &abbaa};
    std::size_t cases = 0, bad = 0;
    for (const auto* s : subs) {
        std::uniform_int_distribution<int> len(1, 4), letter(0, 1);
        for (int seed = 0; seed < 20; ++seed) {
            std::vector<Q> v{random_rational(rng), random_rational(rng)};
            while (v[0] == v[1]) v[1] = random_rational(rng);
            WeightFunction phi(s->alphabet(), v);
            Word u;
            int n = len(rng);
            for (int j = 0; j < n; ++j) u.push_back(static_cast<Letter>(letter(rng)));
            for (std::size_t trunc : {1u, 4u, 8u}) {
                auto L = build_from_pair(phi, *s, trunc);
                for (int k = 0; k <= 5; ++k) {
                    ++cases;
                    if (fast_birkhoff(L, phi, u, k) != project(phi, s->iterate(u, k), trunc)) ++bad;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << cases << " cases over lambda in {2,3,5}, k <= 5, trunc in {1,4,8}, 20 seeds each, " << bad << " mismatches, " << dt
       << " s";
    return {bad == 0 && dt < 30.0, os.str()};
}

// Recentring at every level l <= levels along one stream, multiples n lambda^l with n <= lambda^4.
bool recentring_all(const Substitution& s, const WeightFunction& phi, int levels) {
    auto L = build_from_pair(phi, s, static_cast<std::size_t>(levels) + 1);
    auto c = c_from_R(L, levels + 1).values;
    auto ps = p_polynomials(c);
    std::size_t lam = s.length();
    std::size_t N = ipow(lam, 4 + levels);
    Word w = fixed_point_prefix(s, 0, N);
    SumStream st(phi, levels);
    for (std::size_t n = 1; n <= N; ++n) {
        st.push(w[n - 1]);
        for (int l = 1; l <= levels; ++l) {
            std::size_t block = ipow(lam, l);
            if (n % block || n / block > ipow(lam, 4)) continue;
            auto ul = static_cast<std::size_t>(l);
            if (st[l] != ps[ul].p(Q(static_cast<long>(n))) - c[ul]) return false;
        }
    }
    return true;
}

Outcome exact_identities() {
    struct Case {
        const Substitution* s;
        const char* phi;
        const char* name;
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& cs : {Case{&ptm, "a=1,b=-1", "PTM"}, Case{&aab_aba, "a=1,b=-2", "aab/aba"},
                           Case{&aab_baa, "a=1,b=-2", "aab/baa"}, Case{&abbaa, "a=2,b=-3", "abbaa/baaab"}}) {
        auto t0 = Clock::now();
        auto phi = phi_of(*cs.s, cs.phi);
        auto cd = check_construction(*cs.s, phi);
        PsiChain chain(*cs.s, cd.phi, 7);
        std::vector<Approximant> fs;
        for (int i = 1; i <= 7; ++i) fs.push_back(approximant_from_chain(chain, cd, i, cd.lambda * cd.lambda));
        bool step = true, integral = true;
        for (int i = 2; i <= 6; ++i) step = step && step_identity_check(fs[i - 1].f, fs[i - 2].f);
        for (int i = 1; i <= 6; ++i) integral = integral && discrete_integral_check(fs[i - 1].f, fs[i].f);
        bool cob = cobord_sum_identity_check(chain, 6, ipow(cs.s->length(), 4)).ok;
        bool rec = recentring_all(*cs.s, phi, 6);
        ok = ok && step && integral && cob && rec;
        os << "\n    " << cs.name << ": step " << (step ? "ok" : "FAIL") << ", integral " << (integral ? "ok" : "FAIL")
           << ", recentring " << (rec ? "ok" : "FAIL") << ", cobord " << (cob ? "ok" : "FAIL") << " ("
           << format_double(seconds_since(t0), 3) << " s)";
    }
    return {ok, os.str()};
}

Outcome asymptotics() {
    bool ok = true;
    std::ostringstream os;
    for (long l : {2L, 3L, 5L}) {
        Q lam(l);
        auto t = q_table_recurrence(lam, 201);
        for (int n = 1; n <= 200; ++n)
            if (t.at(n, n + 1) != (lam - 1) / 2 * n * qpow(lam, n)) {
                ok = false;
                os << " q_{n,n+1} fails at lambda=" << l << " n=" << n << ";";
                break;
            }
    }
    auto r = q_asymptotics_check(2, 2, 200);
    if (!(r.ratio_float > 0.95 && r.ratio_float < 1.05)) ok = false;
    os << " q_{n,n+1} exact for n <= 200 at lambda in {2,3,5}; q_{200,202} / equivalent = "
       << format_double(r.ratio_float, 6);
    return {ok, os.str()};
}

Outcome convergence() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    struct Case {
        const Substitution* s;
        const char* phi;
        const char* name;
    };
    for (const auto& cs : {Case{&ptm, "a=1,b=-1", "PTM"}, Case{&aab_aba, "a=1,b=-2", "aab/aba"}}) {
        auto rep = convergence_report(*cs.s, phi_of(*cs.s, cs.phi), 10);
        bool mono = true;
        // sup|f^(i+1) - f^(i)| is sup_diff_prev of level i+1
        for (int i = 5; i <= 9; ++i)
            if (!(*rep.levels[static_cast<std::size_t>(i)].sup_diff_prev < *rep.levels[static_cast<std::size_t>(i - 1)].sup_diff_prev))
                mono = false;
        Q early = 0, late = 0;
        for (const auto& lv : rep.levels) (lv.i <= 5 ? early : late) = std::max(lv.i <= 5 ? early : late, lv.sup_abs);
        bool bounded = late <= early;
        ok = ok && mono && bounded && rep.integer_increments_ok;
        os << "\n    " << cs.name << ": diffs i=4..9";
        for (int i = 4; i <= 9; ++i)
            os << " " << format_double(rep.levels[static_cast<std::size_t>(i)].sup_diff_prev->get_d(), 4);
        os << (mono ? " (decreasing)" : " (NOT decreasing)") << "; sup|f| levels 1-5 " << format_double(early.get_d(), 5)
           << ", 6-10 " << format_double(late.get_d(), 5) << "; increments " << (rep.integer_increments_ok ? "exact" : "FAIL");
    }
    double dt = seconds_since(t0);
    os << "\n    " << dt << " s";
    return {ok && dt < 120.0, os.str()};
}

Outcome zero_windows() {
    auto a = approximant(ptm, phi_of(ptm, "a=1,b=-1"), 8, Q(16));
    bool ok = true;
    std::ostringstream os;
    for (long t : {1L, 2L}) {
        auto z = zero_window_scan(a.f, Q(1), Q(t));
        if (z.kind != ZeroScan::Kind::SignChange) ok = false;
        os << " t=" << t << ": "
           << (z.kind == ZeroScan::Kind::SignChange ? "sign change in [" + z.left.get_str() + ", " + z.right.get_str() + "]"
                                                    : std::string("no sign change"))
           << ";";
    }
    return {ok, os.str()};
}

Outcome prolongation() {
    auto run = [](std::size_t N) {
        auto base = sample_base([](double x) { return flat_bump(x, 2.0); }, 2.0, N);
        return extend_solution(base, 2.0, 1.0, 2, 1).residual;
    };
    double r1 = run(4096), r2 = run(8192);
    std::ostringstream os;
    os << "residual " << format_double(r1, 4) << " at grid 2^-12, " << format_double(r2, 4) << " at 2^-13, reduction "
       << format_double(r1 / r2, 4) << "x";
    return {r1 < 1e-3 && r1 / r2 >= 3.0, os.str()};
}

Outcome delta2_zero() {
    auto rep = delta2_zero_experiment(Substitution::parse("a->ababa,b->baaab"), 3);
    bool ok = rep.ok();
    std::ostringstream os;
    std::vector<Q> per_n;
    for (const auto& t : rep.traces) {
        if (!t.even) continue;
        ok = ok && t.integer_identical && t.integer_values.size() > 1;
        per_n.push_back(t.integer_values.front());
        os << " n=" << t.n << ": " << t.integer_values.size() << " integer points, "
           << (t.integer_identical ? "identical" : "NOT identical") << ";";
    }
    bool across = true;
    for (const auto& v : per_n) across = across && v == per_n.front();
    os << " common value per n: (" << join(per_n) << "), " << (across ? "equal" : "not equal") << " across n;"
       << " fast path " << (rep.ok() ? "agrees" : "DISAGREES");
    return {ok, os.str()};
}

Outcome sadic() {
    auto fam = sadic_default_family();
    bool ok = true;
    for (const auto& s : fam) ok = ok && delta_vector(s) == std::vector<Q>{0, 1, 1, 0, 0};
    std::vector<WeightFunction> phis;
    for (const auto& s : fam) phis.push_back(check_construction(s, recommended_phi(s)).phi);
    auto rep = sadic_increment_check(fam, phis, 4);
    ok = ok && rep.depends_only_on_last;
    std::ostringstream os;
    os << "delta (0,1,1,0,0) for both; " << rep.contexts << " directive contexts, i <= 4, increments "
       << (rep.depends_only_on_last ? "depend only on omega_{-1}" : "DEPEND ON MORE");
    return {ok, os.str()};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"delta vectors", delta_vectors},
        {"c tables", c_tables},
        {"q tables", q_tables},
        {"projection table", pi_table},
        {"fast path oracle", oracle_equivalence},
        {"exact identities", exact_identities},
        {"q asymptotics", asymptotics},
        {"convergence", convergence},
        {"zero windows", zero_windows},
        {"prolongation", prolongation},
        {"delta_2 = 0 integer points", delta2_zero},
        {"s-adic increments", sadic},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first << ": " << o.detail << "\n";
        std::cout.flush();
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed ? 1 : 0;
}
