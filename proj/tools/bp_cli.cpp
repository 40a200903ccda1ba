#include <bp/bp.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace bp;

namespace {

// Exit codes: 0 success, 1 identity violation or route disagreement, 2 bad input.
struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string sub, phi, domain, out, format = "csv";
    int level = -1, trunc = -1, digits = 17;
};

json qvec(const std::vector<Q>& v) { return json(to_strings(v)); }

void emit(const Common& c, const std::string& content) {
    if (c.out.empty())
        std::cout << content;
    else
        write_atomic(c.out, content);
}

Substitution need_sub(const Common& c) {
    if (c.sub.empty()) throw std::invalid_argument("--sub is required");
    return Substitution::parse(c.sub);
}

WeightFunction phi_or_default(const Common& c, const Substitution& s) {
    return c.phi.empty() ? recommended_phi(s) : WeightFunction::parse(s.alphabet(), c.phi);
}

std::optional<Q> domain_of(const Common& c) {
    if (c.domain.empty()) return std::nullopt;
    return parse_rational(c.domain);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

int cmd_analyze(const Common& c) {
    auto s = need_sub(c);
    json j;
    j["substitution"] = s.to_string();
    j["alphabet_size"] = s.alphabet().size();
    j["uniform"] = s.uniform();
    std::vector<std::string> reasons;
    if (!s.uniform()) {
        reasons.push_back("substitution is not of constant length");
        j["eligible"] = false;
        j["reasons"] = reasons;
        emit(c, json_text(j));
        return 0;
    }
    j["lambda"] = s.length();
    j["positive"] = s.positive();
    auto ab = abelianization(s);
    json cols = json::array();
    for (std::size_t a = 0; a < s.alphabet().size(); ++a) cols.push_back(ab.column(static_cast<Letter>(a)));
    j["abelianization"] = {{"columns", cols}, {"equal_columns", ab.equal_columns}};
    json seeds = json::array();
    for (std::size_t a = 0; a < s.alphabet().size(); ++a)
        if (s.image(static_cast<Letter>(a)).front() == static_cast<Letter>(a))
            seeds.push_back(s.alphabet().symbol(static_cast<Letter>(a)));
    j["fixed_point_seeds"] = seeds;
    std::optional<std::vector<Q>> d;
    if (s.alphabet().size() != 2) reasons.push_back("main construction needs a two-letter alphabet");
    if (!ab.equal_columns) reasons.push_back("images do not share one abelianization");
    if (s.all_images_equal()) reasons.push_back("all images equal: periodic subshift");
    if (seeds.empty()) reasons.push_back("no letter starts its own image");
    if (ab.equal_columns && s.alphabet().size() == 2) {
        d = delta_vector(s);
        j["delta"] = qvec(*d);
        if ((*d)[0] != 0) reasons.push_back("delta_1 is nonzero");
        else if (d->size() < 2 || (*d)[1] == 0) reasons.push_back("delta_2 vanishes");
    }
    j["eligible"] = reasons.empty();
    j["reasons"] = reasons;
    if (d && (*d)[0] == 0 && d->size() >= 3 && (*d)[1] == 0 && (*d)[2] != 0) j["suggestion"] = "delta2zero";
    emit(c, json_text(j));
    return 0;
}

int cmd_qtable(const Common& c, const std::string& lambda, int n) {
    Q lam = parse_rational(lambda);
    auto a = q_table_series(lam, n);
    auto b = q_table_recurrence(lam, n);
    if (!(a == b)) {
        std::ostringstream os;
        for (int i = 0; i <= n; ++i)
            for (int k = i; k <= n; ++k)
                if (a.at(i, k) != b.at(i, k))
                    os << "q[" << i << "][" << k << "] series=" << a.at(i, k).get_str()
                       << " recurrence=" << b.at(i, k).get_str() << "\n";
        std::cerr << os.str();
        throw Failure("q-table routes disagree");
    }
    if (c.format == "json") {
        json rows = json::array();
        for (int i = 0; i <= n; ++i)
            for (int k = i; k <= n; ++k) rows.push_back({{"i", i}, {"n", k}, {"value", a.at(i, k).get_str()}});
        emit(c, json_text({{"lambda", lam.get_str()}, {"N", n}, {"entries", rows}}));
    } else {
        emit(c, a.csv());
    }
    return 0;
}

int cmd_cvec(const Common& c) {
    auto s = need_sub(c);
    auto phi = phi_or_default(c, s);
    int count = c.trunc > 0 ? c.trunc : 8;
    auto L = build_from_pair(phi, s, static_cast<std::size_t>(count));
    std::vector<CVector> routes{c_from_R(L, count)};
    if (L.delta_at(2) != 0) routes.push_back(c_from_eigen(L, count));
    routes.push_back(c_from_cobound(s, phi, count));
    bool agree = true;
    std::ostringstream diff;
    for (std::size_t r = 1; r < routes.size(); ++r)
        for (int i = 0; i < count; ++i) {
            const auto& x = routes[0].values[static_cast<std::size_t>(i)];
            const auto& y = routes[r].values[static_cast<std::size_t>(i)];
            if (x != y) {
                agree = false;
                diff << "c_" << i << ": " << routes[0].route << "=" << x.get_str() << " " << routes[r].route << "="
                     << y.get_str() << "\n";
            }
        }
    if (c.format == "json") {
        json rs = json::array();
        for (const auto& r : routes) rs.push_back({{"route", r.route}, {"values", qvec(r.values)}});
        emit(c, json_text({{"substitution", s.to_string()}, {"phi", phi.to_string()}, {"routes", rs}, {"agree", agree}}));
    } else {
        std::ostringstream os;
        os << "i";
        for (const auto& r : routes) os << "," << r.route;
        os << ",value_float\n";
        for (int i = 0; i < count; ++i) {
            os << i;
            for (const auto& r : routes) os << "," << r.values[static_cast<std::size_t>(i)].get_str();
            os << "," << format_double(routes[0].values[static_cast<std::size_t>(i)].get_d(), c.digits) << "\n";
        }
        emit(c, os.str());
    }
    if (!agree) {
        std::cerr << diff.str();
        throw Failure("c-vector routes disagree");
    }
    return 0;
}

void letter_rows(std::ostringstream& os, const Alphabet& A, const std::vector<LetterFunction>& letters, int digits) {
    for (const auto& lf : letters) {
        std::string name = "f_" + A.symbol(lf.letter);
        for (std::size_t m = 0; m <= lf.values.size(); ++m) {
            const Q& v = m < lf.values.size() ? lf.values[m] : lf.end_value;
            os << name << "," << Q(lf.step * static_cast<long>(m)).get_str() << "," << v.get_str() << ","
               << format_double(v.get_d(), digits) << "\n";
        }
    }
}

json letters_json(const Alphabet& A, const std::vector<LetterFunction>& letters) {
    json j = json::object();
    for (const auto& lf : letters) {
        auto vals = to_strings(lf.values);
        vals.push_back(lf.end_value.get_str());
        j["f_" + A.symbol(lf.letter)] = vals;
    }
    return j;
}

int cmd_sample(const Common& c) {
    auto s = need_sub(c);
    auto phi = phi_or_default(c, s);
    int level = c.level > 0 ? c.level : 6;
    auto fs = approximants(s, phi, level, domain_of(c));
    const auto& a = fs.back();
    if (level >= 2 && !step_identity_check(a.f, fs[fs.size() - 2].f)) throw Failure("step identity violated");
    const auto& A = s.alphabet();
    if (c.format == "json") {
        json j{{"substitution", s.to_string()},
               {"level", level},
               {"lambda", a.f.lambda.get_str()},
               {"domain", a.f.domain.get_str()},
               {"step", a.f.step.get_str()},
               {"k", a.f.k.get_str()},
               {"f", to_strings(a.f.values)},
               {"letters", letters_json(A, a.letters)}};
        emit(c, json_text(j));
    } else {
        std::ostringstream os;
        os << "function,x,value_exact,value_float\n";
        for (std::size_t m = 0; m < a.f.values.size(); ++m)
            os << "f," << Q(a.f.step * static_cast<long>(m)).get_str() << "," << a.f.values[m].get_str() << ","
               << format_double(a.f.values[m].get_d(), c.digits) << "\n";
        letter_rows(os, A, a.letters, c.digits);
        emit(c, os.str());
    }
    return 0;
}

int cmd_verify(const Common& c, int corrupt) {
    auto s = need_sub(c);
    auto phi = phi_or_default(c, s);
    int levels = c.level > 0 ? c.level : 6;
    auto cd = check_construction(s, phi);
    Q dom = domain_of(c).value_or(cd.lambda * cd.lambda);
    PsiChain chain(s, cd.phi, levels + 1);
    if (corrupt >= 0) {
        auto& t = chain.mutable_tables().at(static_cast<std::size_t>(corrupt));
        auto& row = t.values.at(0);
        row.at(row.size() > 1 ? 1 : 0) += Q(1, 7);
    }
    std::vector<Approximant> fs;
    for (int i = 1; i <= levels + 1; ++i) fs.push_back(approximant_from_chain(chain, cd, i, dom));
    std::size_t lam = s.length();
    std::size_t nmax = ipow(lam, 4);

    std::vector<std::pair<std::string, bool>> checks;
    auto add = [&](std::string name, bool ok) { checks.emplace_back(std::move(name), ok); };
    add("zero_mean", zero_mean_check(chain));
    for (int i = 1; i <= levels; ++i) add("telescoping_" + std::to_string(i), telescoping_check(chain, i, nmax).ok);
    add("cobord_sum_identity", cobord_sum_identity_check(chain, levels, nmax).ok);
    for (int i = 2; i <= levels; ++i)
        add("step_identity_" + std::to_string(i),
            step_identity_check(fs[static_cast<std::size_t>(i - 1)].f, fs[static_cast<std::size_t>(i - 2)].f));
    for (int i = 1; i <= levels; ++i)
        add("discrete_integral_" + std::to_string(i),
            discrete_integral_check(fs[static_cast<std::size_t>(i - 1)].f, fs[static_cast<std::size_t>(i)].f));
    for (int i = 1; i <= levels; ++i)
        add("substitution_identity_" + std::to_string(i),
            substitution_identity_residual(s, fs[static_cast<std::size_t>(i - 1)], fs[static_cast<std::size_t>(i)]) == 0);
    for (int l = 1; l <= levels; ++l) add("recentring_" + std::to_string(l), recentring_check(s, phi, l, lam).exact);
    bool inc = true;
    for (int i = 1; i <= levels; ++i) inc = inc && integer_increment_check(s, cd.phi, fs[static_cast<std::size_t>(i - 1)]);
    add("integer_increments", inc);

    bool all = true;
    for (const auto& [n, ok] : checks) all = all && ok;
    if (c.format == "json") {
        json js = json::array();
        for (const auto& [n, ok] : checks) js.push_back({{"check", n}, {"pass", ok}});
        emit(c, json_text({{"substitution", s.to_string()}, {"levels", levels}, {"checks", js}, {"pass", all}}));
    } else {
        std::ostringstream os;
        os << "check,result\n";
        for (const auto& [n, ok] : checks) os << n << "," << (ok ? "PASS" : "FAIL") << "\n";
        emit(c, os.str());
    }
    if (!all) {
        for (const auto& [n, ok] : checks)
            if (!ok) std::cerr << "failed: " << n << "\n";
        throw Failure("verification failed");
    }
    return 0;
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            v.push_back(std::stod(field));
        } catch (const std::exception&) {
            if (v.empty()) continue;  // header
            throw std::invalid_argument("bad sample: " + line);
        }
    }
    return v;
}

struct ExtendArgs {
    double lambda = 2, delta = 1;
    int n_forward = 2, n_backward = 1, order = 2;
    std::size_t grid = 256;
    std::string input, base = "bump";
};

int cmd_extend(const Common& c, const ExtendArgs& e) {
    std::vector<double> base;
    if (!e.input.empty())
        base = read_samples(e.input);
    else if (e.base == "zero")
        base.assign(e.grid + 1, 0.0);
    else
        base = sample_base([&](double x) { return flat_bump(x, e.lambda); }, e.lambda, e.grid);
    auto ext = extend_solution(base, e.lambda, e.delta, e.n_forward, e.n_backward, e.order);
    auto pts = ext.samples();
    if (c.format == "json") {
        json xs = json::array(), fs = json::array();
        for (const auto& [x, f] : pts) {
            xs.push_back(x);
            fs.push_back(f);
        }
        emit(c, json_text({{"lambda", e.lambda}, {"delta", e.delta}, {"order", e.order}, {"residual", ext.residual},
                           {"x", xs}, {"f", fs}}));
    } else {
        std::ostringstream os;
        os << "x,value_float\n";
        for (const auto& [x, f] : pts) os << format_double(x, c.digits) << "," << format_double(f, c.digits) << "\n";
        emit(c, os.str());
    }
    std::cerr << "residual " << format_double(ext.residual, 6) << "\n";
    return 0;
}

int cmd_delta2zero(const Common& c) {
    auto s = need_sub(c);
    std::optional<WeightFunction> phi;
    if (!c.phi.empty()) phi = WeightFunction::parse(s.alphabet(), c.phi);
    int n = c.level > 0 ? c.level : 3;
    auto rep = delta2_zero_experiment(s, n, phi);
    if (c.format == "json") {
        json tr = json::array();
        for (const auto& t : rep.traces)
            tr.push_back({{"family", t.even ? "even" : "odd"},
                          {"n", t.n},
                          {"order", t.order},
                          {"time_scale", t.time_scale.get_str()},
                          {"value_scale", t.value_scale.get_str()},
                          {"integer_step", t.integer_step},
                          {"integer_values", to_strings(t.integer_values)},
                          {"integer_identical", t.integer_identical},
                          {"fast_path_ok", t.fast_path_ok},
                          {"values", to_strings(t.values)}});
        emit(c, json_text({{"substitution", s.to_string()}, {"delta", qvec(rep.delta)}, {"phi", rep.phi.to_string()},
                           {"traces", tr}, {"ok", rep.ok()}}));
    } else {
        emit(c, rep.csv(c.digits));
    }
    if (!rep.ok()) throw Failure("delta2zero identities violated");
    return 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

int cmd_sadic(const Common& c, const std::string& family_text, const std::string& directive_text,
              const std::string& phis_text) {
    std::vector<Substitution> family;
    if (!family_text.empty())
        for (const auto& part : split(family_text, ';')) family.push_back(Substitution::parse(part));
    else if (!c.sub.empty())
        family.push_back(Substitution::parse(c.sub));
    else
        family = sadic_default_family();
    std::vector<WeightFunction> phis;
    auto given = split(phis_text, ';');
    if (!given.empty() && given.size() != family.size()) throw std::invalid_argument("one weight per substitution required");
    for (std::size_t j = 0; j < family.size(); ++j) {
        auto phi = given.empty() ? recommended_phi(family[j]) : WeightFunction::parse(family[j].alphabet(), given[j]);
        phis.push_back(check_construction(family[j], phi).phi);
    }
    if (directive_text.empty()) {
        int lv = c.level > 0 ? c.level : 4;
        auto rep = sadic_increment_check(family, phis, lv);
        json j{{"max_level", rep.max_level}, {"contexts", rep.contexts}, {"depends_only_on_last", rep.depends_only_on_last}};
        emit(c, json_text(j));
        if (!rep.depends_only_on_last) throw Failure("increments depend on more than the last directive entry");
        return 0;
    }
    std::vector<int> dir;
    for (const auto& t : split(directive_text, ',')) dir.push_back(std::stoi(t) - 1);
    auto f = sadic_functions(DirectiveSequence(family, dir), phis);
    const auto& A = family[0].alphabet();
    if (c.format == "json") {
        json j{{"level", f.level}, {"letters", letters_json(A, f.letters)}};
        emit(c, json_text(j));
    } else {
        std::ostringstream os;
        os << "function,x,value_exact,value_float\n";
        letter_rows(os, A, f.letters, c.digits);
        emit(c, os.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded self-similar pantograph solutions from substitution Birkhoff sums"};
    app.set_config("--config", "", "TOML-style file of flag values; command-line flags win");
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--sub", c.sub, "substitution, e.g. a->ab,b->ba");
    app.add_option("--phi", c.phi, "weight function, e.g. a=1,b=-2");
    app.add_option("--level", c.level, "level or level bound");
    app.add_option("--trunc", c.trunc, "truncation or c-vector length");
    app.add_option("--domain", c.domain, "sampling domain Lambda (rational)");
    app.add_option("--out", c.out, "output file (written atomically); stdout if absent");
    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--digits", c.digits, "significant digits of float columns")->check(CLI::Range(1, 40));

    auto* analyze = app.add_subcommand("analyze", "delta vector, abelianization and eligibility (JSON)");
    auto* qtable = app.add_subcommand("qtable", "q table by both routes");
    std::string qlambda = "2";
    int qn = 5;
    qtable->add_option("--lambda", qlambda, "lambda (rational)");
    qtable->add_option("--n", qn, "table bound N")->check(CLI::NonNegativeNumber);
    auto* cvec = app.add_subcommand("cvec", "c-vector by every applicable route");
    auto* sample = app.add_subcommand("sample", "approximant f and letter functions at one level");
    auto* verify = app.add_subcommand("verify", "exact identity suite");
    int corrupt = -1;
    verify->add_option("--corrupt-psi", corrupt, "")->group("");
    auto* extend = app.add_subcommand("extend", "float prolongation of a flat solution on [1, lambda]");
    ExtendArgs ea;
    extend->add_option("--lambda", ea.lambda);
    extend->add_option("--delta", ea.delta);
    extend->add_option("--n-forward", ea.n_forward);
    extend->add_option("--n-backward", ea.n_backward);
    extend->add_option("--order", ea.order)->check(CLI::IsMember({2, 4}));
    extend->add_option("--grid", ea.grid, "intervals on [1, lambda]");
    extend->add_option("--input", ea.input, "samples on [1, lambda], one per line (last CSV column)");
    extend->add_option("--base", ea.base, "built-in input when --input is absent")->check(CLI::IsMember({"bump", "zero"}));
    auto* d2z = app.add_subcommand("delta2zero", "renormalized sums when delta_2 vanishes");
    auto* sadic = app.add_subcommand("sadic", "letter functions along a directive sequence");
    std::string family, directive, phis;
    sadic->add_option("--family", family, "substitutions separated by ';'");
    sadic->add_option("--directive", directive, "omega_{-i},...,omega_{-1},omega_0 as 1-based indices");
    sadic->add_option("--phis", phis, "one weight per substitution, separated by ';'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        if (*analyze) return cmd_analyze(c);
        if (*qtable) return cmd_qtable(c, qlambda, qn);
        if (*cvec) return cmd_cvec(c);
        if (*sample) return cmd_sample(c);
        if (*verify) return cmd_verify(c, corrupt);
        if (*extend) return cmd_extend(c, ea);
        if (*d2z) return cmd_delta2zero(c);
        if (*sadic) return cmd_sadic(c, family, directive, phis);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
