#include <bp/experiments.hpp>

#include <gtest/gtest.h>

using namespace bp;

namespace {

const Substitution sigma1 = Substitution::parse("a->ababa,b->baaab");
const Substitution sigma2 = Substitution::parse("a->abbaa,b->baaba");

std::vector<Q> qv(std::initializer_list<long> xs) {
    std::vector<Q> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST(Delta2Zero, DeltaVectors) {
    EXPECT_EQ(delta_vector(sigma1), qv({0, 0, 3, 3, 1}));
    EXPECT_EQ(delta_vector(sigma2), qv({0, 0, 2, 3, 1}));
}

TEST(Delta2Zero, EvenFamilyIntegerPoints) {
    auto r = delta2_zero_experiment(sigma1, 3);
    ASSERT_EQ(r.traces.size(), 6u);
    for (const auto& t : r.traces) {
        EXPECT_TRUE(t.fast_path_ok) << t.n;
        EXPECT_TRUE(t.integer_identical) << t.n << (t.even ? " even" : " odd");
    }
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.traces[0].integer_values[0], Q(1, 15));
    EXPECT_EQ(r.traces[2].integer_values[0], Q(1, 15));
    EXPECT_EQ(r.traces[4].integer_values[0], Q(26569, 421875));
}

TEST(Delta2Zero, SecondSubstitution) {
    auto r = delta2_zero_experiment(sigma2, 2);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.traces[0].integer_values[0], Q(-3, 5));
    EXPECT_EQ(r.traces[2].integer_values[0], Q(-11, 25));
}

TEST(Delta2Zero, Errors) {
    EXPECT_THROW(delta2_zero_experiment(Substitution::parse("a->aab,b->aba"), 2), std::invalid_argument);
    EXPECT_THROW(delta2_zero_experiment(Substitution::parse("a->aab,b->abb"), 2), std::invalid_argument);
}

TEST(Delta2Zero, CsvShape) {
    auto r = delta2_zero_experiment(sigma1, 1);
    auto csv = r.csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "family,n,t,x,value_exact,value_float");
    EXPECT_NE(csv.find("even,1,5,1,1/15,"), std::string::npos);
}

TEST(Sadic, SharedDelta) {
    auto fam = sadic_default_family();
    EXPECT_EQ(delta_vector(fam[0]), qv({0, 1, 1, 0, 0}));
    EXPECT_EQ(delta_vector(fam[1]), qv({0, 1, 1, 0, 0}));
}

TEST(Sadic, ConstantDirectiveMatchesFixedPoint) {
    auto fam = sadic_default_family();
    std::vector<WeightFunction> phis{recommended_phi(fam[0]), recommended_phi(fam[1])};
    for (int k : {0, 1}) {
        auto f = sadic_functions(DirectiveSequence(fam, std::vector<int>(4, k)), phis);
        auto a = approximant(fam[static_cast<std::size_t>(k)], phis[static_cast<std::size_t>(k)], 3);
        for (int l : {0, 1}) EXPECT_EQ(f.letters[l].values, a.letters[l].values);
    }
}

TEST(Sadic, IncrementsDependOnLastSubstitution) {
    auto fam = sadic_default_family();
    std::vector<WeightFunction> phis{recommended_phi(fam[0]), recommended_phi(fam[1])};
    auto r = sadic_increment_check(fam, phis, 4);
    EXPECT_TRUE(r.depends_only_on_last);
    EXPECT_EQ(r.contexts, 4u + 8u + 16u + 32u);
}

TEST(Sadic, Errors) {
    auto fam = sadic_default_family();
    std::vector<WeightFunction> phis{recommended_phi(fam[0]), recommended_phi(fam[1])};
    EXPECT_THROW(sadic_functions(DirectiveSequence(fam, {0}), phis), std::invalid_argument);
    std::vector<Substitution> mixed{fam[0], Substitution::parse("a->abbaa,b->baaab")};
    EXPECT_THROW(sadic_functions(DirectiveSequence(mixed, {0, 1, 0}), phis), std::invalid_argument);
    std::vector<Substitution> lengths{fam[0], Substitution::parse("a->aab,b->aba")};
    EXPECT_THROW(DirectiveSequence(lengths, {0, 1}), std::invalid_argument);
}
