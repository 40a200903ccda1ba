#include <bp/birkhoff.hpp>
#include <bp/nilgroup.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace bp;

namespace {

const Substitution ptm = Substitution::parse("a->ab,b->ba");

std::vector<Q> qv(std::initializer_list<long> xs) {
    std::vector<Q> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// six letters weighted 1, 10, 100, ... so a sum reads off its coefficients
WeightFunction digits_phi() {
    Alphabet A({"u0", "u1", "u2", "u3", "u4", "u5"});
    std::vector<Q> v;
    long p = 1;
    for (int i = 0; i < 6; ++i, p *= 10) v.emplace_back(p);
    return {A, v};
}

Word random_word(std::mt19937_64& rng, std::size_t n) {
    Word w(n);
    for (auto& l : w) l = static_cast<Letter>(rng() % 2);
    return w;
}

}  // namespace

TEST(IteratedSums, PtmFirstColumn) {
    auto phi = WeightFunction::parse(ptm.alphabet(), "a=1,b=-1");
    auto cols = iterated_sums(phi, fixed_point_prefix(ptm, 0, 8), 2);
    EXPECT_EQ(cols[0].values[1], 1);
    EXPECT_EQ(cols[0].values[2], 0);
    EXPECT_EQ(cols[0].values[3], -1);
}

TEST(IteratedSums, StartAtZero) {
    std::mt19937_64 rng(3);
    auto phi = WeightFunction::parse(ptm.alphabet(), "a=3/7,b=-2");
    auto cols = iterated_sums(phi, random_word(rng, 20), 6);
    for (const auto& c : cols) EXPECT_EQ(c.values[0], 0);
}

TEST(IteratedSums, ConstantWord) {
    auto phi = WeightFunction::indicator(ptm.alphabet(), 0);
    auto cols = iterated_sums(phi, ptm.alphabet().word("aaa"), 3);
    EXPECT_EQ(cols[0].values[3], 3);
    EXPECT_EQ(cols[1].values[3], 3);
    EXPECT_EQ(cols[2].values[3], 1);
}

TEST(ExplicitSum, OrderOneIsPlainSum) {
    auto phi = digits_phi();
    Word u{0, 1, 2, 3, 4, 5};
    EXPECT_EQ(explicit_sum(phi, u, 1, 6), 111111);
}

TEST(ExplicitSum, PascalRows) {
    auto phi = digits_phi();
    Word u{0, 1, 2, 3, 4, 5};
    EXPECT_EQ(explicit_sum(phi, u, 2, 3), 12);   // 2 u0 + u1
    EXPECT_EQ(explicit_sum(phi, u, 3, 5), 136);  // 6 u0 + 3 u1 + u2
    EXPECT_THROW(explicit_sum(phi, u, 2, 7), std::out_of_range);
}

TEST(ExplicitSum, MatchesRecurrence) {
    std::mt19937_64 rng(default_seed());
    for (int t = 0; t < 5; ++t) {
        WeightFunction phi(ptm.alphabet(), {random_rational(rng), random_rational(rng)});
        auto u = random_word(rng, 200);
        auto cols = iterated_sums(phi, u, 6);
        for (int l = 1; l <= 6; ++l)
            for (std::size_t n = 0; n <= 200; n += 7) EXPECT_EQ(explicit_sum(phi, u, l, n), cols[l - 1].values[n]);
    }
}

TEST(Delta, KnownVectors) {
    EXPECT_EQ(delta_vector(Substitution::parse("a->aab,b->aba")), qv({0, 1, 0}));
    EXPECT_EQ(delta_vector(Substitution::parse("a->abbaa,b->baaab")), qv({0, -1, 2, 3, 1}));
    EXPECT_EQ(delta_vector(Substitution::parse("a->ababa,b->baaab")), qv({0, 0, 3, 3, 1}));
    EXPECT_EQ(delta_vector(ptm), qv({0, 1}));
}

TEST(Delta, Errors) {
    EXPECT_THROW(delta_vector(Substitution::parse("a->aab,b->ab")), std::invalid_argument);
    EXPECT_THROW(delta_vector(Substitution::parse("a->ab,b->ab")), std::invalid_argument);
}

TEST(Delta, IndependenceOfPhi) {
    auto s = Substitution::parse("a->aab,b->baa");
    EXPECT_TRUE(delta_independence_check(s, 10));
    EXPECT_EQ(delta_vector(s), qv({0, 2, 1}));
}

TEST(Delta, AffineInvariance) {
    auto s = Substitution::parse("a->abbaa,b->baaab");
    auto phi = WeightFunction::parse(s.alphabet(), "a=2/3,b=-5");
    EXPECT_EQ(delta_quotient(s, phi), delta_quotient(s, phi.affine(Q(-7, 2), Q(11))));
}

TEST(Delta, IdenticalImagesGiveZeroQuotient) {
    auto s = Substitution::parse("a->aba,b->aba");
    auto phi = WeightFunction::parse(s.alphabet(), "a=1,b=4");
    EXPECT_EQ(delta_quotient(s, phi), qv({0, 0, 0}));
}

TEST(Delta, FirstCoordinateMatchesLetterCounts) {
    for (auto spec : {"a->aab,b->aba", "a->abb,b->aab", "a->aaab,b->abab", "a->ab,b->aa"}) {
        auto s = Substitution::parse(spec);
        EXPECT_EQ(delta_vector(s)[0] == 0, abelianization(s).equal_columns) << spec;
    }
}

TEST(Eigencheck, PtmBlockRelations) {
    auto rep = ptm_block_eigencheck(512);
    ASSERT_EQ(rep.relations.size(), 4u);
    for (const auto& r : rep.relations) EXPECT_TRUE(r.holds) << r.name;
    EXPECT_TRUE(rep.ok());
    for (const auto& g : rep.growth) {
        if (g.name == "phi_0" || g.name == "phi_1")
            EXPECT_TRUE(g.bounded_trend) << g.name;
        else
            EXPECT_FALSE(g.bounded_trend) << g.name;
    }
}

TEST(Eigencheck, GrowthTrendUsesCompleteWindows) {
    std::vector<Q> sums{0, 1, 1, 1, 1, 1, 1, 1, 50};
    auto g = growth_trend("x", sums);
    EXPECT_EQ(g.window_max.size(), 3u);
    EXPECT_TRUE(g.bounded_trend);
    sums.back() = 1;
    sums[7] = 3;
    EXPECT_FALSE(growth_trend("x", sums).bounded_trend);
}

TEST(Properties, AffineEquivariance) {
    std::mt19937_64 rng(default_seed() + 1);
    for (int t = 0; t < 20; ++t) {
        WeightFunction phi(ptm.alphabet(), {random_rational(rng), random_rational(rng)});
        Q alpha = random_rational(rng), beta = random_rational(rng);
        auto u = random_word(rng, 40);
        auto a = iterated_sums(phi, u, 5), b = iterated_sums(phi.affine(alpha, beta), u, 5);
        for (int i = 1; i <= 5; ++i)
            for (std::size_t n = 0; n <= 40; ++n)
                EXPECT_EQ(b[i - 1].values[n], alpha * a[i - 1].values[n] + binom(Q(static_cast<long>(n)), i) * beta);
    }
}

TEST(Properties, AgreesWithGroupProjection) {
    std::mt19937_64 rng(default_seed() + 2);
    for (int t = 0; t < 30; ++t) {
        WeightFunction phi(ptm.alphabet(), {random_rational(rng), random_rational(rng)});
        auto u = random_word(rng, rng() % 31);
        auto g = project(phi, u, 8);
        auto cols = iterated_sums(phi, u, 8);
        EXPECT_EQ(g.z, static_cast<long>(u.size()));
        for (int l = 1; l <= 8; ++l) EXPECT_EQ(g.s[l - 1], cols[l - 1].values[u.size()]);
    }
}

TEST(Csv, Header) {
    auto phi = WeightFunction::indicator(ptm.alphabet(), 0);
    auto csv = columns_csv(iterated_sums(phi, ptm.alphabet().word("ab"), 2));
    EXPECT_EQ(csv, "n,S1,S2\n0,0,0\n1,1,0\n2,1,1\n");
}

TEST(WeightParse, Errors) {
    EXPECT_THROW(WeightFunction::parse(ptm.alphabet(), "c=1"), ParseError);
    EXPECT_THROW(WeightFunction::parse(ptm.alphabet(), "a=x"), ParseError);
    auto phi = WeightFunction::parse(ptm.alphabet(), "b=-1/2");
    EXPECT_EQ(phi(0), 0);
    EXPECT_EQ(phi(1), Q(-1, 2));
}
