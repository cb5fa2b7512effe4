#include <gtest/gtest.h>

#include "ncft/convolve.hpp"
#include "ncft/random.hpp"
#include "oracles.hpp"

using namespace ncft;

namespace {

Word W(const char* text) { return Word::parse(text); }

const HatState mu = HatState::symbolic(Family::mu);
const HatState nu = HatState::symbolic(Family::nu);

std::vector<Scalar> symbols(Family f, std::size_t n)
{
    std::vector<Scalar> out{Scalar(1)};
    for (std::size_t k = 1; k <= n; ++k) out.push_back(Scalar::symbol({f, k}));
    return out;
}

} // namespace

TEST(HatState, RejectsGeneralBacking)
{
    EXPECT_THROW(HatState(MomentFunction::general({{W("z"), Scalar(1)}})), GeneralBackingRejected);
}

TEST(Epsilon, ParseAndCode)
{
    EXPECT_EQ(EpsilonVector::parse("1121").str(), "1121");
    EXPECT_EQ(EpsilonVector::from_code(0b0100, 4).str(), "1121");
    EXPECT_EQ(EpsilonVector::parse("1121").leg_mask(2), PositionMask{0b0100});
    EXPECT_THROW(EpsilonVector::parse("1131"), ParseError);
}

TEST(EpsilonSplit, Examples)
{
    auto split = epsilon_split(W("zwzz"), EpsilonVector::parse("1121"));
    EXPECT_EQ(split.leg1, (std::vector<PositionMask>{0b1011}));
    EXPECT_EQ(split.leg2, (std::vector<PositionMask>{0b0100}));
    EXPECT_EQ(split.combined.str(), "{1,2,4}{3}");

    for (const Word& s : words_up_to(4, 1)) {
        auto one = epsilon_split(s, EpsilonVector::from_code(0, s.size()));
        EXPECT_EQ(one.leg1, (std::vector<PositionMask>{s.full_mask()}));
        EXPECT_TRUE(one.leg2.empty());
    }
    for (std::uint64_t code = 1; code + 1 < 32; ++code) {
        auto sp = epsilon_split(Word::z_pow(5), EpsilonVector::from_code(code, 5));
        EXPECT_EQ(sp.leg1.size(), 1U);
        EXPECT_EQ(sp.leg2.size(), 1U);
    }
    EXPECT_THROW(epsilon_split(W("zw"), EpsilonVector::parse("1")), LengthMismatch);
}

TEST(EpsilonSplit, AlwaysAdmissible)
{
    for (const Word& s : words_up_to(6, 1))
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << s.size()); ++code)
            EXPECT_TRUE(epsilon_split(s, EpsilonVector::from_code(code, s.size())).combined.is_admissible());
}

TEST(EpsilonMoment, Examples)
{
    EXPECT_EQ(epsilon_moment(mu, nu, W("zw"), EpsilonVector::parse("12")), Scalar::mu(1) * Scalar::nu(1));
    for (const Word& s : words_up_to(5, 1))
        EXPECT_EQ(epsilon_moment(mu, nu, s, EpsilonVector::from_code(0, s.size())), Scalar::mu(s.size()));
}

TEST(EpsilonMoment, CumulantExpansionForAlternatingLegs)
{
    const auto Lmu = cumulants_from_moments(mu.moments(), 4);
    const auto Lnu = cumulants_from_moments(nu.moments(), 4);
    const auto e = EpsilonVector::parse("1212");
    for (const Word& s : words_of_length(4)) {
        const Scalar d2 = s.is_z(1) ? 1 : 0;
        const Scalar d3 = s.is_z(2) ? 1 : 0;
        auto at = [&](std::initializer_list<std::size_t> p) { return Subword::at(s, p).word(); };
        Scalar expected = d2 * d3 * Lmu(at({1, 3})) * Lnu(at({2, 4})) +
                          d2 * Lmu(at({1, 3})) * Lnu(at({2})) * Lnu(at({4})) +
                          d3 * Lmu(at({1})) * Lnu(at({2, 4})) * Lmu(at({3})) +
                          Lmu(at({1})) * Lnu(at({2})) * Lmu(at({3})) * Lnu(at({4}));
        EXPECT_EQ(epsilon_cumulant_expansion(Lmu, Lnu, s, e), expected) << s;
        EXPECT_EQ(epsilon_moment(mu, nu, s, e), expected) << s;
    }
}

TEST(EpsilonMoment, CumulantExpansionEverywhere)
{
    const auto Lmu = cumulants_from_moments(mu.moments(), 4);
    const auto Lnu = cumulants_from_moments(nu.moments(), 4);
    for (const Word& s : words_up_to(4, 1))
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << s.size()); ++code) {
            auto e = EpsilonVector::from_code(code, s.size());
            EXPECT_EQ(epsilon_moment(mu, nu, s, e), epsilon_cumulant_expansion(Lmu, Lnu, s, e)) << s << " " << e.str();
        }
}

TEST(FilteredConvolve, LowOrders)
{
    EXPECT_EQ(filtered_convolve(mu, nu, Word{}), Scalar(1));
    for (const char* t : {"z", "w"}) EXPECT_EQ(filtered_convolve(mu, nu, W(t)), Scalar::parse("mu1 + nu1"));
    for (const Word& s : words_of_length(2))
        EXPECT_EQ(filtered_convolve(mu, nu, s), Scalar::parse("mu2 + 2*mu1*nu1 + nu2"));
    const Scalar z_row = Scalar::parse("mu3 + 3*mu2*nu1 + 3*mu1*nu2 + nu3");
    const Scalar w_row = Scalar::parse("mu3 + 2*mu2*nu1 + mu1^2*nu1 + nu3 + 2*mu1*nu2 + mu1*nu1^2");
    for (const char* t : {"zzz", "zzw", "wzz", "wzw"}) EXPECT_EQ(filtered_convolve(mu, nu, W(t)), z_row) << t;
    for (const char* t : {"zwz", "zww", "wwz", "www"}) EXPECT_EQ(filtered_convolve(mu, nu, W(t)), w_row) << t;
    EXPECT_EQ(filtered_convolve(mu, nu, W("zzwz")), filtered_convolve(mu, nu, W("zwzz")));
}

TEST(FilteredConvolve, RestrictionsMatchClassicalAndBooleanConvolution)
{
    const auto m = symbols(Family::mu, 6);
    const auto n = symbols(Family::nu, 6);
    EXPECT_EQ(restrict_classical(mu, nu, 2), Scalar::parse("mu2 + 2*mu1*nu1 + nu2"));
    EXPECT_EQ(restrict_boolean(mu, nu, 3), filtered_convolve(mu, nu, W("zwz")));
    for (std::size_t k = 0; k <= 6; ++k) {
        EXPECT_EQ(restrict_classical(mu, nu, k), oracle::binomial_convolution(m, n, k)) << k;
        EXPECT_EQ(restrict_boolean(mu, nu, k), oracle::boolean_convolution(m, n, k)) << k;
    }
}

TEST(FilteredConvolve, Symmetric)
{
    for (const Word& s : words_up_to(5)) EXPECT_EQ(filtered_convolve(mu, nu, s), filtered_convolve(nu, mu, s)) << s;
}

TEST(FilteredConvolve, OuterLettersDoNotMatter)
{
    for (std::size_t n = 2; n <= 5; ++n)
        for (const Word& s : words_of_length(n)) {
            const Scalar value = filtered_convolve(mu, nu, s);
            for (const Word& t : words_of_length(n))
                if (t.slice(1, n - 1) == s.slice(1, n - 1)) {
                    EXPECT_EQ(filtered_convolve(mu, nu, t), value) << s << " " << t;
                }
        }
}

TEST(Additivity, CumulantsAddOnRandomRationalStates)
{
    RationalSource rng(2024);
    for (int t = 0; t < 5; ++t) {
        const HatState a = HatState::sequence(rng.sequence(6));
        const HatState b = HatState::sequence(rng.sequence(6));
        const auto La = cumulants_from_moments(a.moments(), 6);
        const auto Lb = cumulants_from_moments(b.moments(), 6);
        const auto Lab = cumulants_from_moments(convolution_moments(a, b, 6), 6);
        for (const Word& s : words_up_to(6, 1)) ASSERT_EQ(Lab(s), La(s) + Lb(s)) << s;
    }
}

TEST(Additivity, SymbolicUpToFive)
{
    const auto Lmu = cumulants_from_moments(mu.moments(), 5);
    const auto Lnu = cumulants_from_moments(nu.moments(), 5);
    const auto L = cumulants_from_moments(convolution_moments(mu, nu, 5), 5);
    for (const Word& s : words_up_to(5, 1)) EXPECT_EQ(L(s), Lmu(s) + Lnu(s)) << s;
}

TEST(Classes, LengthThreeHasTwoClasses)
{
    auto classes = convolution_classes(mu, nu, 3);
    ASSERT_EQ(classes.size(), 2U);
    EXPECT_EQ(classes[0].size() + classes[1].size(), 8U);
    EXPECT_EQ(classes[0].front(), W("zzz"));
    EXPECT_EQ(convolution_classes(mu, nu, 4).size(), 3U);
}

TEST(ApEpsilon, BelowTheSplit)
{
    for (const Word& s : words_up_to(4, 1))
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << s.size()); ++code) {
            auto e = EpsilonVector::from_code(code, s.size());
            auto split = epsilon_split(s, e);
            for (const Partition& v : ap_epsilon(s, e)) EXPECT_TRUE(leq(v, split.combined));
        }
}
