#include <gtest/gtest.h>

#include "ncft/cli.hpp"

using namespace ncft;
using namespace ncft::cli;

namespace {

Word W(const char* text) { return Word::parse(text); }

std::string sample(const char* name) { return std::string(NCFT_SAMPLE_DIR) + "/" + name; }

const HatState mu = HatState::symbolic(Family::mu);
const HatState nu = HatState::symbolic(Family::nu);

} // namespace

TEST(MomentSpec, ParsesEveryBacking)
{
    auto seq = parse_moment_spec(R"({"backing": "sequence", "moments": ["0", 1, "-2/3"]})");
    EXPECT_EQ(seq(W("zzz")), Scalar(Rational(-2, 3)));
    auto sym = parse_moment_spec(R"({"backing": "symbolic", "family": "nu"})");
    EXPECT_EQ(sym(W("zw")), Scalar::nu(2));
    auto gen = load_moment_spec(sample("general.json"));
    EXPECT_FALSE(gen.is_hat());
    EXPECT_EQ(gen(W("zw")), Scalar(Rational(1, 3)));
    EXPECT_EQ(load_moment_spec("mu"), MomentFunction::symbolic(Family::mu));
}

TEST(MomentSpec, RejectsMalformedInput)
{
    EXPECT_THROW(parse_moment_spec("{"), ParseError);
    EXPECT_THROW(parse_moment_spec(R"({"backing": "sequence", "moments": [1.5]})"), ParseError);
    EXPECT_THROW(parse_moment_spec(R"({"backing": "general", "moments": {"1": "2"}})"), ParseError);
    EXPECT_THROW(parse_moment_spec(R"({"backing": "general", "moments": {"zx": "2"}})"), ParseError);
    EXPECT_THROW(parse_moment_spec(R"({"backing": "cauchy"})"), ParseError);
    EXPECT_THROW(parse_moment_spec(R"({"backing": "symbolic", "family": "xi"})"), ParseError);
    EXPECT_THROW(load_moment_spec(sample("malformed.json")), ParseError);
    EXPECT_THROW(load_moment_spec(sample("absent.json")), ParseError);
}

TEST(MomentSpec, RenderRoundTrips)
{
    for (const auto& M : {MomentFunction::symbolic(Family::mu),
                          MomentFunction::sequence({Rational(0), Rational(1), Rational(-7, 3)}),
                          load_moment_spec(sample("general.json"))}) {
        const std::string text = render_moment_spec(M).dump();
        EXPECT_EQ(parse_moment_spec(text), M) << text;
        EXPECT_EQ(render_moment_spec(parse_moment_spec(text)).dump(), text);
    }
}

TEST(Cumulants, SymbolicSecondOrder)
{
    const std::string out = cmd_cumulants(MomentFunction::symbolic(Family::mu), 2, std::nullopt, Format::json);
    auto doc = nlohmann::json::parse(out);
    ASSERT_EQ(doc["rows"].size(), 6U);
    for (const auto& row : doc["rows"])
        if (row["word"] == "zw") {
            EXPECT_EQ(row["cumulant"], "mu2 - mu1^2");
        }
    EXPECT_EQ(doc["rows"][0]["word"], "z");
}

TEST(Cumulants, CenteredVariance)
{
    auto centered = load_moment_spec(sample("centered.json"));
    for (const char* t : {"zz", "ww"}) {
        auto doc = nlohmann::json::parse(cmd_cumulants(centered, 0, W(t), Format::json));
        ASSERT_EQ(doc["rows"].size(), 1U);
        EXPECT_EQ(doc["rows"][0]["cumulant"], "1") << t;
    }
    auto seq = MomentFunction::sequence({Rational(0), Rational(1)});
    EXPECT_EQ(cmd_cumulants(seq, 0, W("zz"), Format::table), "word  M(s)  L(s)\nzz    1     1\n");
    EXPECT_THROW(cmd_cumulants(seq, 0, Word{}, Format::table), EmptyWord);
}

TEST(Convolve, WordsAndRestrictions)
{
    ConvolveRequest one;
    one.words = {W("zwz")};
    auto doc = nlohmann::json::parse(cmd_convolve(mu, nu, one, Format::json));
    EXPECT_EQ(Scalar::parse(doc["rows"][0]["moment"].get<std::string>()),
              Scalar::parse("mu3 + 2*mu2*nu1 + mu1^2*nu1 + nu3 + 2*mu1*nu2 + mu1*nu1^2"));

    ConvolveRequest z;
    z.max_len = 2;
    z.restrict_to = Letter::z;
    doc = nlohmann::json::parse(cmd_convolve(mu, nu, z, Format::json));
    ASSERT_EQ(doc["rows"].size(), 2U);
    EXPECT_EQ(doc["rows"][1]["moment"], "mu2 + 2*mu1*nu1 + nu2");

    ConvolveRequest w;
    w.max_len = 1;
    w.restrict_to = Letter::w;
    doc = nlohmann::json::parse(cmd_convolve(mu, nu, w, Format::json));
    EXPECT_EQ(doc["rows"][0]["word"], "w");
    EXPECT_EQ(doc["rows"][0]["moment"], "mu1 + nu1");

    ConvolveRequest bad;
    bad.words = {W("zw")};
    bad.restrict_to = Letter::z;
    EXPECT_THROW(cmd_convolve(mu, nu, bad, Format::table), ParseError);
    EXPECT_THROW(cmd_convolve(mu, nu, ConvolveRequest{}, Format::table), ParseError);
    EXPECT_THROW(HatState(load_moment_spec(sample("general.json"))), GeneralBackingRejected);
}

TEST(Convolve, ClassesReport)
{
    ConvolveRequest req;
    req.max_len = 4;
    req.classes = true;
    auto doc = nlohmann::json::parse(cmd_convolve(mu, nu, req, Format::json));
    ASSERT_EQ(doc["classes"].size(), 4U);
    EXPECT_EQ(doc["classes"][0]["classes"].size(), 1U);
    EXPECT_EQ(doc["classes"][2]["classes"].size(), 2U);
    EXPECT_EQ(doc["classes"][3]["classes"].size(), 3U);
}

TEST(Mobius, TableAndJson)
{
    auto doc = nlohmann::json::parse(cmd_mobius(W("zzz"), Format::json));
    ASSERT_EQ(doc["rows"].size(), 5U);
    EXPECT_EQ(doc["rows"].back()["partition"], "{1}{2}{3}");
    EXPECT_EQ(doc["rows"].back()["a"], "2");
    EXPECT_EQ(doc["rows"].back()["m"], "2");
    const std::string table = cmd_mobius(W("zw"), Format::table);
    EXPECT_EQ(table.substr(0, table.find('\n')), "partition  b(u)  a(u)  m(u)");
}

TEST(Gf, CoefficientsDivideByBlockFactorial)
{
    auto doc = nlohmann::json::parse(cmd_gf(MomentFunction::symbolic(Family::mu), 3, Format::json));
    EXPECT_EQ(doc["M"]["zzz"], "1/6*mu3");
    EXPECT_EQ(doc["M"]["zwz"], "mu3");
    EXPECT_EQ(doc["M"]["1"], "1");
    EXPECT_EQ(doc["L"]["1"], "0");
}

TEST(Output, ByteStable)
{
    auto M = load_moment_spec(sample("general.json"));
    EXPECT_EQ(cmd_cumulants(M, 2, std::nullopt, Format::json), cmd_cumulants(M, 2, std::nullopt, Format::json));
    EXPECT_EQ(cmd_gf(M, 2, Format::table), cmd_gf(M, 2, Format::table));
    auto a = render_reports(run_verify("additivity", 4, 7, 3), Format::json, false);
    auto b = render_reports(run_verify("additivity", 4, 7, 3), Format::json, false);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
}

TEST(Verify, SuitesPassAndReport)
{
    for (const char* suite : {"additivity", "inversion", "mobius", "gf-identity"}) {
        auto reports = run_verify(suite, 4, 7, 3);
        ASSERT_EQ(reports.size(), 1U);
        EXPECT_TRUE(reports[0].pass) << suite;
        EXPECT_FALSE(reports[0].counterexample.has_value());
        EXPECT_GT(reports[0].instances, 0U);
    }
    EXPECT_EQ(run_verify("all", 3, 1, 1).size(), suite_names().size());
    EXPECT_THROW(run_verify("nope", 4, 1, 1), UnknownSuite);
    EXPECT_THROW(run_verify("mobius", 1, 1, 1), std::invalid_argument);
}

TEST(Verify, FailureCarriesCounterexample)
{
    VerifyReport r;
    r.fail("somewhere", "1", "2");
    r.fail("later", "3", "4");
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_EQ(r.counterexample->where, "somewhere");
    auto doc = nlohmann::json::parse(render_reports({r}, Format::json, true));
    EXPECT_FALSE(doc["pass"].get<bool>());
    EXPECT_EQ(doc["reports"][0]["counterexample"]["lhs"], "1");
    EXPECT_TRUE(doc["reports"][0].contains("wall_seconds"));
}

TEST(Format, Parse)
{
    EXPECT_EQ(parse_format("json"), Format::json);
    EXPECT_EQ(parse_format("table"), Format::table);
    EXPECT_THROW(parse_format("yaml"), ParseError);
}
