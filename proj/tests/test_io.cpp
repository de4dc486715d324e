#include <gtest/gtest.h>

#include <sstream>

#include "aperiodic/io.hpp"

using namespace aperiodic;
using nlohmann::json;
using Q = QuadraticInt;

TEST(Io, FnvReferenceVectors) {
    EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(io::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(io::fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Io, ConfigHashIgnoresKeyOrder) {
    const json a = json::parse(R"({"R": 100, "system": "fibonacci"})");
    const json b = json::parse(R"({"system": "fibonacci", "R": 100})");
    EXPECT_EQ(io::config_hash(a), io::config_hash(b));
    EXPECT_NE(io::config_hash(a), io::config_hash(json::parse(R"({"R": 101, "system": "fibonacci"})")));
    EXPECT_EQ(io::config_hash(a).size(), 16u);
}

TEST(Io, NumberFormattingRoundTrips) {
    for (const double x : {0.1, 1.0 / 3.0, -2.5e-300, 1e21, kTau}) EXPECT_EQ(std::stod(io::fmt(x)), x);
    EXPECT_EQ(io::fmt(0.5), "0.5");
    EXPECT_EQ(io::fmt(std::nan("")), "nan");
    EXPECT_EQ(io::fmt(std::int64_t{-7}), "-7");
}

TEST(Io, RuleSchemaRoundTripsBuiltins) {
    const json j = json::parse(R"({
        "name": "fib",
        "alphabet": ["a", "b"],
        "images": {"a": ["a", "b"], "b": ["a"]},
        "lengths": {"a": {"m": 0, "n": 1}, "b": {"m": 1, "n": 0}}})");
    const auto rule = io::rule_from_json(j);
    const auto ref = fibonacci_rule();
    EXPECT_EQ(rule.alphabet(), ref.alphabet());
    EXPECT_TRUE(rule.exact_lengths());
    EXPECT_EQ(realize_geometric(rule, "a", 500).points(0), realize_geometric(ref, "a", 500).points(0));

    const json r = json::parse(R"({
        "alphabet": ["a", "b"],
        "images": {"a": [{"word": ["a", "b"], "probability": 0.3}, {"word": ["b", "a"], "probability": 0.7}],
                   "b": ["a"]},
        "lengths": {"a": 1.618, "b": 1}})");
    const auto rr = io::rule_from_json(r);
    EXPECT_TRUE(rr.is_random());
    EXPECT_FALSE(rr.exact_lengths());
}

TEST(Io, RuleSchemaRejectsBadInput) {
    EXPECT_THROW((void)io::rule_from_json(json::parse(R"({"alphabet": ["a"], "images": {"a": ["a","a"]},
        "lengths": {"a": 1}, "colour": 3})")), ConfigError);
    EXPECT_THROW((void)io::rule_from_json(json::parse(R"({"alphabet": ["a"], "images": {"a": ["z"]},
        "lengths": {"a": 1}})")), RuleError);
    EXPECT_THROW((void)io::rule_from_json(json::parse(R"({"alphabet": ["a"], "images": {"a": ["a","a"]},
        "lengths": {}})")), RuleError);
    EXPECT_THROW((void)io::rule_from_json(json::parse(R"({"alphabet": ["a"], "images": {"a": ["a","a"]},
        "lengths": {"a": {"m": 1.5, "n": 0}}})")), ConfigError);
}

TEST(Io, WindowSchema) {
    const json j = json::parse(R"({"a": [{"lo": {"m": -2, "n": 1}, "hi": {"m": -1, "n": 1}}],
                                   "b": [{"lo": -1.0, "hi": -0.3, "hi_closed": true}]})");
    const auto spec = io::windows_from_json(j);
    ASSERT_EQ(spec.types.size(), 2u);
    EXPECT_TRUE(spec.window("a").contains(Q{-2, 1}));
    EXPECT_FALSE(spec.window("a").contains(Q{-1, 1}));
    EXPECT_TRUE(spec.window("b").intervals()[0].hi_closed);
    EXPECT_EQ(io::windows_from_json(io::windows_to_json(spec)).window("a").intervals().size(), 1u);
    EXPECT_THROW((void)io::windows_from_json(json::parse(R"({"a": [{"lo": 1, "hi": 0}]})")), DomainError);
    EXPECT_THROW((void)io::windows_from_json(json::parse(R"({"a": [{"lo": 0, "hi": 1, "open": true}]})")), ConfigError);
}

TEST(Io, CsvHeadersAndExactColumns) {
    const WeightedComb<Q> comb({{Q{0, 1}, {0.5, -1.0}}}, Interval{0, 2});
    std::ostringstream os;
    io::write_comb_csv(os, "0123456789abcdef", comb);
    const std::string text = os.str();
    EXPECT_NE(text.find("# aperiodic "), std::string::npos);
    EXPECT_NE(text.find("# config_hash 0123456789abcdef\n"), std::string::npos);
    EXPECT_NE(text.find("m,n,value,re_weight,im_weight\n0,1,1.618033988749895,0.5,-1\n"), std::string::npos);

    std::ostringstream eta;
    io::write_eta_csv(eta, "h", tm_eta(2));
    EXPECT_NE(eta.str().find("m,eta_numerator,eta_denominator,eta_float\n0,1,1,1\n1,-1,3,"), std::string::npos);

    std::ostringstream rz;
    io::write_riesz_csv(rz, "h", riesz_coefficients(2), 3);
    EXPECT_NE(rz.str().find("m,c_m_numerator,c_m_denominator,c_m_float\n"), std::string::npos);

    std::ostringstream fb;
    io::write_fb_csv(fb, "h", {FbRow{Wavevector{FourierModulePoint{1, 0}}, 10.0, {0.25, 0.0}}});
    EXPECT_NE(fb.str().find("k_a,k_b,k_value,R,re,im,abs,cauchy_diff\n1,0,"), std::string::npos);
    EXPECT_NE(fb.str().find(",nan\n"), std::string::npos);

    const TypedPointSet<double> inexact({"a"}, {{0.0, 1.5}}, Interval{0, 2});
    std::ostringstream pts;
    io::write_points_csv(pts, "h", inexact);
    EXPECT_NE(pts.str().find("# inexact\ntype,m,n,value\na,,,0\na,,,1.5\n"), std::string::npos);
}
