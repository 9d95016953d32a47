#include <gtest/gtest.h>

#include "equidyn/periodicity.hpp"

using namespace equidyn;

namespace {

const Alphabet kBinary(2);

std::vector<Word> letters(std::string_view s)
{
    std::vector<Word> out;
    for (char c : s) {
        out.push_back(Word{static_cast<Symbol>(c - 'a')});
    }
    return out;
}

} // namespace

TEST(Detect, ConstantTrace)
{
    const auto c = detect_eventual_period(letters("aaaa"));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 1);
    EXPECT_EQ(c->preperiod, 0);
    EXPECT_EQ(c->kind(), PeriodKind::LP);
}

TEST(Detect, Alternating)
{
    const auto c = detect_eventual_period(letters("ababab"));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 2);
    EXPECT_EQ(c->preperiod, 0);
}

TEST(Detect, WithPreperiod)
{
    const auto c = detect_eventual_period(letters("cababab"));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 2);
    EXPECT_EQ(c->preperiod, 1);
    EXPECT_EQ(c->kind(), PeriodKind::LEP);
    EXPECT_EQ(c->T, 6);
}

TEST(Detect, NeedsTwoFullPeriods)
{
    EXPECT_FALSE(detect_eventual_period(letters("abcab")));
    EXPECT_TRUE(detect_eventual_period(letters("abcabca")));
    EXPECT_FALSE(detect_eventual_period(letters("abcd")));
}

TEST(Detect, PeriodicTailMustSpanHalfTheTrace)
{
    // A constant tail of three symbols is two periods of length 1 but covers
    // too little of a long trace.
    EXPECT_FALSE(detect_eventual_period(letters("abcdefghijaaa")));
    const auto c = detect_eventual_period(letters("abcdefaaaaaaa"));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 1);
    EXPECT_EQ(c->preperiod, 6);
}

TEST(Detect, CertificateIsValidAndMinimal)
{
    // Every trace over {a,b,c} up to length 8 against a direct search for the
    // smallest period, then smallest preperiod.
    for (int len = 1; len <= 8; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i) {
            total *= 3;
        }
        for (int code = 0; code < total; ++code) {
            std::vector<Word> trace;
            int v = code;
            for (int i = 0; i < len; ++i) {
                trace.push_back(Word{static_cast<Symbol>(v % 3)});
                v /= 3;
            }
            const auto c = detect_eventual_period(trace);
            int best_p = 0;
            int best_q = 0;
            const int last = len - 1;
            auto holds = [&](int p, int q) {
                if (last - q < 2 * p || 2 * (last - q) < last) {
                    return false;
                }
                for (int i = q; i + p <= last; ++i) {
                    if (trace[static_cast<std::size_t>(i)] != trace[static_cast<std::size_t>(i + p)]) {
                        return false;
                    }
                }
                return true;
            };
            for (int p = 1; p < len && best_p == 0; ++p) {
                for (int q = 0; q < len; ++q) {
                    if (holds(p, q)) {
                        best_p = p;
                        best_q = q;
                        break;
                    }
                }
            }
            if (best_p == 0) {
                EXPECT_FALSE(c);
            } else {
                ASSERT_TRUE(c);
                EXPECT_EQ(c->period, best_p);
                EXPECT_EQ(c->preperiod, best_q);
                EXPECT_TRUE(certificate_holds(trace, c->period, c->preperiod));
            }
        }
    }
}

TEST(Certificate, IdentityIsFixed)
{
    const System id = CellularAutomaton::identity(kBinary, Sidedness::TwoSided, 1);
    const Configuration x = Configuration::parse(kBinary, Sidedness::TwoSided, "011010011");
    for (int m = 0; m <= 2; ++m) {
        const auto c = lep_certificate(id, x, m, 2);
        ASSERT_TRUE(c);
        EXPECT_EQ(c->period, 1);
        EXPECT_EQ(c->preperiod, 0);
        EXPECT_EQ(c->m, m);
    }
}

TEST(Certificate, DyadicOdometerPeriodFour)
{
    const System odo = Odometer({2});
    const auto c = lep_certificate(odo, Configuration::parse(kBinary, Sidedness::OneSided, "10"), 1, 8);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 4);
    EXPECT_EQ(c->preperiod, 0);
    EXPECT_FALSE(lep_certificate(odo, Configuration::parse(kBinary, Sidedness::OneSided, "10"), 1, 7));
}

TEST(Certificate, ShiftPeriodicPoint)
{
    const System sh = CellularAutomaton::shift();
    const Configuration y = Configuration::parse(kBinary, Sidedness::OneSided, "0010101010");
    const auto c = lep_certificate(sh, y, 1, 8);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->period, 2);
    EXPECT_EQ(c->preperiod, 1);
}

TEST(Statistics, IdentityFractionOne)
{
    const System id = CellularAutomaton::identity(kBinary, Sidedness::TwoSided, 1);
    const LepStatistics s = lep_statistics(id, BernoulliMeasure({0.5, 0.5}), 2, 0.05, 200, 4, 1);
    EXPECT_EQ(s.fraction, 1.0);
    EXPECT_EQ(s.lp_fraction, 1.0);
    EXPECT_EQ(s.period_bound, 1);
    EXPECT_EQ(s.preperiod_bound, 0);
}

TEST(Statistics, OdometerPeriodIsDigitProduct)
{
    const Odometer odo({2, 3, 2});
    for (int m = 0; m <= 2; ++m) {
        const int p = static_cast<int>(odo.cycle_length(m));
        const LepStatistics s = lep_statistics(odo, ProductMeasure({2, 3, 2}), m, 0.05, 100, 2 * p, 3);
        EXPECT_EQ(s.fraction, 1.0);
        EXPECT_EQ(s.period_bound, p);
        EXPECT_EQ(s.preperiod_bound, 0);
    }
}

TEST(Statistics, ShiftRarelyCertified)
{
    const LepStatistics s =
        lep_statistics(CellularAutomaton::shift(), BernoulliMeasure({0.5, 0.5}), 1, 0.05, 1000, 32, 2);
    EXPECT_LE(s.fraction, 0.01);
    EXPECT_FALSE(s.period_bound);
}

TEST(Classify, Verdicts)
{
    const std::vector<int> ms = {0, 1, 2};
    const LepClassification odo =
        mu_lep_classify(Odometer({2}), ProductMeasure({2}), ms, 0.05, 200, 16, 1);
    EXPECT_EQ(odo.verdict, LepVerdict::MuLP);
    ASSERT_TRUE(odo.equicontinuity);
    EXPECT_EQ(odo.equicontinuity->fraction, 1.0);

    const LepClassification sh =
        mu_lep_classify(CellularAutomaton::shift(), BernoulliMeasure({0.5, 0.5}), ms, 0.05, 200, 24, 1);
    EXPECT_EQ(sh.verdict, LepVerdict::Neither);
    EXPECT_FALSE(sh.equicontinuity);

    EquicontinuityParams small;
    small.m = 2;
    small.n_list = {2, 3};
    small.T = 4;
    small.points = 20;
    const LepClassification id = mu_lep_classify(
        CellularAutomaton::identity(kBinary, Sidedness::TwoSided, 1), BernoulliMeasure({0.5, 0.5}),
        ms, 0.05, 200, 4, 1, small);
    EXPECT_EQ(id.verdict, LepVerdict::MuLP);
    ASSERT_TRUE(id.equicontinuity);
    EXPECT_EQ(id.equicontinuity->fraction, 1.0);
}

TEST(Classify, EventuallyPeriodicRule)
{
    // ECA 0 sends everything to 0 after one step: preperiod 1 unless the
    // window already reads all zeros.
    const LepClassification c = mu_lep_classify(CellularAutomaton::elementary(0),
                                                BernoulliMeasure({0.5, 0.5}), {1}, 0.2, 200, 4, 5,
                                                EquicontinuityParams{1, {1, 2}, 4, 10});
    EXPECT_EQ(c.verdict, LepVerdict::MuLEP);
}
