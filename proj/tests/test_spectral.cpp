#include <gtest/gtest.h>

#include <cmath>

#include "equidyn/spectral.hpp"

using namespace equidyn;

namespace {

const Alphabet kBinary(2);

std::vector<Configuration> all_configs(const System& sys, int radius)
{
    const std::vector<int> bounds = cell_bounds(sys, radius);
    const Sidedness s = system_sidedness(sys);
    std::vector<Configuration> out;
    for_each_word(bounds, Word(bounds.size(), 0), positions_outside(s, radius, -1),
                  [&](const Word& w) { out.emplace_back(system_alphabet(sys), s, w); });
    return out;
}

Configuration zeros(const System& sys, int radius)
{
    return Configuration(system_alphabet(sys), system_sidedness(sys),
                         Word(window_size(system_sidedness(sys), radius), 0));
}

} // namespace

TEST(RootOfUnity, SpecialValues)
{
    EXPECT_EQ(root_of_unity(1, 5), Complex(1.0, 0.0));
    EXPECT_EQ(root_of_unity(2, 1), Complex(-1.0, 0.0));
    EXPECT_NEAR(std::abs(root_of_unity(4, 1) - Complex(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_EQ(root_of_unity(6, -1), root_of_unity(6, 5));
}

TEST(RootOfUnity, SumIdentity)
{
    for (std::uint64_t p = 1; p <= 64; ++p) {
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(p); ++k) {
            Complex sum = 0.0;
            for (std::int64_t j = 0; j < static_cast<std::int64_t>(p); ++j) {
                sum += root_of_unity(p, j * k);
            }
            const Complex expected = k == 0 ? Complex(static_cast<double>(p), 0.0) : Complex(0.0, 0.0);
            EXPECT_LE(std::abs(sum - expected), 1e-12) << p << ' ' << k;
        }
    }
}

TEST(Eigenfunction, ValuesOnBalls)
{
    const System odo = Odometer({2});
    const Configuration y = Configuration::parse(kBinary, Sidedness::OneSided, "0");
    const Eigenfunction f0(odo, y, 0, 0, 4);
    const Eigenfunction f1(odo, y, 0, 1, 4);
    EXPECT_EQ(f1.period(), 2);
    EXPECT_EQ(f0(y), Complex(1.0, 0.0));
    EXPECT_EQ(f1(y), Complex(1.0, 0.0));
    const Configuration x = Configuration::parse(kBinary, Sidedness::OneSided, "1");
    EXPECT_EQ(f1(x), Complex(-1.0, 0.0));
    EXPECT_EQ(f0(x), Complex(1.0, 0.0));
}

TEST(Eigenfunction, RejectsEventuallyPeriodicBase)
{
    const System sh = CellularAutomaton::shift();
    const Configuration y = Configuration::parse(kBinary, Sidedness::OneSided, "0010101010");
    try {
        Eigenfunction(sh, y, 1, 0, 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(Eigenfunction, NeedsRadiusForAllBalls)
{
    const System sh = CellularAutomaton::shift();
    const Configuration y = Configuration::parse(kBinary, Sidedness::OneSided, "010101");
    try {
        Eigenfunction(sh, y, 1, 1, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientRadius);
    }
}

TEST(Koopman, DyadicOdometerExact)
{
    const System odo = Odometer({2});
    const Measure mu = ProductMeasure({2});
    const Eigenfunction f(odo, Configuration::parse(kBinary, Sidedness::OneSided, "0"), 0, 1, 4);
    EXPECT_LE(koopman_residual(f, mu, EvaluationMode::exact()), 1e-12);
}

TEST(Koopman, OdometerHaarEigenbasis)
{
    const Odometer odo({2, 3});
    const Measure mu = ProductMeasure({2, 3});
    for (int m = 0; m <= 2; ++m) {
        const int p = static_cast<int>(odo.cycle_length(m));
        const Configuration y = zeros(odo, m);
        std::vector<Eigenfunction> fs;
        for (int k = 0; k < p; ++k) {
            fs.emplace_back(odo, y, m, k, 2 * p);
            EXPECT_EQ(fs.back().period(), p);
            EXPECT_LE(koopman_residual(fs.back(), mu, EvaluationMode::exact()), 1e-12);
            EXPECT_NEAR(l2_norm(fs.back(), mu, EvaluationMode::exact()), 1.0, 1e-12);
        }
        for (int a = 0; a < p; ++a) {
            for (int b = a + 1; b < p; ++b) {
                EXPECT_LE(std::abs(inner_product(fs[static_cast<std::size_t>(a)],
                                                 fs[static_cast<std::size_t>(b)], mu,
                                                 EvaluationMode::exact())),
                          1e-12);
            }
        }
    }
}

TEST(Koopman, ShiftOnPeriodicPointFails)
{
    const System sh = CellularAutomaton::shift();
    const Measure mu = BernoulliMeasure({0.5, 0.5});
    const Configuration y = Configuration::parse(kBinary, Sidedness::OneSided, "0101010");
    const Eigenfunction f(sh, y, 1, 1, 4);
    const double r = koopman_residual(f, mu, EvaluationMode::exact());
    EXPECT_GT(r, 0.1);
    // f = 1_[010101] - 1_[101010] on W_5. |f(Tx) + f(x)| = 1 on four cylinders
    // of mass 2^-6, except on [0101010] and [1010101] where the terms cancel.
    // Squared residual: 4 * 2^-6 - 2 * 2 * 2^-7 = 2^-5.
    EXPECT_NEAR(r, std::pow(2.0, -2.5), 1e-12);
}

TEST(Koopman, SampledAgreesWithExact)
{
    const System odo = Odometer({3});
    const Measure mu = ProductMeasure({3});
    const Eigenfunction f(odo, zeros(odo, 1), 1, 2, 18);
    const double norm = l2_norm(f, mu, EvaluationMode::sampled(4000, 7));
    EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(PartitionOfUnity, AveragingRecoversIndicator)
{
    const Odometer odo({2, 3});
    const int m = 1;
    const int p = 6;
    const Configuration y = zeros(odo, m);
    std::vector<Eigenfunction> fs;
    for (int k = 0; k < p; ++k) {
        fs.emplace_back(odo, y, m, k, 12);
    }
    for (const Configuration& x : all_configs(odo, 2)) {
        for (int j = 0; j < p; ++j) {
            Complex avg = 0.0;
            for (int k = 0; k < p; ++k) {
                avg += root_of_unity(p, -static_cast<std::int64_t>(j) * k) * fs[static_cast<std::size_t>(k)](x);
            }
            avg /= static_cast<double>(p);
            const double expected = fs[0].in_ball(x, j) ? 1.0 : 0.0;
            EXPECT_LE(std::abs(avg - expected), 1e-12);
        }
    }
}

TEST(CyclicAction, StepAdvancesBallIndex)
{
    const Odometer odo({2, 2, 3});
    const Eigenfunction f(odo, zeros(odo, 2), 2, 1, 24);
    for (const Configuration& x : all_configs(odo, 2)) {
        const auto j = f.ball_index(x);
        ASSERT_TRUE(j);
        EXPECT_EQ(*f.ball_index(step(odo, x)), (*j + 1) % f.period());
    }
}
