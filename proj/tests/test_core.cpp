#include <gtest/gtest.h>

#include <random>
#include <set>

#include "equidyn/core.hpp"

using namespace equidyn;

namespace {

const Alphabet kBinary(2);

Configuration one(std::string_view s)
{
    return Configuration::parse(kBinary, Sidedness::OneSided, s);
}

Configuration two(std::string_view s)
{
    return Configuration::parse(kBinary, Sidedness::TwoSided, s);
}

// Distance straight from the definition: find the largest n with x_{W_n} = y_{W_n}
// by reading coordinates one window at a time.
double naive_distance(const Configuration& x, const Configuration& y)
{
    const int r = std::min(x.radius(), y.radius());
    int agree = -1;
    for (int n = 0; n <= r; ++n) {
        bool same = true;
        for (int i = window_low(x.sidedness(), n); i <= n; ++i) {
            same = same && x.at(i) == y.at(i);
        }
        if (!same) {
            break;
        }
        agree = n;
    }
    if (agree == r) {
        return 0.0;
    }
    if (agree < 0) {
        return 2.0;
    }
    return agree == 0 ? 1.5 : 1.0 / agree;
}

Configuration random_config(std::mt19937_64& rng, Sidedness s, int radius)
{
    Word w(window_size(s, radius));
    for (auto& c : w) {
        c = static_cast<Symbol>(rng() & 1);
    }
    return Configuration(kBinary, s, w);
}

} // namespace

TEST(Alphabet, RejectsSizesOutsideRange)
{
    EXPECT_THROW(Alphabet(1), Error);
    EXPECT_THROW(Alphabet(257), Error);
    EXPECT_NO_THROW(Alphabet(256));
}

TEST(Configuration, RadiusFromWindowLength)
{
    EXPECT_EQ(one("0110").radius(), 3);
    EXPECT_EQ(two("01101").radius(), 2);
    EXPECT_THROW(two("0110"), Error);
}

TEST(Configuration, TwoSidedIndexing)
{
    const Configuration x = two("01011");
    EXPECT_EQ(x.at(-2), 0);
    EXPECT_EQ(x.at(-1), 1);
    EXPECT_EQ(x.at(0), 0);
    EXPECT_EQ(x.at(2), 1);
    try {
        x.at(3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientRadius);
    }
}

TEST(Distance, IdenticalIsZero)
{
    EXPECT_TRUE(cantor_distance(one("0110"), one("0110")).is_zero());
    EXPECT_EQ(cantor_distance(one("0110"), one("0110")).value(), 0.0);
}

TEST(Distance, AgreeOnW2DifferOnW3IsHalf)
{
    EXPECT_EQ(cantor_distance(one("0110"), one("0111")).value(), 0.5);
    EXPECT_EQ(cantor_distance(two("1011010"), two("0011011")).value(), 0.5);
}

TEST(Distance, OriginMismatchIsTwo)
{
    EXPECT_EQ(cantor_distance(one("0110"), one("1110")).value(), 2.0);
    EXPECT_EQ(cantor_distance(two("00000"), two("00100")).value(), 2.0);
}

TEST(Distance, OnlyOriginAgrees)
{
    EXPECT_EQ(cantor_distance(one("01"), one("00")).value(), 1.5);
    EXPECT_EQ(cantor_distance(one("01"), one("00")).agreement_radius(), 0);
}

TEST(Distance, UnresolvedAgreementThrows)
{
    try {
        cantor_distance(one("011"), one("01101"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientRadius);
    }
}

TEST(Distance, MismatchedSpacesThrow)
{
    try {
        cantor_distance(one("011"), two("01101"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncompatibleConfigurations);
    }
}

TEST(Distance, MatchesDefinitionOnRandomPairs)
{
    std::mt19937_64 rng(17);
    for (Sidedness s : {Sidedness::OneSided, Sidedness::TwoSided}) {
        for (int trial = 0; trial < 2000; ++trial) {
            const Configuration x = random_config(rng, s, 5);
            Configuration y = x;
            // Force agreement on a random prefix window so small distances occur.
            Word w = random_config(rng, s, 5).symbols();
            const int keep = static_cast<int>(rng() % 7) - 1;
            for (int i = window_low(s, 5); i <= 5; ++i) {
                const bool inside = keep >= 0 && i >= window_low(s, keep) && i <= keep;
                if (inside) {
                    w[static_cast<std::size_t>(i - window_low(s, 5))] = x.at(i);
                }
            }
            y = Configuration(kBinary, s, w);
            EXPECT_EQ(cantor_distance(x, y).value(), naive_distance(x, y));
        }
    }
}

TEST(Distance, StrongTriangleInequality)
{
    std::mt19937_64 rng(3);
    for (Sidedness s : {Sidedness::OneSided, Sidedness::TwoSided}) {
        for (int trial = 0; trial < 3000; ++trial) {
            // Low-entropy words so agreements are common.
            Word base = random_config(rng, s, 4).symbols();
            auto perturb = [&] {
                Word w = base;
                const std::size_t flips = rng() % 3;
                for (std::size_t f = 0; f < flips; ++f) {
                    w[rng() % w.size()] ^= 1;
                }
                return Configuration(kBinary, s, w);
            };
            const Configuration x = perturb();
            const Configuration y = perturb();
            const Configuration z = perturb();
            const double xy = cantor_distance(x, y).value();
            const double yz = cantor_distance(y, z).value();
            const double xz = cantor_distance(x, z).value();
            EXPECT_LE(xz, std::max(xy, yz));
            EXPECT_EQ(xy, cantor_distance(y, x).value());
        }
    }
}

TEST(Distance, OrderingMatchesValues)
{
    const std::vector<CantorDistance> ds = {CantorDistance::zero(), CantorDistance::inverse(4),
                                            CantorDistance::inverse(1),
                                            CantorDistance::origin_only(),
                                            CantorDistance::origin_mismatch()};
    for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
        EXPECT_LT(ds[i], ds[i + 1]);
        EXPECT_LT(ds[i].value(), ds[i + 1].value());
    }
}

TEST(SeparationRadius, ReadsJustEnoughCells)
{
    EXPECT_EQ(separation_radius(0.0), -2);
    EXPECT_EQ(separation_radius(2.5), -1);
    EXPECT_EQ(separation_radius(2.0), 0);
    EXPECT_EQ(separation_radius(1.5), 1);
    EXPECT_EQ(separation_radius(1.0), 2);
    EXPECT_EQ(separation_radius(0.5), 3);
    EXPECT_EQ(separation_radius(0.3), 4);
}

TEST(SeparationRadius, AgreesWithDistanceThreshold)
{
    std::mt19937_64 rng(5);
    const std::vector<double> grid = {2.0, 1.7, 1.5, 1.2, 1.0, 0.5, 1.0 / 3, 0.26, 0.2};
    for (int trial = 0; trial < 1000; ++trial) {
        const Configuration x = random_config(rng, Sidedness::TwoSided, 6);
        Word w = x.symbols();
        w[rng() % w.size()] ^= 1;
        const Configuration y(kBinary, Sidedness::TwoSided, w);
        for (double eps : grid) {
            EXPECT_EQ(separated(x, y, eps), cantor_distance(x, y).value() >= eps) << eps;
        }
    }
}

TEST(Restrict, ReadsWindows)
{
    EXPECT_EQ(format_word(restrict(one("0110101"), 2), kBinary), "011");
    EXPECT_EQ(format_word(restrict(two("1101011"), 1), kBinary), "010");
    EXPECT_EQ(restrict(one("0110"), 0), Word{0});
    EXPECT_THROW(restrict(one("01"), 2), Error);
}

TEST(Ball, OneSidedBallIsCylinder)
{
    const Cylinder c = ball_cylinder(one("0110"), 1);
    EXPECT_EQ(c.radius, 1);
    EXPECT_EQ(c.word, (Word{0, 1}));
    EXPECT_THROW(ball_cylinder(one("0110"), 0), Error);
}

TEST(Ball, BallEqualsCylinderExhaustively)
{
    for (Sidedness s : {Sidedness::OneSided, Sidedness::TwoSided}) {
        const int radius = 3;
        const std::size_t len = window_size(s, radius);
        const Configuration x(kBinary, s, Word(len, 0));
        for (int n = 1; n <= 2; ++n) {
            const Cylinder c = ball_cylinder(x, n);
            for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
                Word w(len);
                for (std::size_t i = 0; i < len; ++i) {
                    w[i] = static_cast<Symbol>((bits >> i) & 1);
                }
                const Configuration z(kBinary, s, w);
                EXPECT_EQ(c.contains(z), cantor_distance(x, z).value() <= 1.0 / n);
            }
        }
    }
}

TEST(Cylinder, NestedOrDisjoint)
{
    const Cylinder a(kBinary, Sidedness::OneSided, 1, {0, 1});
    const Cylinder b(kBinary, Sidedness::OneSided, 3, {0, 1, 1, 0});
    const Cylinder c(kBinary, Sidedness::OneSided, 2, {0, 0, 1});
    EXPECT_TRUE(b.is_subset_of(a));
    EXPECT_FALSE(a.is_subset_of(b));
    EXPECT_TRUE(c.is_disjoint_from(a));
    EXPECT_TRUE(c.is_disjoint_from(b));
    EXPECT_FALSE(a.is_disjoint_from(b));
}

TEST(Words, FormatParseRoundTrip)
{
    const Alphabet big(12);
    const Word w = {0, 11, 3, 10};
    EXPECT_EQ(format_word(w, big), "0,11,3,10");
    EXPECT_EQ(parse_word("0,11,3,10", big), w);
    EXPECT_EQ(parse_word("0112", Alphabet(3)), (Word{0, 1, 1, 2}));
    EXPECT_THROW(parse_word("012", kBinary), Error);
}

TEST(Circle, DistanceWraps)
{
    EXPECT_DOUBLE_EQ(circle_distance(CirclePoint(0.1), CirclePoint(0.9)), 0.2);
    EXPECT_DOUBLE_EQ(circle_distance(CirclePoint(1.25), CirclePoint(0.25)), 0.0);
}

TEST(Enumeration, VisitsEveryWordOnce)
{
    const std::vector<int> bounds = {2, 3, 2, 4};
    std::set<Word> seen;
    for_each_word(bounds, Word{1, 2, 1, 3}, {1, 3}, [&](const Word& w) {
        EXPECT_EQ(w[0], 1);
        EXPECT_EQ(w[2], 1);
        seen.insert(w);
    });
    EXPECT_EQ(seen.size(), 12u);
    EXPECT_EQ(count_words(bounds, {1, 3}, 100), 12u);
    EXPECT_EQ(count_words(bounds, {0, 1, 2, 3}, 10), 11u);
}

TEST(Enumeration, PositionsOutsideWindow)
{
    EXPECT_EQ(positions_outside(Sidedness::OneSided, 3, 1), (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(positions_outside(Sidedness::TwoSided, 2, 1), (std::vector<std::size_t>{0, 4}));
    EXPECT_EQ(positions_outside(Sidedness::TwoSided, 1, -1).size(), 3u);
}
