#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "equidyn/core.hpp"
#include "equidyn/sampling.hpp"

namespace equidyn {

/// I.i.d. product of a probability vector over the alphabet.
class BernoulliMeasure {
public:
    explicit BernoulliMeasure(std::vector<double> weights);

    Alphabet alphabet() const noexcept { return alphabet_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    Alphabet alphabet_;
    std::vector<double> weights_;
};

/// Stationary Markov chain with row-stochastic transitions and invariant
/// vector pi. When pi is omitted it is solved from pi P = pi.
class MarkovMeasure {
public:
    using Matrix = std::vector<std::vector<double>>;

    explicit MarkovMeasure(Matrix transitions, std::optional<std::vector<double>> stationary = {});

    Alphabet alphabet() const noexcept { return alphabet_; }
    const Matrix& transitions() const noexcept { return transitions_; }
    const std::vector<double>& stationary() const noexcept { return stationary_; }
    /// Time-reversed chain: reversed[a][b] = pi_b P_{ba} / pi_a.
    const Matrix& reversed() const noexcept { return reversed_; }

private:
    Alphabet alphabet_;
    Matrix transitions_;
    std::vector<double> stationary_;
    Matrix reversed_;
};

/// Haar measure on prod_i Z_{s_i}: uniform, independent digits. The last
/// listed size repeats for every later coordinate. One-sided only.
class ProductMeasure {
public:
    explicit ProductMeasure(std::vector<int> sizes);

    Alphabet alphabet() const noexcept { return alphabet_; }
    const std::vector<int>& sizes() const noexcept { return sizes_; }
    int size_at(int index) const noexcept;

private:
    Alphabet alphabet_;
    std::vector<int> sizes_;
};

/// Lebesgue measure on the circle; only meaningful for rotations, where it is
/// handled analytically.
struct CircleLebesgue {};

using Measure = std::variant<BernoulliMeasure, MarkovMeasure, ProductMeasure, CircleLebesgue>;

bool is_cantor_measure(const Measure& mu) noexcept;

/// Alphabet of a Cantor measure; throws UnsupportedSystem for CircleLebesgue.
Alphabet measure_alphabet(const Measure& mu);

/// Number of admissible symbols at each storage position of W_radius.
std::vector<int> cell_bounds(const Measure& mu, Sidedness s, int radius);

double cylinder_probability(const Measure& mu, const Cylinder& c);

/// Probability of the cylinder whose word covers W_n (n implied by length).
double word_probability(const Measure& mu, Sidedness s, const Word& w);

/// Draw x restricted to W_radius from mu.
Configuration sample_config(const Measure& mu, Sidedness s, int radius, Rng& rng);
Configuration sample_config(const Measure& mu, Sidedness s, int radius, std::uint64_t seed);

/// Draw from mu conditioned on c, valid on W_radius (radius >= c.radius).
/// Throws NullCylinder when mu(c) = 0.
Configuration conditional_sample(const Measure& mu, const Cylinder& c, int radius, Rng& rng);
Configuration conditional_sample(const Measure& mu, const Cylinder& c, int radius,
                                 std::uint64_t seed);

using CylinderUnion = std::vector<Cylinder>;

/// The inclusion-maximal members of a union, deduplicated. On a Cantor space
/// any two cylinders are nested or disjoint, so the result is a disjoint
/// family with the same union.
std::vector<Cylinder> maximal_cylinders(const CylinderUnion& a);

double union_probability(const Measure& mu, const CylinderUnion& a);

/// mu(A ∩ B_n(x)) / mu(B_n(x)), exact. Throws NullBall when mu(B_n(x)) = 0.
double lebesgue_density_ratio(const Measure& mu, const CylinderUnion& a, const Configuration& x,
                              int n);

struct Ball {
    Configuration center;
    int radius;

    Cylinder cylinder() const { return ball_cylinder(center, radius); }
};

struct BallFamily {
    std::vector<Ball> balls;
    /// mu(A \ union of balls), computed by exact cylinder refinement.
    double leftover = 0.0;
};

/// Disjoint balls of radius >= min_radius, centred in A, covering A up to
/// tolerance. The clopen refinement used here always leaves 0 uncovered.
BallFamily vitali_cover(const Measure& mu, const CylinderUnion& a, int min_radius,
                        double tolerance);

/// mu(A \ union of balls), by recursive refinement until each piece is inside
/// a ball or misses all of them.
double uncovered_mass(const Measure& mu, const CylinderUnion& a, const std::vector<Ball>& balls);

bool pairwise_disjoint(const std::vector<Ball>& balls);

} // namespace equidyn
