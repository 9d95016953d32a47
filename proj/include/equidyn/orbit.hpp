#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equidyn/core.hpp"
#include "equidyn/measures.hpp"
#include "equidyn/systems.hpp"

namespace equidyn {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Horizon-T orbit ball B^o_{m,T}(x) as the explicit set of words on W_rho.
struct OrbitBallEvent {
    Configuration base;
    int resolution;
    int horizon;
    int dependence_radius;
    std::vector<Word> words;
};

/// Estimate of mu(B^o_{m,T}(x) ∩ B_n(x)) / mu(B_n(x)).
struct RatioEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int m = 0;
    int n = 0;
    int T = 0;
};

/// Binomial standard error sqrt(p(1-p)/N).
double binomial_std_error(double p, std::uint64_t samples);

/// Column traces of x and y at resolution m agree at every time 0..T.
bool orbit_ball_member(const System& sys, const Configuration& x, const Configuration& y, int m,
                       int T);
/// Rotations are isometries, so membership is d(x, y) <= 1/m at any horizon.
bool orbit_ball_member(const Rotation& rot, CirclePoint x, CirclePoint y, int m, int T);

/// Exhaustive enumeration over every word of W_rho; the brute-force oracle.
OrbitBallEvent orbit_ball_event(const System& sys, const Configuration& x, int m, int T,
                                std::uint64_t cap = kDefaultEnumerationCap);

/// Exact ratio by summing cylinder masses of the extensions of x_{W_n} to
/// W_rho that stay in the orbit ball.
double density_ratio_exact(const System& sys, const Measure& mu, const Configuration& x, int m,
                           int n, int T, std::uint64_t cap = kDefaultEnumerationCap);
/// Lebesgue measure on the circle; the orbit ball is the metric ball B_m(x).
double density_ratio_exact(const Rotation& rot, CirclePoint x, int m, int n, int T);

/// Number of extensions density_ratio_exact would enumerate.
std::uint64_t exact_enumeration_size(const System& sys, const Measure& mu, int m, int n, int T,
                                     std::uint64_t cap = kDefaultEnumerationCap);

RatioEstimate density_ratio_estimate(const System& sys, const Measure& mu, const Configuration& x,
                                     int m, int n, int T, std::uint64_t samples,
                                     std::uint64_t seed);
RatioEstimate density_ratio_estimate(const Rotation& rot, CirclePoint x, int m, int n, int T,
                                     std::uint64_t samples, std::uint64_t seed);

/// Every y with y_{W_n} = x_{W_n} lies in B^o_{m,T}(x).
bool equicontinuity_point_test(const System& sys, const Configuration& x, int m, int n, int T,
                               std::uint64_t cap = kDefaultEnumerationCap);
bool equicontinuity_point_test(const Rotation& rot, CirclePoint x, int m, int n, int T);

struct EquicontinuityParams {
    int m = 1;
    std::vector<int> n_list;
    int T = 16;
    std::uint64_t points = 100;
    std::uint64_t samples = 10000;
    double delta = 0.05;
    std::uint64_t seed = 0;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct PointCurve {
    /// Word on the sampled window (symbolic) or the angle printed with 17 digits.
    std::string base;
    std::vector<double> ratios;
    /// Every ratio came from exact enumeration.
    bool exact = true;
};

struct EquicontinuityReport {
    EquicontinuityParams params;
    std::vector<PointCurve> points;
    /// Share of points whose ratio at the largest n is >= 1 - delta.
    double fraction = 0.0;
};

/// Sample base points from mu and sweep the density ratio over n_list.
///
/// For each (point, n) the exact path runs when the extension count is within
/// the cap, otherwise a Monte Carlo estimate with `samples` draws. For a
/// rotation, `mu` must be CircleLebesgue.
EquicontinuityReport mu_equicontinuity_report(const System& sys, const Measure& mu,
                                              const EquicontinuityParams& params);

} // namespace equidyn
