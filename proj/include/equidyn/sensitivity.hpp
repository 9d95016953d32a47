#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "equidyn/core.hpp"
#include "equidyn/measures.hpp"
#include "equidyn/orbit.hpp"
#include "equidyn/systems.hpp"

namespace equidyn {

/// Some 1 <= n <= T has d(T^n x, T^n y) >= eps.
bool sensitive_pair_test(const System& sys, const Configuration& x, const Configuration& y,
                         double eps, int T);
bool sensitive_pair_test(const Rotation& rot, CirclePoint x, CirclePoint y, double eps, int T);

/// Valid radius each point of a pair needs for sensitive_pair_test.
int sensitivity_radius(const System& sys, double eps, int T);

struct SensitivityEstimate {
    double eps = 0.0;
    int T = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Fraction of independent pairs (x, y) ~ mu x mu in S(eps) at horizon T.
SensitivityEstimate mu_sensitivity_estimate(const System& sys, const Measure& mu, double eps, int T,
                                            std::uint64_t samples, std::uint64_t seed);

enum class DichotomyVerdict { MuSensitive, MuEquicontinuous, Inconclusive };

std::string_view to_string(DichotomyVerdict v);

struct DichotomyThresholds {
    double sensitive = 0.05;
    double equicontinuous = 0.05;
};

struct DichotomyReport {
    std::vector<SensitivityEstimate> sensitivity;
    EquicontinuityReport equicontinuity;
    DichotomyThresholds thresholds;
    /// Some eps has estimate >= 1 - delta_s while the equicontinuity fraction
    /// is <= delta_e.
    bool sensitive_branch = false;
    /// The equicontinuity fraction is >= 1 - delta_e and no eps reaches
    /// 1 - delta_s.
    bool equicontinuous_branch = false;
    DichotomyVerdict verdict = DichotomyVerdict::Inconclusive;
};

/// Whether mu is ergodic and invariant is the caller's claim; it is not checked.
DichotomyReport dichotomy_report(const System& sys, const Measure& mu,
                                 const std::vector<double>& eps_list, int T,
                                 std::uint64_t samples, const EquicontinuityParams& equi,
                                 std::uint64_t seed, DichotomyThresholds thresholds = {});

} // namespace equidyn
