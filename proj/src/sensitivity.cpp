#include "equidyn/sensitivity.hpp"

#include <algorithm>

#include "equidyn/sampling.hpp"

namespace equidyn {

namespace {

constexpr std::uint64_t kStreamPairX = 0x700;
constexpr std::uint64_t kStreamPairY = 0x701;
constexpr std::uint64_t kStreamEps = 0x800;

} // namespace

int sensitivity_radius(const System& sys, double eps, int T)
{
    require(T >= 0, ErrorCode::InvalidArgument, "horizon must be >= 0");
    return std::max(separation_radius(eps), 0) + radius_loss_per_step(sys) * T;
}

bool sensitive_pair_test(const System& sys, const Configuration& x, const Configuration& y,
                         double eps, int T)
{
    require(is_symbolic(sys), ErrorCode::UnsupportedSystem, "rotation acts on circle points");
    require(x.alphabet() == y.alphabet() && x.sidedness() == y.sidedness(),
            ErrorCode::IncompatibleConfigurations, "pair differs in alphabet or sidedness");
    const int k = separation_radius(eps);
    if (k == -1 || T < 1) {
        return false;
    }
    if (k == -2) {
        return true;
    }
    const int radius = sensitivity_radius(sys, eps, T);
    require(x.radius() >= radius && y.radius() >= radius, ErrorCode::InsufficientRadius,
            "pair needs valid radius " + std::to_string(radius));
    Configuration a = truncate(x, radius);
    Configuration b = truncate(y, radius);
    for (int n = 1; n <= T; ++n) {
        a = step(sys, a);
        b = step(sys, b);
        if (separated(a, b, eps)) {
            return true;
        }
    }
    return false;
}

bool sensitive_pair_test(const Rotation& rot, CirclePoint x, CirclePoint y, double eps, int T)
{
    for (int n = 1; n <= T; ++n) {
        x = step(rot, x);
        y = step(rot, y);
        if (circle_distance(x, y) >= eps) {
            return true;
        }
    }
    return false;
}

SensitivityEstimate mu_sensitivity_estimate(const System& sys, const Measure& mu, double eps, int T,
                                            std::uint64_t samples, std::uint64_t seed)
{
    require(samples >= 1, ErrorCode::InvalidArgument, "need at least one pair");
    std::vector<char> hit(samples, 0);
    if (const auto* rot = std::get_if<Rotation>(&sys)) {
        require(std::holds_alternative<CircleLebesgue>(mu), ErrorCode::UnsupportedSystem,
                "rotation analysis uses Lebesgue measure on the circle");
        parallel_for(samples, [&](std::size_t i) {
            Rng rx = make_rng(seed, kStreamPairX, i);
            Rng ry = make_rng(seed, kStreamPairY, i);
            hit[i] = sensitive_pair_test(*rot, CirclePoint(uniform01(rx)),
                                         CirclePoint(uniform01(ry)), eps, T);
        });
    } else {
        require(is_cantor_measure(mu) && system_alphabet(sys) == measure_alphabet(mu),
                ErrorCode::AlphabetMismatch, "system and measure alphabets differ");
        const Sidedness s = system_sidedness(sys);
        const int radius = sensitivity_radius(sys, eps, T);
        parallel_for(samples, [&](std::size_t i) {
            const Configuration x = sample_config(mu, s, radius, derive_seed(seed, kStreamPairX, i));
            const Configuration y = sample_config(mu, s, radius, derive_seed(seed, kStreamPairY, i));
            hit[i] = sensitive_pair_test(sys, x, y, eps, T);
        });
    }
    SensitivityEstimate est;
    est.eps = eps;
    est.T = T;
    est.samples = samples;
    est.seed = seed;
    est.estimate = static_cast<double>(std::count(hit.begin(), hit.end(), 1))
                   / static_cast<double>(samples);
    est.std_error = binomial_std_error(est.estimate, samples);
    return est;
}

std::string_view to_string(DichotomyVerdict v)
{
    switch (v) {
    case DichotomyVerdict::MuSensitive: return "mu-sensitive";
    case DichotomyVerdict::MuEquicontinuous: return "mu-equicontinuous";
    case DichotomyVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

DichotomyReport dichotomy_report(const System& sys, const Measure& mu,
                                 const std::vector<double>& eps_list, int T,
                                 std::uint64_t samples, const EquicontinuityParams& equi,
                                 std::uint64_t seed, DichotomyThresholds thresholds)
{
    require(!eps_list.empty(), ErrorCode::InvalidArgument, "eps list must not be empty");
    DichotomyReport report;
    report.thresholds = thresholds;
    bool any_sensitive = false;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        report.sensitivity.push_back(mu_sensitivity_estimate(
            sys, mu, eps_list[i], T, samples, derive_seed(seed, kStreamEps, i)));
        any_sensitive = any_sensitive
                        || report.sensitivity.back().estimate >= 1.0 - thresholds.sensitive;
    }
    report.equicontinuity = mu_equicontinuity_report(sys, mu, equi);
    const double fraction = report.equicontinuity.fraction;

    report.sensitive_branch = any_sensitive && fraction <= thresholds.equicontinuous;
    report.equicontinuous_branch = !any_sensitive && fraction >= 1.0 - thresholds.equicontinuous;
    if (report.sensitive_branch == report.equicontinuous_branch) {
        report.verdict = DichotomyVerdict::Inconclusive;
    } else {
        report.verdict = report.sensitive_branch ? DichotomyVerdict::MuSensitive
                                                 : DichotomyVerdict::MuEquicontinuous;
    }
    return report;
}

} // namespace equidyn
