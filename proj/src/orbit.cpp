#include "equidyn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "equidyn/sampling.hpp"
#include "trace_matcher.hpp"

namespace equidyn {

namespace {

constexpr std::uint64_t kStreamBasePoints = 0x100;
constexpr std::uint64_t kStreamConditional = 0x200;
constexpr std::uint64_t kStreamCurve = 0x300;

void require_compatible(const System& sys, const Measure& mu)
{
    require(is_symbolic(sys) && is_cantor_measure(mu), ErrorCode::UnsupportedSystem,
            "symbolic analysis needs a symbolic system and a Cantor measure");
    require(system_alphabet(sys) == measure_alphabet(mu), ErrorCode::AlphabetMismatch,
            "system and measure alphabets differ");
    // Haar measures are one-sided; cell_bounds rejects the other case.
    (void)cell_bounds(mu, system_sidedness(sys), 0);
}

void require_symbolic_input(const System& sys, const Configuration& x)
{
    require(is_symbolic(sys), ErrorCode::UnsupportedSystem,
            "rotation points are circle points, not configurations");
    require(x.alphabet() == system_alphabet(sys) && x.sidedness() == system_sidedness(sys),
            ErrorCode::IncompatibleConfigurations, "configuration does not match the system");
}

std::vector<int> combined_bounds(const System& sys, const Measure& mu, int radius)
{
    std::vector<int> bounds = cell_bounds(sys, radius);
    const std::vector<int> mb = cell_bounds(mu, system_sidedness(sys), radius);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        bounds[i] = std::min(bounds[i], mb[i]);
    }
    return bounds;
}

void require_within_cap(std::uint64_t count, std::uint64_t cap, const char* what)
{
    require(count <= cap, ErrorCode::EnumerationTooLarge,
            std::string(what) + " needs more than " + std::to_string(cap)
                + " words; raise the enumeration cap");
}

double arc_length(double radius)
{
    return std::min(2.0 * radius, 1.0);
}

std::string format_angle(double a)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

void validate_params(const EquicontinuityParams& p, bool rotation)
{
    require(p.m >= (rotation ? 1 : 0), ErrorCode::InvalidArgument, "resolution m out of range");
    require(!p.n_list.empty(), ErrorCode::InvalidArgument, "n_list must not be empty");
    for (int n : p.n_list) {
        require(n >= 1, ErrorCode::InvalidArgument, "every n in n_list must be >= 1");
    }
    require(p.T >= 0, ErrorCode::InvalidArgument, "horizon T must be >= 0");
    require(p.points >= 1 && p.samples >= 1, ErrorCode::InvalidArgument,
            "points and samples must be >= 1");
    require(p.delta > 0.0 && p.delta < 1.0, ErrorCode::InvalidArgument, "delta must be in (0, 1)");
}

double terminal_fraction(const std::vector<PointCurve>& points, const std::vector<int>& n_list,
                         double delta)
{
    const auto last = static_cast<std::size_t>(
        std::max_element(n_list.begin(), n_list.end()) - n_list.begin());
    std::size_t hits = 0;
    for (const PointCurve& pc : points) {
        hits += pc.ratios[last] >= 1.0 - delta ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(points.size());
}
} // namespace

double binomial_std_error(double p, std::uint64_t samples)
{
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

bool orbit_ball_member(const System& sys, const Configuration& x, const Configuration& y, int m,
                       int T)
{
    require_symbolic_input(sys, x);
    require_symbolic_input(sys, y);
    return column_trace(sys, x, m, T) == column_trace(sys, y, m, T);
}

bool orbit_ball_member(const Rotation&, CirclePoint x, CirclePoint y, int m, int T)
{
    require(m >= 1 && T >= 0, ErrorCode::InvalidArgument, "rotation needs m >= 1, T >= 0");
    return circle_distance(x, y) <= 1.0 / m;
}

OrbitBallEvent orbit_ball_event(const System& sys, const Configuration& x, int m, int T,
                                std::uint64_t cap)
{
    require_symbolic_input(sys, x);
    const int rho = dependence_radius(sys, m, T);
    const Sidedness s = system_sidedness(sys);
    const std::vector<int> bounds = cell_bounds(sys, rho);
    const std::vector<std::size_t> all = positions_outside(s, rho, -1);
    require_within_cap(count_words(bounds, all, cap), cap, "orbit ball enumeration");

    const std::vector<Word> target = column_trace(sys, x, m, T);
    OrbitBallEvent event{truncate(x, rho), m, T, rho, {}};
    for_each_word(bounds, Word(bounds.size(), 0), all, [&](const Word& w) {
        if (column_trace(sys, Configuration(x.alphabet(), s, w), m, T) == target) {
            event.words.push_back(w);
        }
    });
    return event;
}

std::uint64_t exact_enumeration_size(const System& sys, const Measure& mu, int m, int n, int T,
                                     std::uint64_t cap)
{
    require_compatible(sys, mu);
    const int rho = dependence_radius(sys, m, T);
    if (n >= rho) {
        return 1;
    }
    return count_words(combined_bounds(sys, mu, rho),
                       positions_outside(system_sidedness(sys), rho, n), cap);
}

double density_ratio_exact(const System& sys, const Measure& mu, const Configuration& x, int m,
                           int n, int T, std::uint64_t cap)
{
    require(n >= 1, ErrorCode::InvalidArgument, "ball radius n must be >= 1");
    require_symbolic_input(sys, x);
    require_compatible(sys, mu);
    const Sidedness s = x.sidedness();
    require(cylinder_probability(mu, ball_cylinder(x, n)) > 0.0, ErrorCode::NullBall,
            "mu(B_n(x)) = 0");
    const int rho = dependence_radius(sys, m, T);
    if (n >= rho) {
        return 1.0;
    }
    require(x.radius() >= rho, ErrorCode::InsufficientRadius,
            "base point needs valid radius " + std::to_string(rho));

    const std::vector<int> bounds = combined_bounds(sys, mu, rho);
    const std::vector<std::size_t> free = positions_outside(s, rho, n);
    require_within_cap(count_words(bounds, free, cap), cap, "exact density ratio");

    const std::vector<Word> target = column_trace(sys, x, m, T);
    detail::TraceMatcher matches(sys, target, m, rho);
    double member = 0.0;
    double total = 0.0;
    for_each_word(bounds, restrict(x, rho), free, [&](const Word& w) {
        const double p = word_probability(mu, s, w);
        if (p == 0.0) {
            return;
        }
        total += p;
        if (matches(w)) {
            member += p;
        }
    });
    return member / total;
}

double density_ratio_exact(const Rotation&, CirclePoint, int m, int n, int T)
{
    require(m >= 1 && n >= 1 && T >= 0, ErrorCode::InvalidArgument,
            "rotation ratio needs m, n >= 1 and T >= 0");
    if (n >= m) {
        return 1.0;
    }
    return arc_length(1.0 / m) / arc_length(1.0 / n);
}

RatioEstimate density_ratio_estimate(const System& sys, const Measure& mu, const Configuration& x,
                                     int m, int n, int T, std::uint64_t samples,
                                     std::uint64_t seed)
{
    require(n >= 1 && samples >= 1, ErrorCode::InvalidArgument, "need n >= 1 and N >= 1");
    require_symbolic_input(sys, x);
    require_compatible(sys, mu);
    const Cylinder ball = ball_cylinder(x, n);
    require(cylinder_probability(mu, ball) > 0.0, ErrorCode::NullBall, "mu(B_n(x)) = 0");
    const int rho = dependence_radius(sys, m, T);
    const int radius = std::max(rho, n);
    const std::vector<Word> target = column_trace(sys, x, m, T);

    std::vector<char> hit(samples, 0);
    parallel_for(samples, [&](std::size_t i) {
        const Configuration y =
            conditional_sample(mu, ball, radius, derive_seed(seed, kStreamConditional, i));
        hit[i] = column_trace(sys, y, m, T) == target ? 1 : 0;
    });
    const auto count = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
    RatioEstimate est;
    est.estimate = static_cast<double>(count) / static_cast<double>(samples);
    est.std_error = binomial_std_error(est.estimate, samples);
    est.samples = samples;
    est.seed = seed;
    est.m = m;
    est.n = n;
    est.T = T;
    return est;
}

RatioEstimate density_ratio_estimate(const Rotation& rot, CirclePoint x, int m, int n, int T,
                                     std::uint64_t samples, std::uint64_t seed)
{
    require(m >= 1 && n >= 1 && samples >= 1, ErrorCode::InvalidArgument,
            "need m, n >= 1 and N >= 1");
    const double half_width = std::min(1.0 / n, 0.5);
    std::vector<char> hit(samples, 0);
    parallel_for(samples, [&](std::size_t i) {
        Rng rng = make_rng(seed, kStreamConditional, i);
        const CirclePoint y(x.angle() + (2.0 * uniform01(rng) - 1.0) * half_width);
        hit[i] = orbit_ball_member(rot, x, y, m, T) ? 1 : 0;
    });
    const auto count = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
    RatioEstimate est;
    est.estimate = static_cast<double>(count) / static_cast<double>(samples);
    est.std_error = binomial_std_error(est.estimate, samples);
    est.samples = samples;
    est.seed = seed;
    est.m = m;
    est.n = n;
    est.T = T;
    return est;
}

bool equicontinuity_point_test(const System& sys, const Configuration& x, int m, int n, int T,
                               std::uint64_t cap)
{
    require(n >= 0, ErrorCode::InvalidArgument, "n must be >= 0");
    require_symbolic_input(sys, x);
    const int rho = dependence_radius(sys, m, T);
    if (n >= rho) {
        return true;
    }
    require(x.radius() >= rho, ErrorCode::InsufficientRadius,
            "base point needs valid radius " + std::to_string(rho));
    const Sidedness s = x.sidedness();
    const std::vector<int> bounds = cell_bounds(sys, rho);
    const std::vector<std::size_t> free = positions_outside(s, rho, n);
    require_within_cap(count_words(bounds, free, cap), cap, "equicontinuity point test");

    const std::vector<Word> target = column_trace(sys, x, m, T);
    bool all_members = true;
    for_each_word(bounds, restrict(x, rho), free, [&](const Word& w) {
        if (all_members && column_trace(sys, Configuration(x.alphabet(), s, w), m, T) != target) {
            all_members = false;
        }
    });
    return all_members;
}

bool equicontinuity_point_test(const Rotation&, CirclePoint, int m, int n, int T)
{
    require(m >= 1 && n >= 1 && T >= 0, ErrorCode::InvalidArgument, "need m, n >= 1, T >= 0");
    return n >= m;
}

EquicontinuityReport mu_equicontinuity_report(const System& sys, const Measure& mu,
                                              const EquicontinuityParams& params)
{
    const bool rotation = std::holds_alternative<Rotation>(sys);
    validate_params(params, rotation);
    EquicontinuityReport report;
    report.params = params;
    report.points.resize(params.points);

    if (rotation) {
        require(std::holds_alternative<CircleLebesgue>(mu), ErrorCode::UnsupportedSystem,
                "rotation analysis uses Lebesgue measure on the circle");
        const Rotation& rot = std::get<Rotation>(sys);
        parallel_for(params.points, [&](std::size_t i) {
            Rng rng = make_rng(params.seed, kStreamBasePoints, i);
            const CirclePoint x(uniform01(rng));
            PointCurve& pc = report.points[i];
            pc.base = format_angle(x.angle());
            for (int n : params.n_list) {
                pc.ratios.push_back(density_ratio_exact(rot, x, params.m, n, params.T));
            }
        });
        report.fraction = terminal_fraction(report.points, params.n_list, params.delta);
        return report;
    }

    require_compatible(sys, mu);
    const Sidedness s = system_sidedness(sys);
    const int rho = dependence_radius(sys, params.m, params.T);
    const int radius = std::max(rho, *std::max_element(params.n_list.begin(), params.n_list.end()));

    parallel_for(params.points, [&](std::size_t i) {
        const Configuration x =
            sample_config(mu, s, radius, derive_seed(params.seed, kStreamBasePoints, i));
        PointCurve& pc = report.points[i];
        pc.base = format_word(x.symbols(), x.alphabet());
        for (std::size_t j = 0; j < params.n_list.size(); ++j) {
            const int n = params.n_list[j];
            if (exact_enumeration_size(sys, mu, params.m, n, params.T, params.enumeration_cap)
                <= params.enumeration_cap) {
                pc.ratios.push_back(density_ratio_exact(sys, mu, x, params.m, n, params.T,
                                                        params.enumeration_cap));
            } else {
                pc.exact = false;
                const std::uint64_t seed = derive_seed(params.seed, kStreamCurve + j, i);
                pc.ratios.push_back(
                    density_ratio_estimate(sys, mu, x, params.m, n, params.T, params.samples, seed)
                        .estimate);
            }
        }
    });
    report.fraction = terminal_fraction(report.points, params.n_list, params.delta);
    return report;
}

} // namespace equidyn
