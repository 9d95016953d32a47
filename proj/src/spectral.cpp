#include "equidyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equidyn/periodicity.hpp"
#include "equidyn/sampling.hpp"
#include "trace_matcher.hpp"

namespace equidyn {

namespace {

constexpr std::uint64_t kStreamSpectral = 0x600;

void require_compatible(const System& sys, const Measure& mu)
{
    require(is_cantor_measure(mu), ErrorCode::UnsupportedSystem,
            "spectral analysis needs a Cantor measure");
    require(system_alphabet(sys) == measure_alphabet(mu), ErrorCode::AlphabetMismatch,
            "system and measure alphabets differ");
}

std::vector<int> partition_bounds(const System& sys, const Measure& mu, int radius)
{
    std::vector<int> bounds = cell_bounds(sys, radius);
    const std::vector<int> mb = cell_bounds(mu, system_sidedness(sys), radius);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        bounds[i] = std::min(bounds[i], mb[i]);
    }
    return bounds;
}

// Sum g(x) * mu(x) over the cylinder partition of W_radius, or a Monte Carlo
// mean of g over draws from mu.
template <typename Integrand>
Complex integrate(const System& sys, const Measure& mu, int radius, const EvaluationMode& mode,
                  Integrand g)
{
    require_compatible(sys, mu);
    const Sidedness s = system_sidedness(sys);
    const Alphabet alphabet = system_alphabet(sys);
    if (mode.kind == EvaluationMode::Kind::Exact) {
        const std::vector<int> bounds = partition_bounds(sys, mu, radius);
        const std::vector<std::size_t> all = positions_outside(s, radius, -1);
        require(count_words(bounds, all, mode.enumeration_cap) <= mode.enumeration_cap,
                ErrorCode::EnumerationTooLarge,
                "cylinder partition of radius " + std::to_string(radius) + " exceeds cap "
                    + std::to_string(mode.enumeration_cap));
        Complex total = 0.0;
        for_each_word(bounds, Word(bounds.size(), 0), all, [&](const Word& w) {
            const double p = word_probability(mu, s, w);
            if (p > 0.0) {
                total += g(Configuration(alphabet, s, w)) * p;
            }
        });
        return total;
    }

    require(mode.samples >= 1, ErrorCode::InvalidArgument, "sampled mode needs N >= 1");
    std::vector<Complex> values(mode.samples);
    parallel_for(mode.samples, [&](std::size_t i) {
        values[i] = g(sample_config(mu, s, radius, derive_seed(mode.seed, kStreamSpectral, i)));
    });
    Complex total = 0.0;
    for (const Complex& v : values) {
        total += v;
    }
    return total / static_cast<double>(mode.samples);
}

} // namespace

Complex root_of_unity(std::uint64_t p, std::int64_t j)
{
    require(p >= 1, ErrorCode::InvalidArgument, "root of unity needs p >= 1");
    const auto pp = static_cast<std::int64_t>(p);
    const std::int64_t r = ((j % pp) + pp) % pp;
    if (r == 0) {
        return {1.0, 0.0};
    }
    if (2 * r == pp) {
        return {-1.0, 0.0};
    }
    if (4 * r == pp) {
        return {0.0, 1.0};
    }
    if (4 * r == 3 * pp) {
        return {0.0, -1.0};
    }
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(pp);
    return {std::cos(theta), std::sin(theta)};
}

Eigenfunction::Eigenfunction(System sys, Configuration y, int m, int k, int T)
    : sys_(std::move(sys)), y_(std::move(y)), m_(m), k_(k), T_(T), period_(0)
{
    require(is_symbolic(sys_), ErrorCode::UnsupportedSystem,
            "eigenfunctions are built on Cantor-space systems");
    const auto cert = lep_certificate(sys_, y_, m_, T_);
    require(cert.has_value(), ErrorCode::InvalidArgument,
            "base point has no periodicity certificate at (m, T)");
    require(cert->preperiod == 0, ErrorCode::InvalidArgument,
            "base point is only eventually periodic; an LP point is required");
    period_ = cert->period;
    require(k_ >= 0 && k_ < period_, ErrorCode::InvalidArgument,
            "eigenfunction index k must be in [0, p)");

    const int needed = dependence_radius() + radius_loss_per_step(sys_) * (period_ - 1);
    require(y_.radius() >= needed, ErrorCode::InsufficientRadius,
            "base point needs valid radius " + std::to_string(needed)
                + " to trace all p orbit balls");
    Configuration point = y_;
    for (int j = 0; j < period_; ++j) {
        ball_traces_.push_back(column_trace(sys_, point, m_, T_));
        point = step(sys_, point);
    }
    for (std::size_t a = 0; a < ball_traces_.size(); ++a) {
        for (std::size_t b = a + 1; b < ball_traces_.size(); ++b) {
            require(ball_traces_[a] != ball_traces_[b], ErrorCode::OverlappingBalls,
                    "orbit balls " + std::to_string(a) + " and " + std::to_string(b)
                        + " coincide at horizon " + std::to_string(T_));
        }
    }
}

int Eigenfunction::dependence_radius() const
{
    return equidyn::dependence_radius(sys_, m_, T_);
}

std::optional<int> Eigenfunction::ball_index(const Configuration& x) const
{
    const int rho = dependence_radius();
    const Word w = restrict(x, rho);
    const Word start = restrict(x, m_);
    for (std::size_t j = 0; j < ball_traces_.size(); ++j) {
        // Time 0 rules out most balls before any stepping.
        if (ball_traces_[j][0] == start && detail::TraceMatcher(sys_, ball_traces_[j], m_, rho)(w)) {
            return static_cast<int>(j);
        }
    }
    return std::nullopt;
}

bool Eigenfunction::in_ball(const Configuration& x, int j) const
{
    require(j >= 0 && j < period_, ErrorCode::InvalidArgument, "ball index out of range");
    const int rho = dependence_radius();
    return detail::TraceMatcher(sys_, ball_traces_[static_cast<std::size_t>(j)], m_, rho)(
        restrict(x, rho));
}

Complex Eigenfunction::operator()(const Configuration& x) const
{
    const auto j = ball_index(x);
    if (!j) {
        return {0.0, 0.0};
    }
    return root_of_unity(static_cast<std::uint64_t>(period_),
                         static_cast<std::int64_t>(*j) * static_cast<std::int64_t>(k_));
}

Complex eigenfunction_eval(const Eigenfunction& f, const Configuration& x)
{
    return f(x);
}

double koopman_residual(const Eigenfunction& f, const Measure& mu, const EvaluationMode& mode)
{
    const int radius = f.dependence_radius() + radius_loss_per_step(f.system());
    const Complex lambda_k = f.eigenvalue();
    const Complex sq = integrate(f.system(), mu, radius, mode, [&](const Configuration& x) {
        const Complex diff = f(step(f.system(), x)) - lambda_k * f(x);
        return Complex(std::norm(diff), 0.0);
    });
    return std::sqrt(std::max(sq.real(), 0.0));
}

Complex inner_product(const Eigenfunction& a, const Eigenfunction& b, const Measure& mu,
                      const EvaluationMode& mode)
{
    require(system_alphabet(a.system()) == system_alphabet(b.system())
                && system_sidedness(a.system()) == system_sidedness(b.system()),
            ErrorCode::IncompatibleConfigurations, "eigenfunctions live on different spaces");
    const int radius = std::max(a.dependence_radius(), b.dependence_radius());
    return integrate(a.system(), mu, radius, mode,
                     [&](const Configuration& x) { return a(x) * std::conj(b(x)); });
}

double l2_norm(const Eigenfunction& f, const Measure& mu, const EvaluationMode& mode)
{
    return std::sqrt(std::max(inner_product(f, f, mu, mode).real(), 0.0));
}

} // namespace equidyn
