#include "equidyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace equidyn {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
// Beyond this many factors the product is accumulated in log space.
constexpr std::size_t kLinearFactorLimit = 64;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability_vector(const std::vector<double>& v, const std::string& what)
{
    double total = 0.0;
    for (double p : v) {
        require(std::isfinite(p) && p >= 0.0, ErrorCode::InvalidArgument,
                what + " has a negative or non-finite entry");
        total += p;
    }
    require(std::abs(total - 1.0) <= kStochasticTol, ErrorCode::InvalidArgument,
            what + " does not sum to 1");
}

/// Product of factors; switches to log space past kLinearFactorLimit.
class ProductAccumulator {
public:
    explicit ProductAccumulator(std::size_t factors) : log_space_(factors > kLinearFactorLimit) {}

    void multiply(double f)
    {
        if (f == 0.0) {
            zero_ = true;
        } else if (log_space_) {
            log_ += std::log(f);
        } else {
            linear_ *= f;
        }
    }

    double value() const
    {
        if (zero_) {
            return 0.0;
        }
        return log_space_ ? std::exp(log_) : linear_;
    }

private:
    bool log_space_;
    bool zero_ = false;
    double linear_ = 1.0;
    double log_ = 0.0;
};

std::vector<double> solve_stationary(const MarkovMeasure::Matrix& p)
{
    // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    const std::size_t n = p.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        a[n - 1][j] = 1.0;
    }
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        require(std::abs(a[pivot][col]) > 1e-14, ErrorCode::InvalidArgument,
                "transition matrix has no unique stationary vector");
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = a[i][n] / a[i][i];
    }
    return pi;
}

std::size_t draw(const std::vector<double>& weights, Rng& rng)
{
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) {
            last_positive = i;
            acc += weights[i];
            if (u < acc) {
                return i;
            }
        }
    }
    return last_positive;
}

Symbol draw_uniform(int bound, Rng& rng)
{
    return static_cast<Symbol>(std::min<int>(bound - 1, static_cast<int>(uniform01(rng) * bound)));
}

void require_cantor(const Measure& mu)
{
    require(is_cantor_measure(mu), ErrorCode::UnsupportedSystem,
            "circle Lebesgue measure has no cylinder structure");
}

void require_haar_one_sided(const Measure& mu, Sidedness s)
{
    require(!std::holds_alternative<ProductMeasure>(mu) || s == Sidedness::OneSided,
            ErrorCode::AlphabetMismatch, "Haar product measure lives on one-sided sequences");
}

// Fill storage positions [from, to) left to right (forward chain) or right to
// left (reversed chain); the neighbour on the already-filled side must be set.
void extend_markov(const MarkovMeasure& mu, Word& w, std::ptrdiff_t from, std::ptrdiff_t to,
                   bool forward, Rng& rng)
{
    if (forward) {
        for (std::ptrdiff_t i = from; i < to; ++i) {
            w[static_cast<std::size_t>(i)] = static_cast<Symbol>(
                draw(mu.transitions()[w[static_cast<std::size_t>(i - 1)]], rng));
        }
    } else {
        for (std::ptrdiff_t i = to - 1; i >= from; --i) {
            w[static_cast<std::size_t>(i)] = static_cast<Symbol>(
                draw(mu.reversed()[w[static_cast<std::size_t>(i + 1)]], rng));
        }
    }
}

std::vector<Cylinder> one_step_refinement(const Measure& mu, const Cylinder& c)
{
    const int r = c.radius + 1;
    const std::vector<int> bounds = cell_bounds(mu, c.sidedness, r);
    Word seed(window_size(c.sidedness, r), 0);
    const std::size_t offset = c.sidedness == Sidedness::OneSided ? 0 : 1;
    std::copy(c.word.begin(), c.word.end(), seed.begin() + static_cast<std::ptrdiff_t>(offset));
    std::vector<Cylinder> children;
    for_each_word(bounds, seed, positions_outside(c.sidedness, r, c.radius),
                  [&](const Word& w) { children.emplace_back(c.alphabet, c.sidedness, r, w); });
    return children;
}

} // namespace

BernoulliMeasure::BernoulliMeasure(std::vector<double> weights)
    : alphabet_(static_cast<int>(weights.size())), weights_(std::move(weights))
{
    check_probability_vector(weights_, "Bernoulli weights");
}

MarkovMeasure::MarkovMeasure(Matrix transitions, std::optional<std::vector<double>> stationary)
    : alphabet_(static_cast<int>(transitions.size())), transitions_(std::move(transitions))
{
    const std::size_t n = transitions_.size();
    for (const auto& row : transitions_) {
        require(row.size() == n, ErrorCode::InvalidArgument, "transition matrix must be square");
        check_probability_vector(row, "transition row");
    }
    stationary_ = stationary ? *stationary : solve_stationary(transitions_);
    require(stationary_.size() == n, ErrorCode::InvalidArgument,
            "stationary vector has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
        require(stationary_[j] > 0.0, ErrorCode::InvalidArgument,
                "stationary vector must be strictly positive (irreducible chain)");
        double pj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pj += stationary_[i] * transitions_[i][j];
        }
        require(std::abs(pj - stationary_[j]) <= kStationaryTol, ErrorCode::InvalidArgument,
                "pi P != pi");
    }
    check_probability_vector(stationary_, "stationary vector");

    reversed_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            reversed_[a][b] = stationary_[b] * transitions_[b][a] / stationary_[a];
        }
    }
}

ProductMeasure::ProductMeasure(std::vector<int> sizes)
    : alphabet_(sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end()))
    , sizes_(std::move(sizes))
{
    for (int s : sizes_) {
        require(s >= 2, ErrorCode::InvalidArgument, "product factor sizes must be >= 2");
    }
}

int ProductMeasure::size_at(int index) const noexcept
{
    const auto i = static_cast<std::size_t>(std::max(index, 0));
    return i < sizes_.size() ? sizes_[i] : sizes_.back();
}

bool is_cantor_measure(const Measure& mu) noexcept
{
    return !std::holds_alternative<CircleLebesgue>(mu);
}

Alphabet measure_alphabet(const Measure& mu)
{
    require_cantor(mu);
    return std::visit(overloaded{
                          [](const CircleLebesgue&) -> Alphabet { return Alphabet(2); },
                          [](const auto& m) -> Alphabet { return m.alphabet(); },
                      },
                      mu);
}

std::vector<int> cell_bounds(const Measure& mu, Sidedness s, int radius)
{
    require_cantor(mu);
    require_haar_one_sided(mu, s);
    std::vector<int> bounds(window_size(s, radius), measure_alphabet(mu).size());
    if (const auto* haar = std::get_if<ProductMeasure>(&mu)) {
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            bounds[i] = haar->size_at(static_cast<int>(i));
        }
    }
    return bounds;
}

double word_probability(const Measure& mu, Sidedness s, const Word& w)
{
    require_cantor(mu);
    require_haar_one_sided(mu, s);
    if (w.empty()) {
        return 1.0;
    }
    const Alphabet alphabet = measure_alphabet(mu);
    for (Symbol sym : w) {
        require(alphabet.contains(sym), ErrorCode::AlphabetMismatch,
                "word symbol outside the measure's alphabet");
    }
    ProductAccumulator acc(w.size());
    std::visit(overloaded{
                   [&](const BernoulliMeasure& m) {
                       for (Symbol sym : w) {
                           acc.multiply(m.weights()[sym]);
                       }
                   },
                   [&](const MarkovMeasure& m) {
                       acc.multiply(m.stationary()[w.front()]);
                       for (std::size_t i = 1; i < w.size(); ++i) {
                           acc.multiply(m.transitions()[w[i - 1]][w[i]]);
                       }
                   },
                   [&](const ProductMeasure& m) {
                       for (std::size_t i = 0; i < w.size(); ++i) {
                           const int size = m.size_at(static_cast<int>(i));
                           acc.multiply(w[i] < size ? 1.0 / size : 0.0);
                       }
                   },
                   [](const CircleLebesgue&) {},
               },
               mu);
    return acc.value();
}

double cylinder_probability(const Measure& mu, const Cylinder& c)
{
    require(measure_alphabet(mu) == c.alphabet, ErrorCode::AlphabetMismatch,
            "cylinder alphabet size " + std::to_string(c.alphabet.size())
                + " differs from the measure's " + std::to_string(measure_alphabet(mu).size()));
    return word_probability(mu, c.sidedness, c.word);
}

Configuration sample_config(const Measure& mu, Sidedness s, int radius, Rng& rng)
{
    require(radius >= 0, ErrorCode::InvalidArgument, "sample radius must be >= 0");
    const Alphabet alphabet = measure_alphabet(mu);
    const std::vector<int> bounds = cell_bounds(mu, s, radius);
    Word w(bounds.size(), 0);
    std::visit(overloaded{
                   [&](const BernoulliMeasure& m) {
                       for (auto& sym : w) {
                           sym = static_cast<Symbol>(draw(m.weights(), rng));
                       }
                   },
                   [&](const MarkovMeasure& m) {
                       w[0] = static_cast<Symbol>(draw(m.stationary(), rng));
                       extend_markov(m, w, 1, static_cast<std::ptrdiff_t>(w.size()), true, rng);
                   },
                   [&](const ProductMeasure&) {
                       for (std::size_t i = 0; i < w.size(); ++i) {
                           w[i] = draw_uniform(bounds[i], rng);
                       }
                   },
                   [](const CircleLebesgue&) {},
               },
               mu);
    return Configuration(alphabet, s, std::move(w));
}

Configuration sample_config(const Measure& mu, Sidedness s, int radius, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_config(mu, s, radius, rng);
}

Configuration conditional_sample(const Measure& mu, const Cylinder& c, int radius, Rng& rng)
{
    require(radius >= c.radius, ErrorCode::InvalidArgument,
            "sample radius must cover the conditioning window");
    require(cylinder_probability(mu, c) > 0.0, ErrorCode::NullCylinder,
            "conditioning cylinder has zero mass");
    const Sidedness s = c.sidedness;
    const std::vector<int> bounds = cell_bounds(mu, s, radius);
    Word w(bounds.size(), 0);
    const std::size_t offset = s == Sidedness::OneSided ? 0 : static_cast<std::size_t>(radius - c.radius);
    std::copy(c.word.begin(), c.word.end(), w.begin() + static_cast<std::ptrdiff_t>(offset));
    const auto lo = static_cast<std::ptrdiff_t>(offset);
    const auto hi = lo + static_cast<std::ptrdiff_t>(c.word.size());
    const auto len = static_cast<std::ptrdiff_t>(w.size());

    std::visit(overloaded{
                   [&](const BernoulliMeasure& m) {
                       for (std::ptrdiff_t i = 0; i < len; ++i) {
                           if (i < lo || i >= hi) {
                               w[static_cast<std::size_t>(i)] = static_cast<Symbol>(draw(m.weights(), rng));
                           }
                       }
                   },
                   [&](const MarkovMeasure& m) {
                       extend_markov(m, w, hi, len, true, rng);
                       extend_markov(m, w, 0, lo, false, rng);
                   },
                   [&](const ProductMeasure&) {
                       for (std::ptrdiff_t i = hi; i < len; ++i) {
                           w[static_cast<std::size_t>(i)] = draw_uniform(bounds[static_cast<std::size_t>(i)], rng);
                       }
                   },
                   [](const CircleLebesgue&) {},
               },
               mu);
    return Configuration(c.alphabet, s, std::move(w));
}

Configuration conditional_sample(const Measure& mu, const Cylinder& c, int radius,
                                 std::uint64_t seed)
{
    Rng rng(seed);
    return conditional_sample(mu, c, radius, rng);
}

std::vector<Cylinder> maximal_cylinders(const CylinderUnion& a)
{
    std::vector<Cylinder> sorted = a;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Cylinder& l, const Cylinder& r) { return l.radius < r.radius; });
    std::vector<Cylinder> kept;
    for (const Cylinder& c : sorted) {
        require(kept.empty()
                    || (c.alphabet == kept.front().alphabet && c.sidedness == kept.front().sidedness),
                ErrorCode::IncompatibleConfigurations, "cylinder union mixes alphabets or sidedness");
        const bool covered = std::any_of(kept.begin(), kept.end(),
                                         [&](const Cylinder& k) { return c.is_subset_of(k); });
        if (!covered) {
            kept.push_back(c);
        }
    }
    return kept;
}

double union_probability(const Measure& mu, const CylinderUnion& a)
{
    double total = 0.0;
    for (const Cylinder& c : maximal_cylinders(a)) {
        total += cylinder_probability(mu, c);
    }
    return total;
}

double lebesgue_density_ratio(const Measure& mu, const CylinderUnion& a, const Configuration& x,
                              int n)
{
    const Cylinder ball = ball_cylinder(x, n);
    const double ball_mass = cylinder_probability(mu, ball);
    require(ball_mass > 0.0, ErrorCode::NullBall, "mu(B_n(x)) = 0");

    double inside = 0.0;
    for (const Cylinder& c : maximal_cylinders(a)) {
        if (ball.is_subset_of(c)) {
            return 1.0;
        }
        if (c.is_subset_of(ball)) {
            inside += cylinder_probability(mu, c);
        }
    }
    return std::clamp(inside / ball_mass, 0.0, 1.0);
}

BallFamily vitali_cover(const Measure& mu, const CylinderUnion& a, int min_radius,
                        double tolerance)
{
    require(min_radius >= 1, ErrorCode::InvalidArgument, "Vitali cover needs radius >= 1");
    require(tolerance >= 0.0, ErrorCode::InvalidArgument, "tolerance must be >= 0");

    BallFamily family;
    for (const Cylinder& c : maximal_cylinders(a)) {
        if (c.radius >= min_radius) {
            family.balls.push_back(Ball{c.center(), c.radius});
            continue;
        }
        const std::vector<int> bounds = cell_bounds(mu, c.sidedness, min_radius);
        Word seed(window_size(c.sidedness, min_radius), 0);
        const std::size_t offset =
            c.sidedness == Sidedness::OneSided ? 0 : static_cast<std::size_t>(min_radius - c.radius);
        std::copy(c.word.begin(), c.word.end(), seed.begin() + static_cast<std::ptrdiff_t>(offset));
        for_each_word(bounds, seed, positions_outside(c.sidedness, min_radius, c.radius),
                      [&](const Word& w) {
                          family.balls.push_back(
                              Ball{Configuration(c.alphabet, c.sidedness, w), min_radius});
                      });
    }
    family.leftover = uncovered_mass(mu, a, family.balls);
    return family;
}

namespace {

double uncovered_in(const Measure& mu, const Cylinder& c, const std::vector<Cylinder>& balls)
{
    bool touches = false;
    for (const Cylinder& b : balls) {
        if (c.is_subset_of(b)) {
            return 0.0;
        }
        touches = touches || b.is_subset_of(c);
    }
    if (!touches) {
        return cylinder_probability(mu, c);
    }
    double total = 0.0;
    for (const Cylinder& child : one_step_refinement(mu, c)) {
        total += uncovered_in(mu, child, balls);
    }
    return total;
}

} // namespace

double uncovered_mass(const Measure& mu, const CylinderUnion& a, const std::vector<Ball>& balls)
{
    std::vector<Cylinder> ball_cyls;
    ball_cyls.reserve(balls.size());
    for (const Ball& b : balls) {
        ball_cyls.push_back(b.cylinder());
    }
    double total = 0.0;
    for (const Cylinder& c : maximal_cylinders(a)) {
        total += uncovered_in(mu, c, ball_cyls);
    }
    return total;
}

bool pairwise_disjoint(const std::vector<Ball>& balls)
{
    for (std::size_t i = 0; i < balls.size(); ++i) {
        const Cylinder ci = balls[i].cylinder();
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            if (!ci.is_disjoint_from(balls[j].cylinder())) {
                return false;
            }
        }
    }
    return true;
}

} // namespace equidyn
