#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equidyn/error.hpp"

namespace equidyn {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// Finite alphabet {0, ..., size-1}.
class Alphabet {
public:
    explicit Alphabet(int size);

    int size() const noexcept { return size_; }
    bool contains(int symbol) const noexcept { return symbol >= 0 && symbol < size_; }

    friend bool operator==(Alphabet, Alphabet) = default;

private:
    int size_;
};

enum class Sidedness { OneSided, TwoSided };

std::string_view to_string(Sidedness s);

/// Number of cells in W_n: n+1 one-sided ({0..n}), 2n+1 two-sided ({-n..n}).
constexpr std::size_t window_size(Sidedness s, int n) noexcept
{
    return s == Sidedness::OneSided ? static_cast<std::size_t>(n) + 1
                                    : 2 * static_cast<std::size_t>(n) + 1;
}

/// Lowest index of W_n.
constexpr int window_low(Sidedness s, int n) noexcept
{
    return s == Sidedness::OneSided ? 0 : -n;
}

/// A finite truncation of a point of A^{Z+} or A^{Z}, known exactly on W_radius.
///
/// Symbols are stored in ascending index order. Anything outside the valid
/// window is unknown; operations that would need it throw InsufficientRadius.
class Configuration {
public:
    Configuration(Alphabet alphabet, Sidedness sidedness, Word symbols);

    /// Parse a word string (see format_word) covering W_radius.
    static Configuration parse(Alphabet alphabet, Sidedness sidedness, std::string_view text);

    Alphabet alphabet() const noexcept { return alphabet_; }
    Sidedness sidedness() const noexcept { return sidedness_; }
    int radius() const noexcept { return radius_; }
    const Word& symbols() const noexcept { return symbols_; }

    /// Symbol at coordinate `index`; throws InsufficientRadius outside W_radius.
    Symbol at(int index) const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    Alphabet alphabet_;
    Sidedness sidedness_;
    int radius_;
    Word symbols_;
};

/// Cylinder set {x : x_{W_n} = word}.
struct Cylinder {
    Alphabet alphabet;
    Sidedness sidedness;
    int radius;
    Word word;

    Cylinder(Alphabet a, Sidedness s, int n, Word w);

    /// True when z agrees with the cylinder word on W_radius.
    bool contains(const Configuration& z) const;

    /// True when this cylinder is a subset of `other` (ultrametric nesting).
    bool is_subset_of(const Cylinder& other) const;

    /// Cylinders on a Cantor space are either nested or disjoint.
    bool is_disjoint_from(const Cylinder& other) const;

    /// The configuration whose valid window is exactly this cylinder's window.
    Configuration center() const;

    friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

/// Cantor-metric distance value: 0, 1/m when W_m (m >= 1) is the largest
/// window of agreement, 3/2 when only W_0 agrees, 2 when W_0 already differs.
class CantorDistance {
public:
    static CantorDistance zero() { return CantorDistance(Kind::Zero, 0); }
    static CantorDistance inverse(int m);
    static CantorDistance origin_only() { return CantorDistance(Kind::OriginOnly, 0); }
    static CantorDistance origin_mismatch() { return CantorDistance(Kind::Two, 0); }

    bool is_zero() const noexcept { return kind_ == Kind::Zero; }
    bool is_origin_mismatch() const noexcept { return kind_ == Kind::Two; }

    /// Largest radius of agreement (0 for 3/2, -1 for 2); throws for zero.
    int agreement_radius() const;

    double value() const noexcept;

    std::strong_ordering operator<=>(const CantorDistance& other) const noexcept;
    bool operator==(const CantorDistance& other) const noexcept = default;

private:
    enum class Kind { Zero, Inverse, OriginOnly, Two };
    CantorDistance(Kind k, int m) : kind_(k), m_(m) {}

    Kind kind_;
    int m_;
};

/// Distance between two configurations of the same alphabet and sidedness.
///
/// Equal radii with identical symbols give 0. Otherwise the largest window of
/// agreement must be witnessed by a disagreement within both valid windows.
CantorDistance cantor_distance(const Configuration& x, const Configuration& y);

/// Smallest radius k such that agreement on W_k forces d < eps; returns -1 when
/// no pair can reach eps (eps > 2) and -2 when every pair does (eps <= 0).
int separation_radius(double eps);

/// True iff d(x, y) >= eps, reading only W_{separation_radius(eps)}.
bool separated(const Configuration& x, const Configuration& y, double eps);

/// x restricted to W_n, in ascending index order.
Word restrict(const Configuration& x, int n);

/// x truncated to W_n as a configuration.
Configuration truncate(const Configuration& x, int n);

/// B_n(x) = {z : d(x, z) <= 1/n}, the cylinder of x_{W_n}. Requires n >= 1.
Cylinder ball_cylinder(const Configuration& x, int n);

/// Digit string for alphabets up to 10 symbols, comma-separated integers above.
std::string format_word(std::span<const Symbol> word, Alphabet alphabet);
Word parse_word(std::string_view text, Alphabet alphabet);

/// Point of the unit circle R/Z.
class CirclePoint {
public:
    explicit CirclePoint(double angle);

    double angle() const noexcept { return angle_; }

    friend bool operator==(CirclePoint, CirclePoint) = default;

private:
    double angle_;
};

/// min(|a-b|, 1-|a-b|).
double circle_distance(CirclePoint a, CirclePoint b);

/// Visit every word that extends a fixed prefix assignment.
///
/// `bounds[i]` is the number of admissible symbols in storage position i.
/// Positions listed in `free_positions` range over [0, bounds[i]); every other
/// position keeps its value from `seed`. Position 0 of the list varies fastest.
template <typename Visitor>
void for_each_word(const std::vector<int>& bounds, const Word& seed,
                   const std::vector<std::size_t>& free_positions, Visitor&& visit)
{
    Word w = seed;
    for (std::size_t pos : free_positions) {
        w[pos] = 0;
    }
    while (true) {
        visit(static_cast<const Word&>(w));
        std::size_t k = 0;
        for (; k < free_positions.size(); ++k) {
            std::size_t pos = free_positions[k];
            if (static_cast<int>(w[pos]) + 1 < bounds[pos]) {
                ++w[pos];
                break;
            }
            w[pos] = 0;
        }
        if (k == free_positions.size()) {
            return;
        }
    }
}

/// Product of bounds over the given positions, saturating at `cap + 1`.
std::uint64_t count_words(const std::vector<int>& bounds,
                          const std::vector<std::size_t>& positions, std::uint64_t cap);

/// Storage positions of W_radius that lie outside W_inner (both measured in a
/// word laid out on W_radius).
std::vector<std::size_t> positions_outside(Sidedness s, int radius, int inner);

} // namespace equidyn
