#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "equidyn/core.hpp"

namespace equidyn {

/// Radius-r cellular automaton given by a total rule table.
///
/// Two-sided neighbourhoods are {i-r..i+r}; one-sided are {i..i+r}. The table
/// is indexed by the neighbourhood read as a base-|A| number, leftmost cell
/// most significant, so an elementary rule's Wolfram number is
/// sum_k table[k] * 2^k.
class CellularAutomaton {
public:
    CellularAutomaton(Alphabet alphabet, Sidedness sidedness, int radius, std::vector<Symbol> table);

    /// Elementary (|A| = 2, r = 1, two-sided) rule by Wolfram number.
    static CellularAutomaton elementary(int rule);
    /// The left shift (T x)_i = x_{i+1} as a radius-1 one-sided rule.
    static CellularAutomaton shift(Alphabet alphabet = Alphabet(2));
    /// Rule that copies the centre cell.
    static CellularAutomaton identity(Alphabet alphabet, Sidedness sidedness, int radius = 1);

    Alphabet alphabet() const noexcept { return alphabet_; }
    Sidedness sidedness() const noexcept { return sidedness_; }
    int radius() const noexcept { return radius_; }
    std::size_t neighborhood_size() const noexcept;
    const std::vector<Symbol>& table() const noexcept { return table_; }

    /// Wolfram number when the rule is elementary.
    std::optional<int> wolfram_number() const;

    Symbol apply(const Symbol* neighborhood) const noexcept;

private:
    Alphabet alphabet_;
    Sidedness sidedness_;
    int radius_;
    std::vector<Symbol> table_;
};

/// S-adic odometer on prod_i Z_{s_i}; the last listed size repeats forever.
class Odometer {
public:
    explicit Odometer(std::vector<int> sizes);

    const std::vector<int>& sizes() const noexcept { return sizes_; }
    int size_at(int index) const noexcept;
    Alphabet alphabet() const;

    /// prod_{i <= m} s_i, the number of states of the first m+1 digits.
    std::uint64_t cycle_length(int m) const;

private:
    std::vector<int> sizes_;
};

/// x -> x + alpha mod 1.
class Rotation {
public:
    explicit Rotation(double alpha);

    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

using System = std::variant<CellularAutomaton, Odometer, Rotation>;

bool is_symbolic(const System& sys) noexcept;

/// Alphabet and sidedness of configurations the system acts on.
Alphabet system_alphabet(const System& sys);
Sidedness system_sidedness(const System& sys);

/// Cells of W_{m + r T} (CA) or W_m (odometer) determine the resolution-m
/// column trace up to horizon T.
int dependence_radius(const System& sys, int m, int T);

/// Valid radius lost per step: r for a CA, 0 for an odometer.
int radius_loss_per_step(const System& sys);

/// Admissible symbol count per storage position of W_radius.
std::vector<int> cell_bounds(const System& sys, int radius);

Configuration step(const CellularAutomaton& ca, const Configuration& x);
Configuration step(const Odometer& odo, const Configuration& x);
CirclePoint step(const Rotation& rot, CirclePoint a);
Configuration step(const System& sys, const Configuration& x);

/// The shift primitive: drops index 0 (one-sided) or re-centres (two-sided).
Configuration shift_map(const Configuration& x);

/// Entry i is x's resolution-m window after i steps, for 0 <= i <= T.
std::vector<Word> column_trace(const System& sys, const Configuration& x, int m, int T);

} // namespace equidyn
