#include "equidyn/systems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace equidyn {

namespace {

constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 24;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t table_size(Alphabet a, std::size_t neighborhood)
{
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < neighborhood; ++i) {
        size *= static_cast<std::uint64_t>(a.size());
        require(size <= kMaxTableSize, ErrorCode::InvalidArgument, "rule table too large");
    }
    return size;
}

void require_ca_input(const CellularAutomaton& ca, const Configuration& x)
{
    require(x.alphabet() == ca.alphabet() && x.sidedness() == ca.sidedness(),
            ErrorCode::IncompatibleConfigurations,
            "configuration alphabet/sidedness does not match the automaton");
}

} // namespace

CellularAutomaton::CellularAutomaton(Alphabet alphabet, Sidedness sidedness, int radius,
                                     std::vector<Symbol> table)
    : alphabet_(alphabet), sidedness_(sidedness), radius_(radius), table_(std::move(table))
{
    require(radius >= 0, ErrorCode::InvalidArgument, "CA radius must be >= 0");
    require(table_.size() == table_size(alphabet_, neighborhood_size()), ErrorCode::InvalidArgument,
            "rule table must list every neighbourhood");
    for (Symbol s : table_) {
        require(alphabet_.contains(s), ErrorCode::InvalidArgument, "rule output outside alphabet");
    }
}

CellularAutomaton CellularAutomaton::elementary(int rule)
{
    require(rule >= 0 && rule <= 255, ErrorCode::InvalidArgument,
            "elementary rule number must be in [0, 255]");
    std::vector<Symbol> table(8);
    for (int k = 0; k < 8; ++k) {
        table[static_cast<std::size_t>(k)] = static_cast<Symbol>((rule >> k) & 1);
    }
    return CellularAutomaton(Alphabet(2), Sidedness::TwoSided, 1, std::move(table));
}

CellularAutomaton CellularAutomaton::shift(Alphabet alphabet)
{
    const auto k = static_cast<std::size_t>(alphabet.size());
    std::vector<Symbol> table(k * k);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        table[idx] = static_cast<Symbol>(idx % k);
    }
    return CellularAutomaton(alphabet, Sidedness::OneSided, 1, std::move(table));
}

CellularAutomaton CellularAutomaton::identity(Alphabet alphabet, Sidedness sidedness, int radius)
{
    const std::size_t len = sidedness == Sidedness::TwoSided ? 2 * static_cast<std::size_t>(radius) + 1
                                                             : static_cast<std::size_t>(radius) + 1;
    const std::size_t centre = sidedness == Sidedness::TwoSided ? static_cast<std::size_t>(radius) : 0;
    const auto k = static_cast<std::uint64_t>(alphabet.size());
    std::vector<Symbol> table(table_size(alphabet, len));
    for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
        std::uint64_t v = idx;
        for (std::size_t skip = 0; skip + 1 + centre < len; ++skip) {
            v /= k;
        }
        table[idx] = static_cast<Symbol>(v % k);
    }
    return CellularAutomaton(alphabet, sidedness, radius, std::move(table));
}

std::size_t CellularAutomaton::neighborhood_size() const noexcept
{
    return sidedness_ == Sidedness::TwoSided ? 2 * static_cast<std::size_t>(radius_) + 1
                                             : static_cast<std::size_t>(radius_) + 1;
}

std::optional<int> CellularAutomaton::wolfram_number() const
{
    if (alphabet_.size() != 2 || radius_ != 1 || sidedness_ != Sidedness::TwoSided) {
        return std::nullopt;
    }
    int rule = 0;
    for (std::size_t k = 0; k < table_.size(); ++k) {
        rule |= table_[k] << k;
    }
    return rule;
}

Symbol CellularAutomaton::apply(const Symbol* neighborhood) const noexcept
{
    std::size_t idx = 0;
    const auto k = static_cast<std::size_t>(alphabet_.size());
    for (std::size_t j = 0; j < neighborhood_size(); ++j) {
        idx = idx * k + neighborhood[j];
    }
    return table_[idx];
}

Odometer::Odometer(std::vector<int> sizes) : sizes_(std::move(sizes))
{
    require(!sizes_.empty(), ErrorCode::InvalidArgument, "odometer needs at least one factor");
    for (int s : sizes_) {
        require(s >= 2 && s <= 256, ErrorCode::InvalidArgument, "odometer factors must be in [2, 256]");
    }
}

int Odometer::size_at(int index) const noexcept
{
    const auto i = static_cast<std::size_t>(std::max(index, 0));
    return i < sizes_.size() ? sizes_[i] : sizes_.back();
}

Alphabet Odometer::alphabet() const
{
    return Alphabet(*std::max_element(sizes_.begin(), sizes_.end()));
}

std::uint64_t Odometer::cycle_length(int m) const
{
    std::uint64_t len = 1;
    for (int i = 0; i <= m; ++i) {
        len *= static_cast<std::uint64_t>(size_at(i));
    }
    return len;
}

Rotation::Rotation(double alpha) : alpha_(alpha)
{
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidArgument, "rotation angle must be in (0, 1)");
}

bool is_symbolic(const System& sys) noexcept
{
    return !std::holds_alternative<Rotation>(sys);
}

Alphabet system_alphabet(const System& sys)
{
    return std::visit(overloaded{
                          [](const CellularAutomaton& ca) { return ca.alphabet(); },
                          [](const Odometer& odo) { return odo.alphabet(); },
                          [](const Rotation&) -> Alphabet {
                              fail(ErrorCode::UnsupportedSystem, "rotation has no symbolic alphabet");
                          },
                      },
                      sys);
}

Sidedness system_sidedness(const System& sys)
{
    return std::visit(overloaded{
                          [](const CellularAutomaton& ca) { return ca.sidedness(); },
                          [](const Odometer&) { return Sidedness::OneSided; },
                          [](const Rotation&) -> Sidedness {
                              fail(ErrorCode::UnsupportedSystem, "rotation has no symbolic indexing");
                          },
                      },
                      sys);
}

int radius_loss_per_step(const System& sys)
{
    return std::visit(overloaded{
                          [](const CellularAutomaton& ca) { return ca.radius(); },
                          [](const Odometer&) { return 0; },
                          [](const Rotation&) -> int {
                              fail(ErrorCode::UnsupportedSystem, "rotation has no dependence window");
                          },
                      },
                      sys);
}

int dependence_radius(const System& sys, int m, int T)
{
    require(m >= 0 && T >= 0, ErrorCode::InvalidArgument, "resolution and horizon must be >= 0");
    return m + radius_loss_per_step(sys) * T;
}

std::vector<int> cell_bounds(const System& sys, int radius)
{
    const Sidedness s = system_sidedness(sys);
    std::vector<int> bounds(window_size(s, radius), system_alphabet(sys).size());
    if (const auto* odo = std::get_if<Odometer>(&sys)) {
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            bounds[i] = odo->size_at(static_cast<int>(i));
        }
    }
    return bounds;
}

Configuration step(const CellularAutomaton& ca, const Configuration& x)
{
    require_ca_input(ca, x);
    const int r = ca.radius();
    require(x.radius() >= r, ErrorCode::InsufficientRadius,
            "valid radius " + std::to_string(x.radius()) + " below CA radius " + std::to_string(r));
    const Word& in = x.symbols();
    const std::size_t out_len = window_size(x.sidedness(), x.radius() - r);
    Word out(out_len);
    // In both layouts output cell j's neighbourhood starts at input position j.
    for (std::size_t j = 0; j < out_len; ++j) {
        out[j] = ca.apply(in.data() + j);
    }
    return Configuration(x.alphabet(), x.sidedness(), std::move(out));
}

Configuration step(const Odometer& odo, const Configuration& x)
{
    require(x.sidedness() == Sidedness::OneSided, ErrorCode::IncompatibleConfigurations,
            "odometer digits are one-sided");
    Word digits = x.symbols();
    for (std::size_t i = 0; i < digits.size(); ++i) {
        require(digits[i] < odo.size_at(static_cast<int>(i)), ErrorCode::InvalidArgument,
                "digit " + std::to_string(i) + " exceeds its factor size");
    }
    // +1 at digit 0 with carry; a carry past the valid window is not observable.
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] + 1 < odo.size_at(static_cast<int>(i))) {
            ++digits[i];
            break;
        }
        digits[i] = 0;
    }
    return Configuration(x.alphabet(), x.sidedness(), std::move(digits));
}

CirclePoint step(const Rotation& rot, CirclePoint a)
{
    return CirclePoint(a.angle() + rot.alpha());
}

Configuration step(const System& sys, const Configuration& x)
{
    return std::visit(overloaded{
                          [&](const CellularAutomaton& ca) { return step(ca, x); },
                          [&](const Odometer& odo) { return step(odo, x); },
                          [](const Rotation&) -> Configuration {
                              fail(ErrorCode::UnsupportedSystem, "rotation acts on circle points");
                          },
                      },
                      sys);
}

Configuration shift_map(const Configuration& x)
{
    require(x.radius() >= 1, ErrorCode::InsufficientRadius, "shift needs valid radius >= 1");
    const Word& in = x.symbols();
    if (x.sidedness() == Sidedness::OneSided) {
        return Configuration(x.alphabet(), x.sidedness(), Word(in.begin() + 1, in.end()));
    }
    // (σx)_i = x_{i+1} for |i| <= R-1: input positions 2..2R.
    return Configuration(x.alphabet(), x.sidedness(), Word(in.begin() + 2, in.end()));
}

std::vector<Word> column_trace(const System& sys, const Configuration& x, int m, int T)
{
    require(is_symbolic(sys), ErrorCode::UnsupportedSystem, "rotation has no column trace");
    const int rho = dependence_radius(sys, m, T);
    require(x.radius() >= rho, ErrorCode::InsufficientRadius,
            "column trace to horizon " + std::to_string(T) + " at resolution " + std::to_string(m)
                + " needs valid radius " + std::to_string(rho) + ", have "
                + std::to_string(x.radius()));
    std::vector<Word> trace;
    trace.reserve(static_cast<std::size_t>(T) + 1);
    Configuration current = truncate(x, rho);
    trace.push_back(restrict(current, m));
    for (int i = 1; i <= T; ++i) {
        current = step(sys, current);
        trace.push_back(restrict(current, m));
    }
    return trace;
}

} // namespace equidyn
