#include "equidyn/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace equidyn {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::IncompatibleConfigurations: return "IncompatibleConfigurations";
    case ErrorCode::InsufficientRadius: return "InsufficientRadius";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::NullCylinder: return "NullCylinder";
    case ErrorCode::NullBall: return "NullBall";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::UnsupportedSystem: return "UnsupportedSystem";
    case ErrorCode::OverlappingBalls: return "OverlappingBalls";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::string_view to_string(Sidedness s)
{
    return s == Sidedness::OneSided ? "one" : "two";
}

Alphabet::Alphabet(int size) : size_(size)
{
    require(size >= 2 && size <= 256, ErrorCode::InvalidArgument,
            "alphabet size must be in [2, 256], got " + std::to_string(size));
}

namespace {

int radius_for_length(Sidedness s, std::size_t len)
{
    require(len >= 1, ErrorCode::InvalidArgument, "configuration needs at least one symbol");
    if (s == Sidedness::OneSided) {
        return static_cast<int>(len) - 1;
    }
    require(len % 2 == 1, ErrorCode::InvalidArgument,
            "two-sided configuration needs an odd number of symbols");
    return static_cast<int>(len / 2);
}

// Storage offset of index 0 in a word laid out on W_radius.
int origin_offset(Sidedness s, int radius)
{
    return s == Sidedness::OneSided ? 0 : radius;
}

} // namespace

Configuration::Configuration(Alphabet alphabet, Sidedness sidedness, Word symbols)
    : alphabet_(alphabet)
    , sidedness_(sidedness)
    , radius_(radius_for_length(sidedness, symbols.size()))
    , symbols_(std::move(symbols))
{
    for (Symbol s : symbols_) {
        require(alphabet_.contains(s), ErrorCode::InvalidArgument,
                "symbol " + std::to_string(s) + " outside alphabet of size "
                    + std::to_string(alphabet_.size()));
    }
}

Configuration Configuration::parse(Alphabet alphabet, Sidedness sidedness, std::string_view text)
{
    return Configuration(alphabet, sidedness, parse_word(text, alphabet));
}

Symbol Configuration::at(int index) const
{
    require(index >= window_low(sidedness_, radius_) && index <= radius_,
            ErrorCode::InsufficientRadius,
            "index " + std::to_string(index) + " outside valid radius " + std::to_string(radius_));
    return symbols_[static_cast<std::size_t>(index + origin_offset(sidedness_, radius_))];
}

Cylinder::Cylinder(Alphabet a, Sidedness s, int n, Word w)
    : alphabet(a), sidedness(s), radius(n), word(std::move(w))
{
    require(n >= 0, ErrorCode::InvalidArgument, "cylinder radius must be >= 0");
    require(word.size() == window_size(s, n), ErrorCode::InvalidArgument,
            "cylinder word length does not match its window");
    for (Symbol sym : word) {
        require(a.contains(sym), ErrorCode::InvalidArgument, "cylinder symbol outside alphabet");
    }
}

bool Cylinder::contains(const Configuration& z) const
{
    require(z.alphabet() == alphabet && z.sidedness() == sidedness,
            ErrorCode::IncompatibleConfigurations, "cylinder and configuration differ in type");
    return restrict(z, radius) == word;
}

bool Cylinder::is_subset_of(const Cylinder& other) const
{
    if (other.radius > radius) {
        return false;
    }
    return restrict(center(), other.radius) == other.word;
}

bool Cylinder::is_disjoint_from(const Cylinder& other) const
{
    return !is_subset_of(other) && !other.is_subset_of(*this);
}

Configuration Cylinder::center() const
{
    return Configuration(alphabet, sidedness, word);
}

CantorDistance CantorDistance::inverse(int m)
{
    require(m >= 1, ErrorCode::InvalidArgument, "1/m distance needs m >= 1");
    return CantorDistance(Kind::Inverse, m);
}

int CantorDistance::agreement_radius() const
{
    switch (kind_) {
    case Kind::Two: return -1;
    case Kind::OriginOnly: return 0;
    case Kind::Inverse: return m_;
    case Kind::Zero: break;
    }
    fail(ErrorCode::InvalidArgument, "zero distance has no finite agreement radius");
}

double CantorDistance::value() const noexcept
{
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Inverse: return 1.0 / m_;
    case Kind::OriginOnly: return 1.5;
    case Kind::Two: return 2.0;
    }
    return 0.0;
}

std::strong_ordering CantorDistance::operator<=>(const CantorDistance& other) const noexcept
{
    if (kind_ != other.kind_) {
        return kind_ <=> other.kind_;
    }
    // Larger agreement radius means smaller distance.
    return kind_ == Kind::Inverse ? other.m_ <=> m_ : std::strong_ordering::equal;
}

CantorDistance cantor_distance(const Configuration& x, const Configuration& y)
{
    require(x.alphabet() == y.alphabet() && x.sidedness() == y.sidedness(),
            ErrorCode::IncompatibleConfigurations, "alphabet or sidedness mismatch");
    const int common = std::min(x.radius(), y.radius());
    for (int n = 0; n <= common; ++n) {
        bool agree = x.at(n) == y.at(n);
        if (agree && x.sidedness() == Sidedness::TwoSided) {
            agree = x.at(-n) == y.at(-n);
        }
        if (!agree) {
            if (n == 0) {
                return CantorDistance::origin_mismatch();
            }
            return n == 1 ? CantorDistance::origin_only() : CantorDistance::inverse(n - 1);
        }
    }
    if (x.radius() == y.radius()) {
        return CantorDistance::zero();
    }
    fail(ErrorCode::InsufficientRadius,
         "configurations agree on their common radius " + std::to_string(common)
             + "; no disagreement witnessed");
}

int separation_radius(double eps)
{
    if (eps <= 0.0) {
        return -2;
    }
    if (eps > 2.0) {
        return -1;
    }
    if (eps > 1.5) {
        return 0;
    }
    if (eps > 1.0) {
        return 1;
    }
    // smallest k >= 1 with 1/k < eps
    int k = static_cast<int>(std::floor(1.0 / eps)) + 1;
    while (k > 1 && 1.0 / (k - 1) < eps) {
        --k;
    }
    while (1.0 / k >= eps) {
        ++k;
    }
    return k;
}

bool separated(const Configuration& x, const Configuration& y, double eps)
{
    require(x.alphabet() == y.alphabet() && x.sidedness() == y.sidedness(),
            ErrorCode::IncompatibleConfigurations, "alphabet or sidedness mismatch");
    const int k = separation_radius(eps);
    if (k == -2) {
        return true;
    }
    if (k == -1) {
        return false;
    }
    return restrict(x, k) != restrict(y, k);
}

Word restrict(const Configuration& x, int n)
{
    require(n >= 0, ErrorCode::InvalidArgument, "window radius must be >= 0");
    require(n <= x.radius(), ErrorCode::InsufficientRadius,
            "window radius " + std::to_string(n) + " exceeds valid radius "
                + std::to_string(x.radius()));
    const auto first = static_cast<std::ptrdiff_t>(origin_offset(x.sidedness(), x.radius())
                                                   + window_low(x.sidedness(), n));
    const auto len = static_cast<std::ptrdiff_t>(window_size(x.sidedness(), n));
    return Word(x.symbols().begin() + first, x.symbols().begin() + first + len);
}

Configuration truncate(const Configuration& x, int n)
{
    return Configuration(x.alphabet(), x.sidedness(), restrict(x, n));
}

Cylinder ball_cylinder(const Configuration& x, int n)
{
    require(n >= 1, ErrorCode::InvalidArgument, "ball radius must be >= 1");
    return Cylinder(x.alphabet(), x.sidedness(), n, restrict(x, n));
}

std::string format_word(std::span<const Symbol> word, Alphabet alphabet)
{
    std::string out;
    if (alphabet.size() <= 10) {
        out.reserve(word.size());
        for (Symbol s : word) {
            out.push_back(static_cast<char>('0' + s));
        }
        return out;
    }
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += std::to_string(word[i]);
    }
    return out;
}

Word parse_word(std::string_view text, Alphabet alphabet)
{
    Word w;
    if (alphabet.size() <= 10) {
        w.reserve(text.size());
        for (char c : text) {
            const int v = c - '0';
            require(c >= '0' && c <= '9' && alphabet.contains(v), ErrorCode::InvalidArgument,
                    std::string("bad symbol '") + c + "' in word");
            w.push_back(static_cast<Symbol>(v));
        }
        return w;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        int v = -1;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, v);
        require(ec == std::errc() && ptr == text.data() + comma && alphabet.contains(v),
                ErrorCode::InvalidArgument, "bad symbol in comma-separated word");
        w.push_back(static_cast<Symbol>(v));
        pos = comma + 1;
    }
    return w;
}

CirclePoint::CirclePoint(double angle) : angle_(angle - std::floor(angle))
{
    require(std::isfinite(angle), ErrorCode::InvalidArgument, "circle angle must be finite");
    if (angle_ >= 1.0) {
        angle_ = 0.0;
    }
}

double circle_distance(CirclePoint a, CirclePoint b)
{
    const double diff = std::abs(a.angle() - b.angle());
    return std::min(diff, 1.0 - diff);
}

std::uint64_t count_words(const std::vector<int>& bounds,
                          const std::vector<std::size_t>& positions, std::uint64_t cap)
{
    std::uint64_t total = 1;
    for (std::size_t pos : positions) {
        total *= static_cast<std::uint64_t>(bounds[pos]);
        if (total > cap) {
            return cap + 1;
        }
    }
    return total;
}

std::vector<std::size_t> positions_outside(Sidedness s, int radius, int inner)
{
    std::vector<std::size_t> out;
    const std::size_t len = window_size(s, radius);
    if (inner < 0) {
        for (std::size_t i = 0; i < len; ++i) {
            out.push_back(i);
        }
        return out;
    }
    if (inner >= radius) {
        return out;
    }
    if (s == Sidedness::OneSided) {
        for (int i = inner + 1; i <= radius; ++i) {
            out.push_back(static_cast<std::size_t>(i));
        }
        return out;
    }
    for (int i = 0; i < radius - inner; ++i) {
        out.push_back(static_cast<std::size_t>(i));
    }
    for (int i = radius + inner + 1; i <= 2 * radius; ++i) {
        out.push_back(static_cast<std::size_t>(i));
    }
    return out;
}

} // namespace equidyn
