#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "equidyn/core.hpp"
#include "equidyn/measures.hpp"
#include "equidyn/orbit.hpp"
#include "equidyn/systems.hpp"

namespace equidyn {

using Complex = std::complex<double>;

/// exp(2 pi i j / p), with j reduced mod p before evaluation.
Complex root_of_unity(std::uint64_t p, std::int64_t j);

/// f_{m,y,k} = sum_{j<p} lambda^{jk} 1_{B^o_{m,T}(T^j y)} with lambda = e^{2 pi i/p},
/// p the certified minimal period of y's resolution-m trace.
///
/// Construction certifies y (preperiod 0 required) and checks that the p orbit
/// balls are pairwise disjoint at horizon T. At a finite horizon two orbit
/// balls are either equal or disjoint, so this amounts to the p column traces
/// of T^j y being distinct.
class Eigenfunction {
public:
    Eigenfunction(System sys, Configuration y, int m, int k, int T);

    const System& system() const noexcept { return sys_; }
    const Configuration& base() const noexcept { return y_; }
    int m() const noexcept { return m_; }
    int k() const noexcept { return k_; }
    int T() const noexcept { return T_; }
    int period() const noexcept { return period_; }
    /// lambda^k.
    Complex eigenvalue() const { return root_of_unity(static_cast<std::uint64_t>(period_), k_); }

    /// Radius of x needed to evaluate f(x).
    int dependence_radius() const;

    /// The j with x in B^o_{m,T}(T^j y), if any.
    std::optional<int> ball_index(const Configuration& x) const;

    /// 1_{B^o_{m,T}(T^j y)}(x).
    bool in_ball(const Configuration& x, int j) const;

    Complex operator()(const Configuration& x) const;

private:
    System sys_;
    Configuration y_;
    int m_;
    int k_;
    int T_;
    int period_;
    std::vector<std::vector<Word>> ball_traces_;
};

Complex eigenfunction_eval(const Eigenfunction& f, const Configuration& x);

struct EvaluationMode {
    enum class Kind { Exact, Sampled };

    Kind kind = Kind::Exact;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;

    static EvaluationMode exact(std::uint64_t cap = kDefaultEnumerationCap)
    {
        return EvaluationMode{Kind::Exact, 0, 0, cap};
    }
    static EvaluationMode sampled(std::uint64_t samples, std::uint64_t seed)
    {
        return EvaluationMode{Kind::Sampled, samples, seed, kDefaultEnumerationCap};
    }
};

/// || f o T - lambda^k f ||_{L^2(mu)}.
double koopman_residual(const Eigenfunction& f, const Measure& mu, const EvaluationMode& mode);

/// <a, b> = integral of a * conj(b) d mu.
Complex inner_product(const Eigenfunction& a, const Eigenfunction& b, const Measure& mu,
                      const EvaluationMode& mode);

double l2_norm(const Eigenfunction& f, const Measure& mu, const EvaluationMode& mode);

} // namespace equidyn
