#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "equidyn/core.hpp"
#include "equidyn/measures.hpp"
#include "equidyn/orbit.hpp"
#include "equidyn/systems.hpp"

namespace equidyn {

enum class PeriodKind { LP, LEP };

/// Witness that a column trace is (eventually) periodic up to its horizon:
/// trace[i] == trace[i + period] for preperiod <= i <= T - period. The stretch
/// after the preperiod must hold two full periods and half the horizon.
struct PeriodCertificate {
    int m = 0;
    int T = 0;
    int period = 1;
    int preperiod = 0;

    PeriodKind kind() const noexcept { return preperiod == 0 ? PeriodKind::LP : PeriodKind::LEP; }

    friend bool operator==(const PeriodCertificate&, const PeriodCertificate&) = default;
};

/// trace[i] == trace[i + p] for q <= i <= len-1-p, and
/// len-1-q >= max(2p, ceil((len-1)/2)).
bool certificate_holds(std::span<const Word> trace, int period, int preperiod);

/// Smallest period, then smallest preperiod for it. m is left at 0 and T is
/// set to len-1.
std::optional<PeriodCertificate> detect_eventual_period(std::span<const Word> trace);

std::optional<PeriodCertificate> lep_certificate(const System& sys, const Configuration& x, int m,
                                                 int T);

struct LepStatistics {
    int m = 0;
    double eps = 0.0;
    int T = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    /// Quantile bounds at level 1 - eps over certified samples; empty when
    /// fewer than (1 - eps) N samples were certified.
    std::optional<int> period_bound;
    std::optional<int> preperiod_bound;
    /// Share of samples with any certificate.
    double fraction = 0.0;
    /// Share of samples certified with preperiod 0.
    double lp_fraction = 0.0;
};

LepStatistics lep_statistics(const System& sys, const Measure& mu, int m, double eps,
                             std::uint64_t samples, int T, std::uint64_t seed);

enum class LepVerdict { MuLP, MuLEP, Neither };

std::string_view to_string(LepVerdict v);

struct LepClassification {
    std::vector<LepStatistics> per_m;
    LepVerdict verdict = LepVerdict::Neither;
    /// Attached whenever the verdict is mu-LP or mu-LEP.
    std::optional<EquicontinuityReport> equicontinuity;
};

/// mu-LP when every m certifies a (1 - eps) share with preperiod 0, mu-LEP when
/// every m certifies a (1 - eps) share allowing preperiods, otherwise neither.
/// `equi` defaults to m = max(m_list), n_list = {m, m+1, m+2}, the same T,
/// seed and delta = eps.
LepClassification mu_lep_classify(const System& sys, const Measure& mu,
                                  const std::vector<int>& m_list, double eps,
                                  std::uint64_t samples, int T, std::uint64_t seed,
                                  std::optional<EquicontinuityParams> equi = std::nullopt);

} // namespace equidyn
