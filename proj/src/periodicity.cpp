#include "equidyn/periodicity.hpp"

#include <algorithm>
#include <cmath>

#include "equidyn/sampling.hpp"

namespace equidyn {

namespace {

constexpr std::uint64_t kStreamLepPoints = 0x400;
constexpr std::uint64_t kStreamEquicontinuity = 0x500;

// Smallest q with trace[i] == trace[i + p] for all q <= i <= len-1-p.
int minimal_preperiod(std::span<const Word> trace, int p)
{
    const int last = static_cast<int>(trace.size()) - 1;
    for (int i = last - p; i >= 0; --i) {
        if (trace[static_cast<std::size_t>(i)] != trace[static_cast<std::size_t>(i + p)]) {
            return i + 1;
        }
    }
    return 0;
}

// Evidence after the preperiod: two full periods and at least half the trace.
int required_evidence(int last, int p)
{
    return std::max(2 * p, (last + 1) / 2);
}

std::uint64_t quota(double eps, std::uint64_t samples)
{
    return static_cast<std::uint64_t>(std::ceil((1.0 - eps) * static_cast<double>(samples) - 1e-9));
}

} // namespace

bool certificate_holds(std::span<const Word> trace, int period, int preperiod)
{
    const int last = static_cast<int>(trace.size()) - 1;
    if (period < 1 || preperiod < 0 || last - preperiod < required_evidence(last, period)) {
        return false;
    }
    for (int i = preperiod; i + period <= last; ++i) {
        if (trace[static_cast<std::size_t>(i)] != trace[static_cast<std::size_t>(i + period)]) {
            return false;
        }
    }
    return true;
}

std::optional<PeriodCertificate> detect_eventual_period(std::span<const Word> trace)
{
    require(!trace.empty(), ErrorCode::InvalidArgument, "trace must be nonempty");
    const int last = static_cast<int>(trace.size()) - 1;
    for (int p = 1; 2 * p <= last; ++p) {
        const int q = minimal_preperiod(trace, p);
        if (last - q >= required_evidence(last, p)) {
            return PeriodCertificate{0, last, p, q};
        }
    }
    return std::nullopt;
}

std::optional<PeriodCertificate> lep_certificate(const System& sys, const Configuration& x, int m,
                                                 int T)
{
    const std::vector<Word> trace = column_trace(sys, x, m, T);
    auto cert = detect_eventual_period(trace);
    if (cert) {
        cert->m = m;
    }
    return cert;
}

LepStatistics lep_statistics(const System& sys, const Measure& mu, int m, double eps,
                             std::uint64_t samples, int T, std::uint64_t seed)
{
    require(eps > 0.0 && eps < 1.0, ErrorCode::InvalidArgument, "eps must be in (0, 1)");
    require(samples >= 1, ErrorCode::InvalidArgument, "need at least one sample");
    require(is_symbolic(sys), ErrorCode::UnsupportedSystem, "rotation has no column trace");
    const Sidedness s = system_sidedness(sys);
    const int radius = dependence_radius(sys, m, T);

    std::vector<std::optional<PeriodCertificate>> certs(samples);
    parallel_for(samples, [&](std::size_t i) {
        const Configuration x =
            sample_config(mu, s, radius, derive_seed(seed, kStreamLepPoints + static_cast<std::uint64_t>(m), i));
        certs[i] = lep_certificate(sys, x, m, T);
    });

    LepStatistics stats;
    stats.m = m;
    stats.eps = eps;
    stats.T = T;
    stats.samples = samples;
    stats.seed = seed;

    std::vector<int> periods;
    std::uint64_t lp = 0;
    for (const auto& c : certs) {
        if (c) {
            periods.push_back(c->period);
            lp += c->preperiod == 0 ? 1 : 0;
        }
    }
    stats.fraction = static_cast<double>(periods.size()) / static_cast<double>(samples);
    stats.lp_fraction = static_cast<double>(lp) / static_cast<double>(samples);

    const std::uint64_t k = quota(eps, samples);
    if (k == 0 || periods.size() < k) {
        return stats;
    }
    std::sort(periods.begin(), periods.end());
    const int p_bound = periods[k - 1];
    std::vector<int> preperiods;
    for (const auto& c : certs) {
        if (c && c->period <= p_bound) {
            preperiods.push_back(c->preperiod);
        }
    }
    std::sort(preperiods.begin(), preperiods.end());
    stats.period_bound = p_bound;
    stats.preperiod_bound = preperiods[k - 1];
    return stats;
}

std::string_view to_string(LepVerdict v)
{
    switch (v) {
    case LepVerdict::MuLP: return "mu-LP";
    case LepVerdict::MuLEP: return "mu-LEP";
    case LepVerdict::Neither: return "neither";
    }
    return "neither";
}

LepClassification mu_lep_classify(const System& sys, const Measure& mu,
                                  const std::vector<int>& m_list, double eps,
                                  std::uint64_t samples, int T, std::uint64_t seed,
                                  std::optional<EquicontinuityParams> equi)
{
    require(!m_list.empty(), ErrorCode::InvalidArgument, "m_list must not be empty");
    LepClassification out;
    bool all_lp = true;
    bool all_lep = true;
    for (int m : m_list) {
        out.per_m.push_back(lep_statistics(sys, mu, m, eps, samples, T, seed));
        const LepStatistics& st = out.per_m.back();
        all_lp = all_lp && st.lp_fraction >= 1.0 - eps;
        all_lep = all_lep && st.fraction >= 1.0 - eps;
    }
    out.verdict = all_lp ? LepVerdict::MuLP : all_lep ? LepVerdict::MuLEP : LepVerdict::Neither;

    if (out.verdict != LepVerdict::Neither) {
        EquicontinuityParams p;
        if (equi) {
            p = *equi;
        } else {
            p.m = *std::max_element(m_list.begin(), m_list.end());
            p.n_list = {std::max(p.m, 1), std::max(p.m, 1) + 1, std::max(p.m, 1) + 2};
            p.T = T;
            p.points = std::min<std::uint64_t>(samples, 100);
            p.samples = samples;
            p.delta = eps;
            p.seed = derive_seed(seed, kStreamEquicontinuity, 0);
        }
        out.equicontinuity = mu_equicontinuity_report(sys, mu, p);
    }
    return out;
}

} // namespace equidyn
