#include "equidyn/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "equidyn/orbit.hpp"
#include "equidyn/periodicity.hpp"
#include "equidyn/sensitivity.hpp"
#include "equidyn/spectral.hpp"

namespace equidyn {

namespace {

constexpr std::uint64_t kDefaultSamples = 10000;
constexpr double kDefaultDelta = 0.05;

[[noreturn]] void invalid(const std::string& name, const std::string& why)
{
    fail(ErrorCode::ConfigInvalid, "field \"" + name + "\": " + why);
}

/// Reads fields from the raw config and records the resolved value of each.
class Resolver {
public:
    Resolver(const Json& raw, Json& out) : raw_(raw), out_(out) {}

    bool has(const char* name) const { return raw_.contains(name); }

    int integer(const char* name, std::optional<int> fallback, int min_value)
    {
        int v = 0;
        if (raw_.contains(name)) {
            const Json& j = raw_.at(name);
            if (!j.is_number_integer()) {
                invalid(name, "must be an integer");
            }
            v = j.get<int>();
        } else if (fallback) {
            v = *fallback;
        } else {
            invalid(name, "is required");
        }
        if (v < min_value) {
            invalid(name, "must be >= " + std::to_string(min_value));
        }
        out_[name] = v;
        return v;
    }

    std::uint64_t count(const char* name, std::uint64_t fallback)
    {
        std::uint64_t v = fallback;
        if (raw_.contains(name)) {
            const Json& j = raw_.at(name);
            if (!j.is_number_integer() || j.get<std::int64_t>() < 1) {
                invalid(name, "must be a positive integer");
            }
            v = j.get<std::uint64_t>();
        }
        out_[name] = v;
        return v;
    }

    double real(const char* name, std::optional<double> fallback, double lo, double hi)
    {
        double v = 0.0;
        if (raw_.contains(name)) {
            const Json& j = raw_.at(name);
            if (!j.is_number()) {
                invalid(name, "must be a number");
            }
            v = j.get<double>();
        } else if (fallback) {
            v = *fallback;
        } else {
            invalid(name, "is required");
        }
        if (!(v > lo && v < hi)) {
            invalid(name, "must lie in the open interval (" + std::to_string(lo) + ", "
                              + std::to_string(hi) + ")");
        }
        out_[name] = v;
        return v;
    }

    std::vector<int> int_list(const char* name, std::optional<std::vector<int>> fallback,
                              int min_value)
    {
        std::vector<int> v;
        if (raw_.contains(name)) {
            const Json& j = raw_.at(name);
            if (!j.is_array() || j.empty()) {
                invalid(name, "must be a nonempty array of integers");
            }
            for (const Json& e : j) {
                if (!e.is_number_integer()) {
                    invalid(name, "must contain only integers");
                }
                v.push_back(e.get<int>());
            }
        } else if (fallback) {
            v = *fallback;
        } else {
            invalid(name, "is required");
        }
        for (int e : v) {
            if (e < min_value) {
                invalid(name, "entries must be >= " + std::to_string(min_value));
            }
        }
        out_[name] = v;
        return v;
    }

    std::vector<double> real_list(const char* name)
    {
        if (!raw_.contains(name)) {
            invalid(name, "is required");
        }
        const Json& j = raw_.at(name);
        if (!j.is_array() || j.empty()) {
            invalid(name, "must be a nonempty array of numbers");
        }
        std::vector<double> v;
        for (const Json& e : j) {
            if (!e.is_number() || e.get<double>() <= 0.0) {
                invalid(name, "entries must be positive numbers");
            }
            v.push_back(e.get<double>());
        }
        out_[name] = v;
        return v;
    }

    std::uint64_t seed()
    {
        std::uint64_t v = 0;
        if (raw_.contains("seed")) {
            const Json& j = raw_.at("seed");
            if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
                invalid("seed", "must be a nonnegative integer");
            }
            v = j.get<std::uint64_t>();
        }
        out_["seed"] = v;
        return v;
    }

private:
    const Json& raw_;
    Json& out_;
};

System resolve_system(const Json& raw, Json& out)
{
    if (!raw.contains("system")) {
        invalid("system", "is required");
    }
    System sys = parse_system(raw.at("system"));
    out["system"] = system_to_json(sys);
    return sys;
}

Measure resolve_measure(const Json& raw, Json& out)
{
    if (!raw.contains("measure")) {
        invalid("measure", "is required");
    }
    Measure mu = parse_measure(raw.at("measure"));
    out["measure"] = measure_to_json(mu);
    return mu;
}

void check_pairing(const System& sys, const Measure& mu)
{
    const bool rotation = std::holds_alternative<Rotation>(sys);
    const bool lebesgue = std::holds_alternative<CircleLebesgue>(mu);
    if (rotation != lebesgue) {
        invalid("measure", "rotations pair with {\"type\":\"lebesgue\"} and only with it");
    }
    if (!rotation && system_alphabet(sys) != measure_alphabet(mu)) {
        invalid("measure", "alphabet size differs from the system's");
    }
    if (!rotation && std::holds_alternative<ProductMeasure>(mu)
        && system_sidedness(sys) != Sidedness::OneSided) {
        invalid("measure", "Haar measure needs a one-sided system");
    }
}

void require_symbolic(const System& sys, const char* kind)
{
    if (!is_symbolic(sys)) {
        invalid("system", std::string(kind) + " experiments need a symbolic system");
    }
}

Configuration parse_point(const System& sys, const Json& raw, const char* name)
{
    const Json& j = raw.at(name);
    if (!j.is_string()) {
        invalid(name, "must be a word string");
    }
    try {
        return Configuration::parse(system_alphabet(sys), system_sidedness(sys),
                                    j.get<std::string>());
    } catch (const Error& e) {
        invalid(name, e.what());
    }
}

Json equicontinuity_json(const EquicontinuityReport& r)
{
    Json params = {{"m", r.params.m},           {"n_list", r.params.n_list},
                   {"T", r.params.T},           {"points", r.params.points},
                   {"N", r.params.samples},     {"delta", r.params.delta},
                   {"seed", r.params.seed},     {"enumeration_cap", r.params.enumeration_cap}};
    Json points = Json::array();
    for (const PointCurve& pc : r.points) {
        Json ratios = Json::array();
        for (double v : pc.ratios) {
            ratios.push_back(round12(v));
        }
        points.push_back({{"base", pc.base}, {"ratios", ratios}, {"exact", pc.exact}});
    }
    return {{"params", params}, {"points", points}, {"fraction", round12(r.fraction)}};
}

std::string equicontinuity_csv(const EquicontinuityReport& r)
{
    std::ostringstream csv;
    csv << "point,n,ratio,exact\n";
    char buf[64];
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        for (std::size_t j = 0; j < r.params.n_list.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", r.points[i].ratios[j]);
            csv << i << ',' << r.params.n_list[j] << ',' << buf << ','
                << (r.points[i].exact ? "true" : "false") << '\n';
        }
    }
    return csv.str();
}

Json sensitivity_json(const SensitivityEstimate& s)
{
    return {{"eps", s.eps},     {"T", s.T},         {"p", round12(s.estimate)},
            {"stderr", round12(s.std_error)}, {"N", s.samples}, {"seed", s.seed}};
}

std::string sensitivity_csv(const std::vector<SensitivityEstimate>& rows)
{
    std::ostringstream csv;
    csv << "eps,T,p,stderr,N\n";
    char buf[128];
    for (const auto& s : rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%d,%.12g,%.12g,%llu\n", s.eps, s.T, s.estimate,
                      s.std_error, static_cast<unsigned long long>(s.samples));
        csv << buf;
    }
    return csv.str();
}

Json optional_int(const std::optional<int>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json lep_json(const LepStatistics& s)
{
    return {{"m", s.m},
            {"eps", s.eps},
            {"T", s.T},
            {"N", s.samples},
            {"seed", s.seed},
            {"p_bound", optional_int(s.period_bound)},
            {"q_bound", optional_int(s.preperiod_bound)},
            {"fraction", round12(s.fraction)},
            {"lp_fraction", round12(s.lp_fraction)}};
}

std::string lep_csv(const std::vector<LepStatistics>& rows)
{
    std::ostringstream csv;
    csv << "m,eps,T,N,fraction,lp_fraction,p_bound,q_bound\n";
    char buf[160];
    for (const auto& s : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%d,%llu,%.12g,%.12g,", s.m, s.eps, s.T,
                      static_cast<unsigned long long>(s.samples), s.fraction, s.lp_fraction);
        csv << buf << (s.period_bound ? std::to_string(*s.period_bound) : "") << ','
            << (s.preperiod_bound ? std::to_string(*s.preperiod_bound) : "") << '\n';
    }
    return csv.str();
}

Json certificate_json(const std::optional<PeriodCertificate>& c)
{
    if (!c) {
        return nullptr;
    }
    return {{"m", c->m}, {"T", c->T}, {"p", c->period}, {"q", c->preperiod}};
}

EquicontinuityParams resolve_equicontinuity(Resolver& r, int T_default, std::uint64_t seed,
                                            std::uint64_t samples)
{
    EquicontinuityParams p;
    p.m = r.integer("m", 1, 0);
    p.n_list = r.int_list("n_list", std::nullopt, 1);
    p.T = r.integer("T", T_default, 0);
    p.points = r.count("points", 100);
    p.samples = r.count("N", samples);
    p.delta = r.real("delta", kDefaultDelta, 0.0, 1.0);
    p.enumeration_cap = r.count("enumeration_cap", kDefaultEnumerationCap);
    p.seed = seed;
    return p;
}

// ---------------------------------------------------------------------------

void resolve_density(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    check_pairing(sys, mu);
    Resolver r(raw, out);
    r.seed();
    const int m = r.integer("m", std::nullopt, is_symbolic(sys) ? 0 : 1);
    r.int_list("n_list", std::nullopt, 1);
    const int T = r.integer("T", std::nullopt, 0);
    r.count("points", 100);
    r.count("N", kDefaultSamples);
    r.real("delta", kDefaultDelta, 0.0, 1.0);
    r.count("enumeration_cap", kDefaultEnumerationCap);
    if (r.has("x")) {
        if (is_symbolic(sys)) {
            const Configuration x = parse_point(sys, raw, "x");
            if (x.radius() < dependence_radius(sys, m, T)) {
                invalid("x", "needs valid radius " + std::to_string(dependence_radius(sys, m, T)));
            }
            out["x"] = raw.at("x");
        } else {
            if (!raw.at("x").is_number()) {
                invalid("x", "must be an angle for a rotation");
            }
            out["x"] = raw.at("x");
        }
    }
}

ExperimentOutput run_density(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    EquicontinuityParams p;
    p.m = cfg.at("m");
    p.n_list = cfg.at("n_list").get<std::vector<int>>();
    p.T = cfg.at("T");
    p.points = cfg.at("points");
    p.samples = cfg.at("N");
    p.delta = cfg.at("delta");
    p.seed = cfg.at("seed");
    p.enumeration_cap = cfg.at("enumeration_cap");
    const EquicontinuityReport eq = mu_equicontinuity_report(sys, mu, p);
    report = equicontinuity_json(eq);

    if (cfg.contains("x")) {
        Json rows = Json::array();
        for (std::size_t j = 0; j < p.n_list.size(); ++j) {
            const int n = p.n_list[j];
            const std::uint64_t seed = derive_seed(p.seed, 0x900 + j, 0);
            Json row = {{"n", n}};
            if (const auto* rot = std::get_if<Rotation>(&sys)) {
                const CirclePoint x(cfg.at("x").get<double>());
                const RatioEstimate est = density_ratio_estimate(*rot, x, p.m, n, p.T, p.samples, seed);
                row["exact"] = round12(density_ratio_exact(*rot, x, p.m, n, p.T));
                row["estimate"] = round12(est.estimate);
                row["stderr"] = round12(est.std_error);
            } else {
                const Configuration x = parse_point(sys, cfg, "x");
                const RatioEstimate est =
                    density_ratio_estimate(sys, mu, x, p.m, n, p.T, p.samples, seed);
                row["exact"] = exact_enumeration_size(sys, mu, p.m, n, p.T, p.enumeration_cap)
                                       <= p.enumeration_cap
                                   ? Json(round12(density_ratio_exact(sys, mu, x, p.m, n, p.T,
                                                                      p.enumeration_cap)))
                                   : Json(nullptr);
                row["estimate"] = round12(est.estimate);
                row["stderr"] = round12(est.std_error);
            }
            rows.push_back(row);
        }
        report["point"] = {{"x", cfg.at("x")}, {"ratios", rows}};
    }
    return {{}, equicontinuity_csv(eq)};
}

void resolve_classify(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    require_symbolic(sys, "classify");
    check_pairing(sys, mu);
    Resolver r(raw, out);
    const std::uint64_t seed = r.seed();
    const std::vector<int> m_list = r.int_list("m_list", std::nullopt, 0);
    const double eps = r.real("eps", std::nullopt, 0.0, 1.0);
    const int T = r.integer("T", std::nullopt, 0);
    const std::uint64_t samples = r.count("N", kDefaultSamples);
    const int m_max = *std::max_element(m_list.begin(), m_list.end());
    const int n0 = std::max(m_max, 1);
    Json equi_raw = raw.contains("equicontinuity") ? raw.at("equicontinuity") : Json::object();
    if (!equi_raw.is_object()) {
        invalid("equicontinuity", "must be an object");
    }
    if (!equi_raw.contains("m")) {
        equi_raw["m"] = m_max;
    }
    if (!equi_raw.contains("n_list")) {
        equi_raw["n_list"] = {n0, n0 + 1, n0 + 2};
    }
    if (!equi_raw.contains("points")) {
        equi_raw["points"] = std::min<std::uint64_t>(samples, 100);
    }
    if (!equi_raw.contains("delta")) {
        equi_raw["delta"] = eps;
    }
    Json equi_out;
    Resolver er(equi_raw, equi_out);
    resolve_equicontinuity(er, T, seed, samples);
    out["equicontinuity"] = equi_out;
}

ExperimentOutput run_classify(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    const Json& e = cfg.at("equicontinuity");
    EquicontinuityParams p;
    p.m = e.at("m");
    p.n_list = e.at("n_list").get<std::vector<int>>();
    p.T = e.at("T");
    p.points = e.at("points");
    p.samples = e.at("N");
    p.delta = e.at("delta");
    p.enumeration_cap = e.at("enumeration_cap");
    p.seed = derive_seed(cfg.at("seed"), 0xa00, 0);
    const LepClassification c =
        mu_lep_classify(sys, mu, cfg.at("m_list").get<std::vector<int>>(), cfg.at("eps"),
                        cfg.at("N"), cfg.at("T"), cfg.at("seed"), p);
    Json per_m = Json::array();
    for (const auto& s : c.per_m) {
        per_m.push_back(lep_json(s));
    }
    report["statistics"] = per_m;
    report["verdict"] = std::string(to_string(c.verdict));
    report["equicontinuity"] =
        c.equicontinuity ? equicontinuity_json(*c.equicontinuity) : Json(nullptr);
    return {{}, lep_csv(c.per_m)};
}

void resolve_lep(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    require_symbolic(sys, "lep");
    check_pairing(sys, mu);
    Resolver r(raw, out);
    r.seed();
    const int m = r.integer("m", std::nullopt, 0);
    r.real("eps", std::nullopt, 0.0, 1.0);
    const int T = r.integer("T", std::nullopt, 0);
    r.count("N", kDefaultSamples);
    if (r.has("x")) {
        const Configuration x = parse_point(sys, raw, "x");
        if (x.radius() < dependence_radius(sys, m, T)) {
            invalid("x", "needs valid radius " + std::to_string(dependence_radius(sys, m, T)));
        }
        out["x"] = raw.at("x");
    }
}

ExperimentOutput run_lep(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    const int m = cfg.at("m");
    const int T = cfg.at("T");
    const LepStatistics s =
        lep_statistics(sys, mu, m, cfg.at("eps"), cfg.at("N"), T, cfg.at("seed"));
    report["statistics"] = lep_json(s);
    if (cfg.contains("x")) {
        report["certificate"] = certificate_json(lep_certificate(sys, parse_point(sys, cfg, "x"), m, T));
    }
    return {{}, lep_csv({s})};
}

void resolve_spectral(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    require_symbolic(sys, "spectral");
    check_pairing(sys, mu);
    Resolver r(raw, out);
    r.seed();
    r.integer("m", std::nullopt, 0);
    r.integer("T", std::nullopt, 0);
    if (!r.has("y")) {
        invalid("y", "is required");
    }
    parse_point(sys, raw, "y");
    out["y"] = raw.at("y");
    if (r.has("k_list")) {
        r.int_list("k_list", std::nullopt, 0);
    }
    const std::string mode = raw.value("mode", std::string("exact"));
    if (mode != "exact" && mode != "sampled") {
        invalid("mode", "must be \"exact\" or \"sampled\"");
    }
    out["mode"] = mode;
    r.count("N", kDefaultSamples);
    r.count("enumeration_cap", kDefaultEnumerationCap);
}

ExperimentOutput run_spectral(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    const Configuration y = parse_point(sys, cfg, "y");
    const int m = cfg.at("m");
    const int T = cfg.at("T");
    EvaluationMode mode = cfg.at("mode") == "exact"
                              ? EvaluationMode::exact(cfg.at("enumeration_cap"))
                              : EvaluationMode::sampled(cfg.at("N"), cfg.at("seed"));

    const Eigenfunction probe(sys, y, m, 0, T);
    std::vector<int> ks;
    if (cfg.contains("k_list")) {
        ks = cfg.at("k_list").get<std::vector<int>>();
    } else {
        for (int k = 0; k < probe.period(); ++k) {
            ks.push_back(k);
        }
    }
    std::vector<Eigenfunction> fs;
    for (int k : ks) {
        fs.emplace_back(sys, y, m, k, T);
    }

    Json spectra = Json::array();
    std::ostringstream csv;
    csv << "p,k,residual,norm\n";
    char buf[128];
    for (const Eigenfunction& f : fs) {
        const double residual = koopman_residual(f, mu, mode);
        const double norm = l2_norm(f, mu, mode);
        const Complex lambda = f.eigenvalue();
        spectra.push_back({{"p", f.period()},
                           {"k", f.k()},
                           {"residual", round12(residual)},
                           {"norm", round12(norm)},
                           {"eigenvalue", {round12(lambda.real()), round12(lambda.imag())}}});
        std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g\n", f.period(), f.k(), residual, norm);
        csv << buf;
    }
    double max_offdiag = 0.0;
    for (std::size_t a = 0; a < fs.size(); ++a) {
        for (std::size_t b = a + 1; b < fs.size(); ++b) {
            max_offdiag = std::max(max_offdiag, std::abs(inner_product(fs[a], fs[b], mu, mode)));
        }
    }
    report["spectra"] = spectra;
    report["max_offdiagonal_inner_product"] = round12(max_offdiag);
    return {{}, csv.str()};
}

void resolve_sensitivity(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    check_pairing(sys, mu);
    Resolver r(raw, out);
    r.seed();
    r.real_list("eps_list");
    r.integer("T", std::nullopt, 0);
    r.count("N", kDefaultSamples);
}

ExperimentOutput run_sensitivity(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    const auto eps_list = cfg.at("eps_list").get<std::vector<double>>();
    std::vector<SensitivityEstimate> rows;
    Json items = Json::array();
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        rows.push_back(mu_sensitivity_estimate(sys, mu, eps_list[i], cfg.at("T"), cfg.at("N"),
                                               derive_seed(cfg.at("seed"), 0xb00, i)));
        items.push_back(sensitivity_json(rows.back()));
    }
    report["sensitivity"] = items;
    return {{}, sensitivity_csv(rows)};
}

void resolve_dichotomy(const Json& raw, Json& out)
{
    const System sys = resolve_system(raw, out);
    const Measure mu = resolve_measure(raw, out);
    check_pairing(sys, mu);
    Resolver r(raw, out);
    const std::uint64_t seed = r.seed();
    r.real_list("eps_list");
    const int T = r.integer("T", std::nullopt, 0);
    const std::uint64_t samples = r.count("N", kDefaultSamples);
    r.real("delta_s", kDefaultDelta, 0.0, 1.0);
    r.real("delta_e", kDefaultDelta, 0.0, 1.0);
    if (!raw.contains("equicontinuity") || !raw.at("equicontinuity").is_object()) {
        invalid("equicontinuity", "is required (object with at least n_list)");
    }
    Json equi_out;
    Resolver er(raw.at("equicontinuity"), equi_out);
    resolve_equicontinuity(er, T, seed, samples);
    out["equicontinuity"] = equi_out;
}

ExperimentOutput run_dichotomy(const Json& cfg, Json& report)
{
    const System sys = parse_system(cfg.at("system"));
    const Measure mu = parse_measure(cfg.at("measure"));
    const Json& e = cfg.at("equicontinuity");
    EquicontinuityParams p;
    p.m = e.at("m");
    p.n_list = e.at("n_list").get<std::vector<int>>();
    p.T = e.at("T");
    p.points = e.at("points");
    p.samples = e.at("N");
    p.delta = e.at("delta");
    p.enumeration_cap = e.at("enumeration_cap");
    p.seed = derive_seed(cfg.at("seed"), 0xc00, 0);
    DichotomyThresholds th{cfg.at("delta_s"), cfg.at("delta_e")};
    const DichotomyReport d =
        dichotomy_report(sys, mu, cfg.at("eps_list").get<std::vector<double>>(), cfg.at("T"),
                         cfg.at("N"), p, cfg.at("seed"), th);
    Json items = Json::array();
    for (const auto& s : d.sensitivity) {
        items.push_back(sensitivity_json(s));
    }
    report["sensitivity"] = items;
    report["equicontinuity"] = equicontinuity_json(d.equicontinuity);
    report["branches"] = {{"sensitive", d.sensitive_branch},
                          {"equicontinuous", d.equicontinuous_branch}};
    report["verdict"] = std::string(to_string(d.verdict));
    return {{}, sensitivity_csv(d.sensitivity)};
}

void resolve_vitali(const Json& raw, Json& out)
{
    const Measure mu = resolve_measure(raw, out);
    if (!is_cantor_measure(mu)) {
        invalid("measure", "Vitali covers are built on Cantor measures");
    }
    Resolver r(raw, out);
    r.integer("min_radius", std::nullopt, 1);
    const double eps = raw.value("eps", 0.0);
    if (!(eps >= 0.0)) {
        invalid("eps", "must be >= 0");
    }
    out["eps"] = eps;
    const Sidedness s = raw.contains("sided") ? parse_sidedness(raw.at("sided"), "sided")
                                              : Sidedness::OneSided;
    out["sided"] = std::string(to_string(s));
    if (std::holds_alternative<ProductMeasure>(mu) && s != Sidedness::OneSided) {
        invalid("sided", "Haar measure is one-sided");
    }
    if (!raw.contains("A") || !raw.at("A").is_array() || raw.at("A").empty()) {
        invalid("A", "must be a nonempty array of {\"n\":..,\"w\":..} cylinders");
    }
    const Alphabet alphabet = measure_alphabet(mu);
    for (const Json& c : raw.at("A")) {
        if (!c.is_object() || !c.contains("n") || !c.contains("w") || !c.at("n").is_number_integer()
            || !c.at("w").is_string()) {
            invalid("A", "each cylinder needs integer \"n\" and string \"w\"");
        }
        try {
            Cylinder(alphabet, s, c.at("n").get<int>(), parse_word(c.at("w").get<std::string>(), alphabet));
        } catch (const Error& e) {
            invalid("A", e.what());
        }
    }
    out["A"] = raw.at("A");
}

ExperimentOutput run_vitali(const Json& cfg, Json& report)
{
    const Measure mu = parse_measure(cfg.at("measure"));
    const Alphabet alphabet = measure_alphabet(mu);
    const Sidedness s = parse_sidedness(cfg.at("sided"), "sided");
    CylinderUnion a;
    for (const Json& c : cfg.at("A")) {
        a.emplace_back(alphabet, s, c.at("n").get<int>(), parse_word(c.at("w").get<std::string>(), alphabet));
    }
    const BallFamily fam = vitali_cover(mu, a, cfg.at("min_radius"), cfg.at("eps"));
    Json balls = Json::array();
    std::ostringstream csv;
    csv << "center,radius,mass\n";
    char buf[64];
    for (const Ball& b : fam.balls) {
        const double mass = cylinder_probability(mu, b.cylinder());
        const std::string centre = format_word(b.center.symbols(), alphabet);
        balls.push_back({{"center", centre}, {"radius", b.radius}, {"mass", round12(mass)}});
        std::snprintf(buf, sizeof buf, ",%d,%.12g\n", b.radius, mass);
        csv << centre << buf;
    }
    report["balls"] = balls;
    report["leftover"] = round12(fam.leftover);
    report["union_mass"] = round12(union_probability(mu, a));
    report["disjoint"] = pairwise_disjoint(fam.balls);
    return {{}, csv.str()};
}

} // namespace

std::optional<ExperimentKind> parse_kind(std::string_view name)
{
    for (auto k : {ExperimentKind::Density, ExperimentKind::Classify, ExperimentKind::Lep,
                   ExperimentKind::Spectral, ExperimentKind::Sensitivity, ExperimentKind::Dichotomy,
                   ExperimentKind::Vitali}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::Density: return "density";
    case ExperimentKind::Classify: return "classify";
    case ExperimentKind::Lep: return "lep";
    case ExperimentKind::Spectral: return "spectral";
    case ExperimentKind::Sensitivity: return "sensitivity";
    case ExperimentKind::Dichotomy: return "dichotomy";
    case ExperimentKind::Vitali: return "vitali";
    }
    return "unknown";
}

ExperimentConfig resolve_config(ExperimentKind kind, const Json& raw)
{
    if (!raw.is_object()) {
        invalid("<root>", "config must be a JSON object");
    }
    Json out = Json::object();
    switch (kind) {
    case ExperimentKind::Density: resolve_density(raw, out); break;
    case ExperimentKind::Classify: resolve_classify(raw, out); break;
    case ExperimentKind::Lep: resolve_lep(raw, out); break;
    case ExperimentKind::Spectral: resolve_spectral(raw, out); break;
    case ExperimentKind::Sensitivity: resolve_sensitivity(raw, out); break;
    case ExperimentKind::Dichotomy: resolve_dichotomy(raw, out); break;
    case ExperimentKind::Vitali: resolve_vitali(raw, out); break;
    }
    return {kind, out};
}

ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    Json report = Json::object();
    ExperimentOutput out;
    switch (config.kind) {
    case ExperimentKind::Density: out = run_density(config.resolved, report); break;
    case ExperimentKind::Classify: out = run_classify(config.resolved, report); break;
    case ExperimentKind::Lep: out = run_lep(config.resolved, report); break;
    case ExperimentKind::Spectral: out = run_spectral(config.resolved, report); break;
    case ExperimentKind::Sensitivity: out = run_sensitivity(config.resolved, report); break;
    case ExperimentKind::Dichotomy: out = run_dichotomy(config.resolved, report); break;
    case ExperimentKind::Vitali: out = run_vitali(config.resolved, report); break;
    }
    const Json doc = {{"kind", std::string(to_string(config.kind))},
                      {"config", config.resolved},
                      {"report", report}};
    out.json_text = doc.dump(2) + "\n";
    return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& bytes)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(os), ErrorCode::InvalidArgument,
                "cannot open " + tmp.string() + " for writing");
        os << bytes;
        os.flush();
        require(static_cast<bool>(os), ErrorCode::InvalidArgument, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

void write_outputs(const ExperimentOutput& out, const std::filesystem::path& json_path)
{
    if (json_path.has_parent_path()) {
        std::filesystem::create_directories(json_path.parent_path());
    }
    write_atomically(json_path, out.json_text);
    if (out.csv_text) {
        std::filesystem::path csv = json_path;
        csv.replace_extension(".csv");
        write_atomically(csv, *out.csv_text);
    }
}

int exit_code_for(ErrorCode code)
{
    return code == ErrorCode::EnumerationTooLarge ? 3 : 2;
}

} // namespace equidyn
