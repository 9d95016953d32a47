// equidyn <subcommand> --config <path> [--seed S] [--out <path>] [--threads K]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "equidyn/experiment.hpp"
#include "equidyn/sampling.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kInternalError = 4;

std::optional<unsigned> threads_from_env()
{
    const char* env = std::getenv("EQUIDYN_THREADS");
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    try {
        const long v = std::stol(env);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    } catch (const std::exception&) {
    }
    std::cerr << "equidyn: ignoring EQUIDYN_THREADS=" << env << '\n';
    return std::nullopt;
}

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> threads;
};

int run(equidyn::ExperimentKind kind, const Options& opt)
{
    using equidyn::Json;
    std::ifstream in(opt.config);
    if (!in) {
        std::cerr << "equidyn: cannot read config " << opt.config << '\n';
        return kConfigError;
    }
    Json raw;
    try {
        raw = Json::parse(in);
    } catch (const Json::parse_error& e) {
        std::cerr << "equidyn: config is not valid JSON: " << e.what() << '\n';
        return kConfigError;
    }
    if (opt.seed && raw.is_object()) {
        raw["seed"] = *opt.seed;
    }
    if (auto t = opt.threads ? opt.threads : threads_from_env()) {
        equidyn::set_worker_count(*t);
    }

    const equidyn::ExperimentConfig cfg = equidyn::resolve_config(kind, raw);
    const equidyn::ExperimentOutput out = equidyn::run_experiment(cfg);
    if (opt.out.empty()) {
        std::cout << out.json_text;
    } else {
        equidyn::write_outputs(out, opt.out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Measure-theoretic equicontinuity experiments"};
    app.require_subcommand(1);
    Options opt;
    std::optional<equidyn::ExperimentKind> chosen;

    for (const char* name :
         {"density", "classify", "lep", "spectral", "sensitivity", "dichotomy", "vitali"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
        sub->add_option("--config", opt.config, "JSON experiment config")->required();
        sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
        sub->add_option("--out", opt.out, "report path; CSV goes next to it (default: stdout)");
        sub->add_option("--threads", opt.threads, "worker threads (default: EQUIDYN_THREADS or 1)")
            ->check(CLI::PositiveNumber);
        sub->callback([&chosen, name] { chosen = equidyn::parse_kind(name); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        return run(*chosen, opt);
    } catch (const equidyn::Error& e) {
        std::cerr << "equidyn: " << e.what() << '\n';
        return equidyn::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "equidyn: internal error: " << e.what() << '\n';
        return kInternalError;
    }
}
