#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "equidyn/experiment.hpp"
#include "equidyn/sampling.hpp"

using namespace equidyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / "equidyn_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const Json& j)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << j.dump();
    return p;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(EQUIDYN_CLI) + " " + args + " 2>" + (scratch() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json identity_density()
{
    return Json::parse(R"({
        "system": {"type": "identity"},
        "measure": {"type": "bernoulli", "weights": [0.5, 0.5]},
        "m": 1, "n_list": [1, 2], "T": 3, "points": 10, "seed": 2
    })");
}

} // namespace

TEST(Resolve, DefaultsExpanded)
{
    const ExperimentConfig cfg = resolve_config(ExperimentKind::Density, identity_density());
    EXPECT_EQ(cfg.resolved.at("N"), 10000);
    EXPECT_EQ(cfg.resolved.at("delta"), 0.05);
    EXPECT_EQ(cfg.resolved.at("enumeration_cap"), 1 << 24);
    // The binary radius-1 identity is elementary rule 204.
    EXPECT_EQ(cfg.resolved.at("system").at("rule"), 204);
}

TEST(Resolve, MissingTNamed)
{
    Json raw = identity_density();
    raw.erase("T");
    try {
        resolve_config(ExperimentKind::Density, raw);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
        EXPECT_NE(std::string(e.what()).find("\"T\""), std::string::npos) << e.what();
    }
}

TEST(Resolve, BadFieldsNamed)
{
    const std::vector<std::pair<std::string, std::string>> cases = {
        {R"({"system": {"type": "eca", "rule": 300}, "measure": {"type": "bernoulli", "weights": [0.5, 0.5]}, "m": 1, "n_list": [1], "T": 1})", "rule"},
        {R"({"system": {"type": "eca", "rule": 30}, "measure": {"type": "bernoulli", "weights": [0.5, 0.6]}, "m": 1, "n_list": [1], "T": 1})", "weights"},
        {R"({"system": {"type": "eca", "rule": 30}, "measure": {"type": "bernoulli", "weights": [0.5, 0.5]}, "m": 1, "n_list": [0], "T": 1})", "n_list"},
        {R"({"system": {"type": "eca", "rule": 30}, "measure": {"type": "bernoulli", "weights": [0.5, 0.5]}, "m": 1, "n_list": [1], "T": 1, "delta": 2})", "delta"},
        {R"({"system": {"type": "rotation", "alpha": 0.3}, "measure": {"type": "bernoulli", "weights": [0.5, 0.5]}, "m": 1, "n_list": [1], "T": 1})", "measure"},
        {R"({"measure": {"type": "bernoulli", "weights": [0.5, 0.5]}, "m": 1, "n_list": [1], "T": 1})", "system"},
    };
    for (const auto& [text, field] : cases) {
        try {
            resolve_config(ExperimentKind::Density, Json::parse(text));
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
            EXPECT_NE(std::string(e.what()).find("\"" + field + "\""), std::string::npos) << e.what();
        }
    }
}

TEST(Resolve, SeedAcceptsAnyNonnegativeInteger)
{
    Json raw = identity_density();
    raw["seed"] = 5;
    EXPECT_EQ(resolve_config(ExperimentKind::Density, raw).resolved.at("seed"), 5u);
    raw["seed"] = -1;
    EXPECT_THROW(resolve_config(ExperimentKind::Density, raw), Error);
    raw["seed"] = 1.5;
    EXPECT_THROW(resolve_config(ExperimentKind::Density, raw), Error);
}

TEST(Run, ReportEmbedsResolvedConfig)
{
    const ExperimentConfig cfg = resolve_config(ExperimentKind::Density, identity_density());
    const ExperimentOutput out = run_experiment(cfg);
    const Json doc = Json::parse(out.json_text);
    EXPECT_EQ(doc.at("kind"), "density");
    EXPECT_EQ(doc.at("config"), cfg.resolved);
    EXPECT_EQ(doc.at("report").at("fraction"), 1.0);
    ASSERT_TRUE(out.csv_text);
    EXPECT_EQ(out.csv_text->rfind("point,n,ratio,exact\n", 0), 0u);
}

TEST(Run, BundledConfigsRunTwiceIdentically)
{
    for (const auto& entry : fs::directory_iterator(EQUIDYN_CONFIGS)) {
        const std::string stem = entry.path().stem().string();
        const std::string kind_name = stem.substr(stem.rfind('_') + 1);
        const auto kind = parse_kind(kind_name);
        ASSERT_TRUE(kind) << stem;
        const Json raw = Json::parse(slurp(entry.path()));
        const ExperimentConfig cfg = resolve_config(*kind, raw);
        set_worker_count(1);
        const std::string a = run_experiment(cfg).json_text;
        set_worker_count(3);
        const std::string b = run_experiment(cfg).json_text;
        set_worker_count(1);
        EXPECT_EQ(a, b) << stem;
    }
}

TEST(Run, EnumerationCapSurfaces)
{
    Json raw = Json::parse(R"({
        "system": {"type": "eca", "rule": 90},
        "measure": {"type": "bernoulli", "weights": [0.5, 0.5]},
        "m": 1, "T": 12, "enumeration_cap": 100
    })");
    raw["y"] = std::string(49, '0');
    const ExperimentConfig cfg = resolve_config(ExperimentKind::Spectral, raw);
    try {
        run_experiment(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EnumerationTooLarge);
        EXPECT_EQ(exit_code_for(e.code()), 3);
    }
}

TEST(Cli, WritesFilesAndExitsZero)
{
    const fs::path cfg = write_config("density.json", identity_density());
    const fs::path out = scratch() / "out" / "density_report.json";
    fs::remove(out);
    fs::remove(fs::path(out).replace_extension(".csv"));
    EXPECT_EQ(run_cli("density --config " + cfg.string() + " --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out));
    EXPECT_TRUE(fs::exists(fs::path(out).replace_extension(".csv")));
    EXPECT_FALSE(fs::exists(fs::path(out).concat(".tmp")));
}

TEST(Cli, MissingTExitsTwoNamingField)
{
    Json raw = identity_density();
    raw.erase("T");
    const fs::path cfg = write_config("no_t.json", raw);
    EXPECT_EQ(run_cli("density --config " + cfg.string() + " --out " + (scratch() / "x.json").string()), 2);
    EXPECT_NE(slurp(scratch() / "stderr.txt").find("\"T\""), std::string::npos);
}

TEST(Cli, UnknownSubcommandAndBadJson)
{
    const fs::path bad = scratch() / "bad.json";
    std::ofstream(bad) << "{ not json";
    EXPECT_EQ(run_cli("density --config " + bad.string()), 2);
    EXPECT_EQ(run_cli("frobnicate --config " + bad.string()), 2);
    EXPECT_EQ(run_cli("density --config /nonexistent/file.json"), 2);
}

TEST(Cli, CapExitsThree)
{
    Json raw = Json::parse(R"({
        "system": {"type": "eca", "rule": 90},
        "measure": {"type": "bernoulli", "weights": [0.5, 0.5]},
        "m": 1, "T": 12, "enumeration_cap": 100
    })");
    raw["y"] = std::string(49, '0');
    const fs::path cfg = write_config("cap.json", raw);
    EXPECT_EQ(run_cli("spectral --config " + cfg.string()), 3);
}

TEST(Cli, SeedFlagOverridesAndThreadsDoNotMatter)
{
    const fs::path cfg = write_config("seeded.json", identity_density());
    const fs::path a = scratch() / "a.json";
    const fs::path b = scratch() / "b.json";
    const fs::path c = scratch() / "c.json";
    ASSERT_EQ(run_cli("density --config " + cfg.string() + " --seed 99 --threads 1 --out " + a.string()), 0);
    ASSERT_EQ(run_cli("density --config " + cfg.string() + " --seed 99 --threads 8 --out " + b.string()), 0);
    ASSERT_EQ(run_cli("density --config " + cfg.string() + " --out " + c.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a), slurp(c));
    EXPECT_EQ(Json::parse(slurp(a)).at("config").at("seed"), 99);
}
