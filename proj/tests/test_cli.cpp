// Subprocess tests for the command-line tool. CTest injects the binary path
// as MAPLABEL_CLI and the frozen fixtures directory as MAPLABEL_TEST_DATA.

#include "maplabel/detail/io.hpp"
#include "maplabel/validation.hpp"

#include "doctest.h"
#include "json.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

using namespace maplabel;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string env_or_fail(const char* name) {
    const char* value = std::getenv(name);
    REQUIRE_MESSAGE(value != nullptr, name << " must be set (run through ctest)");
    return value;
}

// Fresh per-case directory so reruns never see stale outputs.
fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("maplabel_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd =
        "\"" + env_or_fail("MAPLABEL_CLI") + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    const std::string text = detail::read_file(path.string());
    std::vector<std::vector<std::string>> rows;
    for (const auto line : detail::split(text, '\n')) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        for (const auto field : detail::split(line, ',')) fields.emplace_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string pendulum_config(const fs::path& dir) {
    const json cfg = {
        {"map", {{"type", "pendulum"}}},
        {"domain", {{"topology", "cylinder"},
                    {"x_lo", 0.0},
                    {"x_hi", 1.0},
                    {"y_lo", -2.1},
                    {"y_hi", 2.1}}},
        {"kernel", {{"family", "periodic_product"}, {"sigma", 0.5}}},
        {"boundary", {{"type", "smoothed_strips"},
                      {"a", -2.0},
                      {"b", 2.0},
                      {"alpha", 0.02},
                      {"beta", 0.1},
                      {"h_a", -1.0},
                      {"h_b", 1.0}}},
        {"N", std::size_t{100}},
        {"epsilon", 1e-8},
    };
    const fs::path path = dir / "pendulum.json";
    detail::write_file(path.string(), cfg.dump(2) + "\n");
    return path.string();
}

} // namespace

TEST_CASE("poincare emits one row per seed per step and reruns byte-identically") {
    const fs::path dir = scratch("poincare_count");
    const std::string common =
        "poincare --map standard --k 0.2 --topology cylinder --domain 0 1 0 1 "
        "--seeds 20 --steps 200 -o ";
    REQUIRE(run_cli(common + (dir / "a.csv").string()) == 0);
    REQUIRE(run_cli(common + (dir / "b.csv").string()) == 0);

    const auto rows = read_csv(dir / "a.csv");
    CHECK(rows.size() == 20 * 201 + 1);
    CHECK(rows[0] == std::vector<std::string>{"trajectory_id", "step", "x", "y"});
    CHECK(detail::read_file((dir / "a.csv").string()) ==
          detail::read_file((dir / "b.csv").string()));
    CHECK(fs::exists(dir / "a.csv.provenance.json"));
}

TEST_CASE("poincare at k = 0 keeps the y column frozen along each trajectory") {
    const fs::path dir = scratch("poincare_k0");
    REQUIRE(run_cli("poincare --map standard --k 0 --topology cylinder --domain 0 1 0 1 "
                    "--seeds 8 --steps 50 -o " + (dir / "t.csv").string()) == 0);

    std::map<std::string, std::string> first_y;
    const auto rows = read_csv(dir / "t.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto [it, inserted] = first_y.try_emplace(rows[i][0], rows[i][3]);
        if (!inserted) CHECK(rows[i][3] == it->second);
    }
    CHECK(first_y.size() == 8);
}

TEST_CASE("poincare matches the frozen perturbed pendulum reference") {
    const fs::path dir = scratch("poincare_frozen");
    const fs::path got = dir / "perturbed.csv";
    REQUIRE(run_cli("poincare --map perturbed_pendulum --topology plane "
                    "--domain -0.79 0.79 -0.79 0.79 --seeds 10 --steps 30 --skip 2 -o " +
                    got.string()) == 0);

    const fs::path want =
        fs::path(env_or_fail("MAPLABEL_TEST_DATA")) / "perturbed_pendulum_trajectories.csv";
    CHECK(detail::read_file(got.string()) == detail::read_file(want.string()));
}

TEST_CASE("solve-bvp reproduces the pendulum fit from a config file") {
    const fs::path dir = scratch("bvp");
    const std::string cfg = pendulum_config(dir);
    const std::string args = "solve-bvp --config " + cfg + " --model-out " +
                             (dir / "model.json").string() + " --report-out " +
                             (dir / "report.json").string();
    REQUIRE(run_cli(args) == 0);

    const json report = json::parse(detail::read_file((dir / "report.json").string()));
    CHECK(report["R"].get<double>() <= 2.6e-5);
    CHECK(report["E_inv"].get<double>() <= 1e-6);
    CHECK(report["epsilon"].get<double>() == 1e-8);
    CHECK(report["provenance"]["N"].get<std::size_t>() == 100);

    SUBCASE("rerun is byte-identical") {
        const std::string model_first = detail::read_file((dir / "model.json").string());
        const std::string report_first = detail::read_file((dir / "report.json").string());
        REQUIRE(run_cli(args) == 0);
        CHECK(detail::read_file((dir / "model.json").string()) == model_first);
        CHECK(detail::read_file((dir / "report.json").string()) == report_first);
    }

    SUBCASE("validate scores the saved model against trajectory averages") {
        const fs::path rep = dir / "val.json";
        const fs::path pairs = dir / "pairs.csv";
        REQUIRE(run_cli("validate --config " + cfg + " --model " +
                        (dir / "model.json").string() + " --J 100 --T 25 --report-out " +
                        rep.string() + " --pairs-out " + pairs.string()) == 0);

        const json val = json::parse(detail::read_file(rep.string()));
        const auto rows = read_csv(pairs);
        REQUIRE(rows.size() == 101);
        CHECK(rows[0] == std::vector<std::string>{"h", "wb"});

        std::vector<std::pair<double, double>> parsed;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            parsed.emplace_back(detail::parse_double(rows[i][0]),
                                detail::parse_double(rows[i][1]));
        }
        // Labels of the integrable pendulum are nearly invariant, and the
        // report's score must be recomputable from the emitted pairs.
        CHECK(val["S"].get<double>() == score_from_pairs(parsed));
        CHECK(val["S"].get<double>() <= 1e-3);
    }

    SUBCASE("eval-grid with --normalize pins the peak magnitude to one") {
        const fs::path grid = dir / "grid.csv";
        REQUIRE(run_cli("eval-grid --model " + (dir / "model.json").string() +
                        " --nx 30 --ny 30 --normalize -o " + grid.string()) == 0);
        const auto rows = read_csv(grid);
        REQUIRE(rows.size() == 30 * 30 + 1);
        double peak = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            peak = std::max(peak, std::abs(detail::parse_double(rows[i][2])));
        }
        CHECK(peak == 1.0);
    }
}

TEST_CASE("solve-evp writes ascending eigenvalues and one model per mode") {
    const fs::path dir = scratch("evp");
    const std::string cfg = pendulum_config(dir);
    REQUIRE(run_cli("solve-evp --config " + cfg + " --N 300 --n-eigs 8 --model-out " +
                    (dir / "mode").string() + " --report-out " +
                    (dir / "eigs.json").string()) == 0);

    const json report = json::parse(detail::read_file((dir / "eigs.json").string()));
    const auto lambdas = report["eigenvalues"].get<std::vector<double>>();
    REQUIRE(lambdas.size() == 8);
    CHECK(lambdas.front() >= 0.0);
    CHECK(lambdas.front() <= 1e-8); // integrable pendulum: truly invariant mode
    for (std::size_t m = 1; m < lambdas.size(); ++m) CHECK(lambdas[m] >= lambdas[m - 1]);
    for (int m = 1; m <= 8; ++m) {
        CHECK(fs::exists(dir / ("mode" + std::to_string(m) + ".json")));
    }
    CHECK(report["iterations"].get<int>() > 0);
}

TEST_CASE("scan over k is monotone and over epsilon relaxes smoothness") {
    const fs::path dir = scratch("scan");

    SUBCASE("k axis: residual R never decreases with the kick strength") {
        const fs::path out = dir / "k.csv";
        REQUIRE(run_cli("scan --map standard --topology cylinder --domain 0 1 0 1 "
                        "--family periodic_product --sigma 0.1 "
                        "--boundary smoothed_strips --a 0 --b 1 --alpha 0.01 --beta 0.01 "
                        "--N 120 --epsilon 1e-5 --axis k --values 0 0.5 1.0 1.5 2.0 -o " +
                        out.string()) == 0);
        const auto rows = read_csv(out);
        REQUIRE(rows.size() == 6);
        CHECK(rows[0][0] == "parameter");
        double prev = -1.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double R = detail::parse_double(rows[i][1]);
            CHECK(R >= prev);
            prev = R;
        }
    }

    SUBCASE("epsilon axis: E_K is nonincreasing as regularization grows") {
        const std::string cfg = pendulum_config(dir);
        const fs::path out = dir / "eps.csv";
        REQUIRE(run_cli("scan --config " + cfg + " --N 80 --axis epsilon "
                        "--values 1e-8 1e-6 1e-4 -o " + out.string()) == 0);
        const auto rows = read_csv(out);
        REQUIRE(rows.size() == 4);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double ek = detail::parse_double(rows[i][4]);
            CHECK(ek <= prev);
            prev = ek;
        }
    }
}

TEST_CASE("failure modes map onto the exit-code contract") {
    const fs::path dir = scratch("exit_codes");

    SUBCASE("usage problems and bad configs exit with 2") {
        CHECK(run_cli("") == 2);
        CHECK(run_cli("frobnicate") == 2);
        CHECK(run_cli("poincare") == 2); // --out is required
        CHECK(run_cli("scan --map pendulum --axis k --values 1.0 -o " +
                      (dir / "x.csv").string()) == 2);
        CHECK(run_cli("solve-bvp --map pendulum --family mystery") == 2);
        CHECK(run_cli("solve-evp --map pendulum --N 5 --n-eigs 10") == 2);

        detail::write_file((dir / "bad_key.json").string(),
                           "{\"map\": {\"type\": \"standard\"}, \"bogus\": 1}\n");
        CHECK(run_cli("poincare --config " + (dir / "bad_key.json").string() + " -o " +
                      (dir / "x.csv").string()) == 2);

        // No map selected anywhere: the config is missing its required field.
        detail::write_file((dir / "no_map.json").string(), "{\"N\": 50}\n");
        CHECK(run_cli("solve-bvp --config " + (dir / "no_map.json").string()) == 2);
    }

    SUBCASE("numerical failure exits with 3") {
        // A model with zero coefficients scores a constant label, which the
        // validation denominator cannot normalize.
        const json flat = {
            {"schema", "label-model/1"},
            {"kernel", {{"family", "squared_exponential"}, {"sigma", 0.4}}},
            {"topology", "plane"},
            {"centers", {{0.5, 0.5}}},
            {"coefficients", {0.0}},
            {"normalization", 1.0},
            {"provenance",
             {{"map", "standard k=0"},
              {"domain", {{"topology", "plane"},
                          {"x_lo", 0.0},
                          {"x_hi", 1.0},
                          {"y_lo", 0.0},
                          {"y_hi", 1.0}}},
              {"N", 1},
              {"epsilon", 1e-8},
              {"sobol_skip", 1}}},
        };
        detail::write_file((dir / "flat.json").string(), flat.dump(2) + "\n");
        CHECK(run_cli("validate --map standard --k 0 --model " +
                      (dir / "flat.json").string() + " --J 50 --T 10") == 3);
    }

    SUBCASE("unreadable inputs exit with 4") {
        CHECK(run_cli("eval-grid --model " + (dir / "absent.json").string() + " -o " +
                      (dir / "g.csv").string()) == 4);
        CHECK(run_cli("poincare --config " + (dir / "absent.json").string() + " -o " +
                      (dir / "x.csv").string()) == 4);
    }
}
