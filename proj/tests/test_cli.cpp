// Copyright 2026 The ringtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringtherm/cli.hpp"

using namespace ringtherm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::string& cmd, const std::string& config, std::size_t workers = 0,
                const std::string& format = "") {
    std::ostringstream out, err;
    const int code = cli::run(cmd, config, "", format, workers, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / ("ringtherm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("config errors name the offending key", "[cli]") {
    auto message = [](const std::string& text, const std::string& cmd = "spectrum") {
        try {
            (void)cli::parse_config(text, cmd);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ConfigError);
            return std::string(e.what());
        }
        FAIL("config accepted: " << text);
        return std::string();
    };
    CHECK_THAT(message(R"({"n_atom": 5})"), Catch::Matchers::ContainsSubstring("n_atom"));
    CHECK_THAT(message(R"({"n_atoms": 1})"), Catch::Matchers::ContainsSubstring("n_atoms"));
    CHECK_THAT(message(R"({"n_atoms": 5.5})"), Catch::Matchers::ContainsSubstring("n_atoms"));
    CHECK_THAT(message(R"({"coupling": 0.5})"), Catch::Matchers::ContainsSubstring("coupling"));
    CHECK_THAT(message(R"({"coupling": "x"})"), Catch::Matchers::ContainsSubstring("coupling"));
    CHECK_THAT(message(R"({"transition_freq": -1})"), Catch::Matchers::ContainsSubstring("transition_freq"));
    CHECK_THAT(message(R"({"rel_tol": 0})"), Catch::Matchers::ContainsSubstring("rel_tol"));
    CHECK_THAT(message(R"({"method": "euler"})"), Catch::Matchers::ContainsSubstring("method"));
    CHECK_THAT(message(R"({"format": "xml"})"), Catch::Matchers::ContainsSubstring("format"));
    CHECK_THAT(message(R"({"nested": {"a": 1}})"), Catch::Matchers::ContainsSubstring("nested"));
    CHECK_THAT(message(R"([1, 2])"), Catch::Matchers::ContainsSubstring("config"));
    CHECK_THAT(message("{not json"), Catch::Matchers::ContainsSubstring("config"));
    CHECK_THROWS_AS(cli::parse_config("{}", "frobnicate"), Error);
}

TEST_CASE("config values reach the run configuration", "[cli]") {
    const auto c = cli::parse_config(
        R"({"n_atoms": 7, "coupling": -0.2, "temperature_min": 0.1, "temperature_max": 0.3, "temperature_step": 0.1,
            "method": "dopri54", "workers": 3, "format": "json"})",
        "eq-scan");
    CHECK(c.n_atoms == 7);
    CHECK(c.coupling == -0.2);
    CHECK(c.options.integrator.method == IntegratorMethod::Dopri54);
    CHECK(c.options.workers == 3);
    CHECK(c.format == "json");
    const auto temps = c.temperature_grid.expand("temperature");
    REQUIRE(temps.size() == 3);
    CHECK(temps.back() == Catch::Approx(0.3));
    // canonical echo: sorted keys
    CHECK(c.echo.find("\"coupling\"") < c.echo.find("\"n_atoms\""));
}

TEST_CASE("exit codes", "[cli]") {
    CHECK(run_cli("spectrum", R"({"n_atoms": 5, "coupling": 0.3})").code == cli::kSuccess);
    CHECK(run_cli("spectrum", R"({"n_atoms": 1})").code == cli::kConfigError);
    CHECK(run_cli("spectrum", R"({"bogus": 1})").code == cli::kConfigError);
    CHECK(run_cli("spectrum", R"({"n_atoms": 5})", 0, "yaml").code == cli::kConfigError);
    CHECK(run_cli("dyn-scan", R"({"n_atoms": 3, "temperature_values": [0.5]})").code == cli::kConfigError);

    // a failing row: t_e cannot be reached inside a tiny horizon
    const auto partial = run_cli("t-e", R"({"n_values": [3, 4], "coupling": 0.1, "temperature": 1.0, "max_horizon": 0.01})");
    CHECK(partial.code == cli::kPartialFailure);
    CHECK_THAT(partial.out, Catch::Matchers::ContainsSubstring("DidNotEquilibrate"));
}

TEST_CASE("spectrum table contents", "[cli]") {
    const auto c = cli::parse_config(R"({"n_atoms": 5, "coupling": 0.3})", "spectrum");
    const auto t = cli::compute(c);
    CHECK(t.rows.size() == 11);
    CHECK(*t.summary_value("Delta_E_H") == Catch::Approx(0.7));
    CHECK(*t.summary_value("Delta_E_L") == Catch::Approx(1.3));
}

TEST_CASE("CSV and JSON round trips", "[cli]") {
    auto c = cli::parse_config(R"({"n_atoms": 4, "coupling": -0.1, "temperature_values": [0.2, 0.5, 1.0],
                                   "t_values": [0.0, 1.0, 4.0]})",
                               "dyn-scan");
    auto t = cli::compute(c);
    t.meta = {{"a", "1"}, {"b", "x,y"}};
    t.summary = {{"s", 0.125}};
    t.status[1] = "SingularTerm";
    t.rows[1][2] = kNaN;
    CHECK(from_json(to_json(t)) == t);
    const auto back = from_csv(to_csv(t));
    CHECK(back.columns == t.columns);
    CHECK(back.status == t.status);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) {
            if (std::isnan(t.rows[i][j])) {
                CHECK(std::isnan(back.rows[i][j]));
            } else {
                CHECK(back.rows[i][j] == t.rows[i][j]);
            }
        }
    }
    CHECK(*back.summary_value("s") == 0.125);
}

TEST_CASE("output is byte identical across worker counts", "[cli]") {
    const std::string config = R"({"n_atoms": 5, "coupling": 0.3, "temperature_values": [0.3, 0.6, 0.9, 1.2],
                                   "t_values": [0.5, 2.0, 8.0]})";
    const auto one = run_cli("dyn-scan", config, 1);
    const auto many = run_cli("dyn-scan", config, 8);
    REQUIRE(one.code == 0);
    CHECK(one.out == many.out);
    CHECK(one.out.find("wall_time") == std::string::npos);
    const auto eq1 = run_cli("eq-scan", R"({"n_atoms": 9, "coupling": -0.3})", 1, "json");
    const auto eq8 = run_cli("eq-scan", R"({"n_atoms": 9, "coupling": -0.3})", 8, "json");
    CHECK(eq1.out == eq8.out);
}

TEST_CASE("crb reads a previous table", "[cli]") {
    const auto dir = scratch_dir();
    const auto eq_path = dir / "eq.csv";
    std::ostringstream out, err;
    REQUIRE(cli::run("eq-scan", R"({"n_atoms": 4, "coupling": 0.0, "temperature_values": [0.5, 1.0]})",
                     eq_path.string(), "", 0, out, err) == 0);
    const std::string cfg = R"({"input": ")" + eq_path.string() + R"(", "repetitions": 100})";
    std::ostringstream crb_out, crb_err;
    REQUIRE(cli::run("crb", cfg, "", "json", 0, crb_out, crb_err) == 0);
    const auto t = from_json(crb_out.str());
    const std::size_t dt = t.column("delta_T");
    const std::size_t q = t.column("Q_e");
    for (const auto& r : t.rows) CHECK(r[dt] == Catch::Approx(1.0 / std::sqrt(100.0 * r[q])));
    CHECK(*t.summary_value("repetitions") == 100.0);

    CHECK(run_cli("crb", R"({"input": "/nonexistent/table.csv"})").code == cli::kConfigError);
    CHECK(run_cli("crb", R"({"input": ")" + eq_path.string() + R"(", "qfi_column": "Q_x"})").code ==
          cli::kConfigError);
    fs::remove_all(dir);
}

TEST_CASE("the installed binary follows the exit code contract", "[cli][binary]") {
    const char* exe = std::getenv("RINGTHERM_EXE");
    if (exe == nullptr) SKIP("RINGTHERM_EXE not set");
    const auto dir = scratch_dir();
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    auto call = [&](const std::string& args) {
        const std::string cmd = std::string(exe) + " " + args + " >" + (dir / "stdout").string() + " 2>" +
                                (dir / "stderr").string();
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    const auto good = write("good.json", R"({"n_atoms": 5, "coupling": 0.3})");
    CHECK(call("spectrum --config " + good) == 0);
    CHECK(slurp(dir / "stdout").find("Delta_E_H") != std::string::npos);
    CHECK(call("spectrum --config " + good + " --out " + (dir / "s.json").string() + " --format json") == 0);
    CHECK(slurp(dir / "s.json").front() == '{');
    CHECK(call("spectrum --config " + write("bad.json", R"({"n_atoms": 5, "oops": 1})")) == 1);
    CHECK(slurp(dir / "stderr").find("oops") != std::string::npos);
    CHECK(call("spectrum --config " + (dir / "missing.json").string()) == 1);
    CHECK(call("spectrum") == 1);
    CHECK(call("teleport --config " + good) == 1);
    CHECK(call("t-e --config " +
               write("te.json", R"({"n_values": [3, 4], "temperature": 1.0, "max_horizon": 0.01})")) == 2);
    fs::remove_all(dir);
}
