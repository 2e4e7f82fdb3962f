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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ringtherm/cli.hpp"

int main(int argc, char** argv) {
    namespace cli = ringtherm::cli;
    CLI::App app{"ringtherm: thermometry scans on a collective atomic ring probe"};
    app.set_version_flag("--version", std::string(RINGTHERM_VERSION));
    app.require_subcommand(1, 1);

    std::string config_path, out_path, format;
    std::size_t workers = 0;
    for (const auto& name : cli::subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat JSON config file")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kSuccess : cli::kConfigError;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "ConfigError: config: cannot read '" << config_path << "'\n";
        return cli::kConfigError;
    }
    std::stringstream text;
    text << in.rdbuf();
    try {
        return cli::run(app.get_subcommands().front()->get_name(), text.str(), out_path, format, workers);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return cli::kInternalError;
    }
}
