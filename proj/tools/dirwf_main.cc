// Copyright 2026 The dirwf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dirwf/cli.h"

namespace {

struct Flags {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<uint64_t> seed;
};

void add_common_flags(CLI::App *sub, Flags &flags) {
    sub->add_option("--config", flags.config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", flags.out_path, "Output file (default: config output.path, else stdout)");
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", flags.seed, "Master seed, overrides the config");
}

}  // namespace

int main(int argc, char **argv) {
    using dirwf::cli::Command;

    CLI::App app{"Direct wave-function measurement simulator"};
    app.require_subcommand(1);
    Flags flags;
    std::optional<Command> command;

    struct Entry {
        Command command;
        const char *help;
    };
    const Entry entries[] = {
        {Command::verify, "Audit the closed-form probability identities"},
        {Command::reconstruct, "Reconstruct the state in each requested mode"},
        {Command::sweep, "Reconstruction error versus coupling strength"},
        {Command::sample, "Finite-shot counts for every setting"},
    };
    for (const auto &e : entries) {
        CLI::App *sub = app.add_subcommand(dirwf::cli::to_string(e.command), e.help);
        add_common_flags(sub, flags);
        sub->callback([&command, c = e.command] { command = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : dirwf::cli::kExitUsage;
    }

    dirwf::cli::RunConfig cfg;
    try {
        cfg = dirwf::cli::load_config(flags.config_path);
    } catch (const dirwf::cli::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dirwf::cli::kExitUsage;
    }
    if (!flags.out_path.empty()) {
        cfg.output_path = flags.out_path;
    }
    if (flags.format == "csv") {
        cfg.format = dirwf::cli::OutputFormat::csv;
    } else if (flags.format == "json") {
        cfg.format = dirwf::cli::OutputFormat::json;
    }
    if (flags.seed.has_value()) {
        cfg.seed = *flags.seed;
    }
    return dirwf::cli::execute(*command, cfg);
}
