// Copyright 2026 The ionreg Authors
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

// Command-line entry point: ionreg <subcommand> --config <path> [options].

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ionreg/errors.hpp"
#include "ionreg/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    bool exact = false;
    std::string in;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("ionreg");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char *level = std::getenv("IONREG_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

int execute(std::optional<ionreg::Experiment> forced, const Options &opt) {
    using namespace ionreg;
    RunConfig config;
    try {
        config = load_run_config(opt.config);
        if (forced) {
            if (config.experiment != *forced)
                spdlog::info("config names experiment '{}', running '{}'", to_string(config.experiment),
                             to_string(*forced));
            config.experiment = *forced;
        }
        if (opt.seed) {
            config.seed = *opt.seed;
            config.noise.seed = *opt.seed;
            config.cycle_bench.seed = *opt.seed;
        }
        if (opt.shots) config.shots = *opt.shots;
        if (opt.exact) config.exact = true;
        if (!opt.in.empty()) {
            config.transpile.circuit_file = opt.in;
            config.base_dir.clear();
        }
        if (!config.exact && config.shots == 0 && config.experiment != Experiment::Transpile &&
            config.experiment != Experiment::ZeemanSweep)
            fail(ErrorKind::Config, "shots: must be positive in sampled mode");
    } catch (const Error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const std::string out = opt.out.empty() ? config.output_dir : opt.out;
    spdlog::info("running {} (seed {}, {} mode) into {}", to_string(config.experiment), config.seed,
                 config.exact ? "exact" : "sampled", out);
    try {
        const RunReport report = run(config, out);
        for (const auto &f : report.files) spdlog::debug("wrote {}", f.string());
        std::cout << report.analysis.dump(2) << '\n';
    } catch (const Error &e) {
        const nlohmann::json err = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << '\n';
        return e.kind() == ErrorKind::Config ? kExitConfig : kExitRuntime;
    } catch (const std::exception &e) {
        const nlohmann::json err = {{"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << '\n';
        return kExitRuntime;
    }
    return 0;
}

int validate(const Options &opt) {
    try {
        const auto violations = ionreg::validate_config_file(opt.config);
        for (const auto &v : violations) std::cout << v << '\n';
        if (violations.empty()) std::cout << "ok\n";
        return violations.empty() ? 0 : kExitConfig;
    } catch (const ionreg::Error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char **argv) {
    setup_logging();
    CLI::App app{"Simulation and benchmarking of a two-ion microwave register"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App *sub, bool with_in) {
        sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory (default: output_dir from the config)");
        sub->add_option("--seed", opt.seed, "master seed override");
        sub->add_option("--shots", opt.shots, "shots per circuit override");
        sub->add_flag("--exact", opt.exact, "exact probabilities instead of sampled shots");
        if (with_in) sub->add_option("--in", opt.in, "circuit text file")->check(CLI::ExistingFile);
    };

    std::optional<ionreg::Experiment> forced;
    int status = 0;
    for (const char *name : {"rabi", "crosstalk", "parity-scan", "cycle-bench", "zeeman-sweep", "transpile"}) {
        auto *sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        add_common(sub, std::string(name) == "transpile");
        sub->callback([&, name] {
            forced = ionreg::experiment_from_string(name);
            status = execute(forced, opt);
        });
    }
    auto *run = app.add_subcommand("run", "run the experiment named in the config");
    add_common(run, true);
    run->callback([&] { status = execute(std::nullopt, opt); });

    auto *val = app.add_subcommand("validate", "check a config without running it");
    val->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    val->callback([&] { status = validate(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    return status;
}
