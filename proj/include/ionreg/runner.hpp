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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ionreg/cycle_bench.hpp"
#include "ionreg/experiments.hpp"
#include "ionreg/zeeman.hpp"

namespace ionreg {

enum class Experiment { Rabi, Crosstalk, ParityScan, CycleBench, ZeemanSweep, Transpile };

std::string to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);

/// Evenly spaced grid written as {"start": a, "stop": b, "points": n}.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;

    std::vector<double> values() const { return linspace(start, stop, points); }
};

struct RabiSettings {
    double rabi_rate = kTwoPi * 11.15e3;
    Ion addressed = Ion::One;
    GridSpec t{0.0, 4.0 / 11.15e3, 81};
};

struct CrosstalkSettings {
    std::vector<int> n_values{0, 50, 100, 200, 300, 400, 500, 600, 800, 1000};
    Ion addressed = Ion::One;
    CrosstalkMode mode = CrosstalkMode::TwoIon;
    int sequences_per_point = 10;
};

struct ParityScanSettings {
    GridSpec phi{-kPi / 2, kPi / 2, 37};
};

struct ZeemanSettings {
    GridSpec dx{-1.2, 1.2, 13};
    GridSpec dy{-0.08, 0.08, 9};
    double level = 0.966;
    ShiftModel model;
    /// When set, the model scale is first bisected so that the fidelity at
    /// (target_dx, target_dy) equals this value.
    std::optional<double> target_fidelity;
    double target_dx = 0.0;
    double target_dy = 0.0;
};

struct TranspileSettings {
    std::string circuit;       // inline circuit text
    std::string circuit_file;  // or a path, relative to the config file
};

struct RunConfig {
    Experiment experiment = Experiment::CycleBench;
    std::uint64_t seed = 0;
    std::uint64_t shots = 200;
    bool exact = false;
    std::string output_dir = "out";
    NoiseConfig noise;
    PulseTiming timing;
    RabiSettings rabi;
    CrosstalkSettings crosstalk;
    ParityScanSettings parity_scan;
    CBConfig cycle_bench;
    ZeemanSettings zeeman_sweep;
    TranspileSettings transpile;
    std::filesystem::path base_dir;  // directory of the config file

    SimMode mode() const { return exact ? SimMode::Exact : SimMode::Sampled; }
};

/// Reads a RunConfig from parsed JSON, appending every schema violation as
/// "<json path>: <problem>".
RunConfig run_config_from_json(const nlohmann::json &j, std::vector<std::string> &violations);

/// Every violation in the file at `path`. JSON syntax errors are reported
/// with their line and column. Throws only when the file cannot be read.
std::vector<std::string> validate_config_file(const std::filesystem::path &path);

/// Parses and validates; throws ErrorKind::Config listing all violations.
RunConfig load_run_config(const std::filesystem::path &path);

/// Fully resolved configuration, as echoed in the manifest.
nlohmann::json to_json(const RunConfig &config);

struct RunReport {
    std::vector<std::filesystem::path> files;
    nlohmann::json analysis;
};

/// Runs the configured experiment and writes manifest.json, the data CSV and
/// analysis.json into `out_dir`.
RunReport run(const RunConfig &config, const std::filesystem::path &out_dir);

/// Writes rows as CSV with a header, 12 significant digits and a trailing
/// newline.
void write_csv(const std::filesystem::path &path, const std::vector<std::string> &header,
               const std::vector<std::vector<std::string>> &rows);
std::string format_number(double v);

}  // namespace ionreg
