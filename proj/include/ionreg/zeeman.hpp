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

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ionreg/cycle_bench.hpp"
#include "ionreg/noise.hpp"

namespace ionreg {

/// c0 + cx dx + cy dy + cxx dx^2 + cyy dy^2 + cxy dx dy, in rad/s with
/// displacements in micrometres.
struct ShiftPolynomial {
    double c0 = 0.0, cx = 0.0, cy = 0.0, cxx = 0.0, cyy = 0.0, cxy = 0.0;

    double operator()(double dx, double dy) const {
        return c0 + cx * dx + cy * dy + cxx * dx * dx + cyy * dy * dy + cxy * dx * dy;
    }
};

/// Maps a displacement between rf null and gradient centre to the four
/// ac-Zeeman shifts, one polynomial per (addressed configuration, ion).
struct ShiftModel {
    std::array<std::array<ShiftPolynomial, 2>, 2> shift{};
    double scale = 1.0;

    /// `base` with its Zeeman shifts replaced by the model at (dx, dy).
    /// Raises a validation error when the model is not finite there.
    NoiseConfig apply(const NoiseConfig &base, double dx, double dy) const;

    ShiftModel scaled(double factor) const {
        ShiftModel m = *this;
        m.scale *= factor;
        return m;
    }
};

nlohmann::json to_json(const ShiftModel &model);
ShiftModel shift_model_from_json(const nlohmann::json &j, const std::string &path, std::vector<std::string> &violations);

/// Compiled cycle-benchmarking circuits reused across many noise settings.
class CBPipeline {
  public:
    CBPipeline(const CBConfig &config, double phi_offset, const PulseTiming &timing = {});

    /// Exact-mode composite fidelity under `noise`.
    double fidelity(const NoiseConfig &noise) const;

    const CBConfig &config() const { return config_; }

  private:
    CBConfig config_;
    PulseTiming timing_;
    std::vector<CBCircuit> circuits_;
    std::vector<NativeProgram> programs_;
};

struct SweepPoint {
    double dx = 0.0;
    double dy = 0.0;
    double fidelity = 0.0;  // NaN when `error` is set
    std::optional<std::string> error;
};

using Polyline = std::vector<std::pair<double, double>>;

struct Contour {
    double level = 0.0;
    std::vector<Polyline> lines;

    bool has_closed() const;
};

struct ZeemanSweep {
    std::vector<double> dx;
    std::vector<double> dy;
    /// Row-major with dy outer, dx inner.
    std::vector<SweepPoint> points;
    Contour contour;
};

/// Composite fidelity over the (dx, dy) grid, plus the `level` contour.
/// A failing grid point is recorded and the sweep continues.
ZeemanSweep zeeman_sweep(std::span<const double> dx, std::span<const double> dy, const ShiftModel &model,
                         const CBConfig &cb, const NoiseConfig &base, double level = 0.966,
                         const PulseTiming &timing = {});

/// Marching-squares iso-line of a row-major (ny x nx) field.
Contour extract_contour(std::span<const double> dx, std::span<const double> dy, std::span<const double> field,
                        double level);

/// Bisects the model scale so the fidelity at (dx, dy) equals `target`.
/// The bracket grows by 10% steps from `initial_scale` so it holds the first crossing.
double find_shift_scale(const ShiftModel &model, const CBPipeline &pipeline, const NoiseConfig &base, double dx,
                        double dy, double target, double initial_scale = 1.0, int iterations = 60);

}  // namespace ionreg
