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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace ionreg {

/// Model value for parameters `p` at abscissa `x`.
using Model = std::function<double(std::span<const double> p, double x)>;
/// Writes d model / d p_j into `grad` (same length as p).
using ModelGradient = std::function<void(std::span<const double> p, double x, std::span<double> grad)>;

struct FitOptions {
    int max_iterations = 500;
    double initial_lambda = 1e-3;
    /// Return degenerate parameters in FitResult::degenerate instead of
    /// throwing when the normal matrix is singular.
    bool allow_degenerate = false;
    std::vector<std::string> names;  // used in degeneracy messages
};

struct FitResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double chi2 = 0.0;
    double residual_norm = 0.0;  // sqrt(chi2)
    int dof = 0;
    bool converged = false;
    int iterations = 0;
    /// chi2 after the initial guess and after every accepted step.
    std::vector<double> chi2_history;
    std::vector<std::string> degenerate;

    double sigma(Eigen::Index i) const;
};

/// Levenberg-Marquardt minimization of sum(((y - model(x)) / sigma)^2).
///
/// The damping starts at options.initial_lambda, is divided by 10 after every
/// accepted step and multiplied by 10 after every rejected one. Data points
/// are summed in a canonical order (sorted by x, then y, then sigma), so the
/// result does not depend on how the caller ordered them. The covariance is
/// the inverse normal matrix at the optimum scaled by the reduced chi-square.
/// Without an analytic gradient, central differences are used.
///
/// A singular normal matrix raises ErrorKind::DegenerateFit naming the
/// parameters involved, unless options.allow_degenerate is set.
FitResult least_squares_fit(const Model &model, std::span<const double> initial, std::span<const double> x,
                            std::span<const double> y, std::span<const double> sigma, const FitOptions &options = {},
                            const ModelGradient &gradient = nullptr);

/// Inverse normal matrix of a gradient at fixed parameters, scaled by chi2/dof
/// when dof > 0.
Eigen::MatrixXd covariance_at(const ModelGradient &gradient, std::span<const double> params, std::span<const double> x,
                              std::span<const double> sigma, double chi2, int dof);

struct SineFit {
    double amplitude = 0.0;
    double omega = 0.0;  // rad per unit of t
    double phase = 0.0;
    double offset = 0.0;
    double sigma_omega = 0.0;
    FitResult fit;
};

/// Fits y = offset + amplitude sin(omega t + phase). The starting frequency
/// comes from a scan of 256 candidates up to the Nyquist frequency, each
/// scored by a linear least-squares fit of offset and quadratures.
SineFit fit_sine(std::span<const double> t, std::span<const double> y, std::span<const double> sigma = {});

struct CrosstalkFit {
    double p0 = 0.0;
    double c = 0.0;
    double sigma_p0 = 0.0;
    double sigma_c = 0.0;
    bool p0_pinned = false;
    bool c_pinned = false;
    FitResult fit;
};

/// Fits F(N) = (1 + (2 p0 - 1) exp(-2 C N)) / 2 with p0 = logistic(a) and
/// C = exp(u); uncertainties are reported for (p0, C) directly.
CrosstalkFit fit_crosstalk_decay(std::span<const double> n, std::span<const double> f, std::span<const double> sigma);

enum class SlopeSign { Negative, Positive };

struct ZeroCrossing {
    double x0 = 0.0;
    double sigma = 0.0;
    std::size_t bracket = 0;  // index i of the bracketing pair (i, i + 1)
};

/// All sign changes with the requested slope, each refined by a straight-line
/// fit through the four points around the bracket. With `sigma` the line
/// covariance uses those errors; without, it is scaled by the residual.
std::vector<ZeroCrossing> find_zero_crossings(std::span<const double> x, std::span<const double> y, SlopeSign slope,
                                              std::span<const double> sigma = {});

/// The crossing closest to `near`, or the first one when no hint is given.
/// Raises ErrorKind::NoCrossing when none qualifies.
ZeroCrossing find_zero_crossing(std::span<const double> x, std::span<const double> y, SlopeSign slope,
                                std::span<const double> sigma = {}, std::optional<double> near = std::nullopt);

nlohmann::json to_json(const FitResult &fit);

}  // namespace ionreg
