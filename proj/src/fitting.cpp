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

#include "ionreg/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ionreg/errors.hpp"
#include "ionreg/gates.hpp"

namespace ionreg {

namespace {

struct Dataset {
    std::vector<double> x, y, w;  // w = 1 / sigma
};

Dataset canonical(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        if (y[a] != y[b]) return y[a] < y[b];
        return sigma[a] < sigma[b];
    });
    Dataset d;
    for (std::size_t i : idx) {
        d.x.push_back(x[i]);
        d.y.push_back(y[i]);
        d.w.push_back(1.0 / sigma[i]);
    }
    return d;
}

double chi_square(const Model &model, const Eigen::VectorXd &p, const Dataset &d) {
    const std::span<const double> ps(p.data(), static_cast<std::size_t>(p.size()));
    double chi2 = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double r = (d.y[i] - model(ps, d.x[i])) * d.w[i];
        chi2 += r * r;
    }
    return chi2;
}

ModelGradient finite_difference(const Model &model) {
    return [model](std::span<const double> p, double x, std::span<double> grad) {
        std::vector<double> q(p.begin(), p.end());
        for (std::size_t j = 0; j < q.size(); ++j) {
            const double h = 6e-6 * std::max(std::abs(p[j]), 1.0);
            q[j] = p[j] + h;
            const double up = model(q, x);
            q[j] = p[j] - h;
            const double down = model(q, x);
            q[j] = p[j];
            grad[j] = (up - down) / (2.0 * h);
        }
    };
}

// Normal matrix J^T W J and gradient J^T W r.
void normal_equations(const Model &model, const ModelGradient &gradient, const Eigen::VectorXd &p, const Dataset &d,
                      Eigen::MatrixXd &a, Eigen::VectorXd &g) {
    const auto n = p.size();
    const std::span<const double> ps(p.data(), static_cast<std::size_t>(n));
    a = Eigen::MatrixXd::Zero(n, n);
    g = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd row(n);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        gradient(ps, d.x[i], std::span<double>(row.data(), static_cast<std::size_t>(n)));
        row *= d.w[i];
        const double r = (d.y[i] - model(ps, d.x[i])) * d.w[i];
        a.noalias() += row * row.transpose();
        g.noalias() += row * r;
    }
}

// Parameters spanning the (near) null space of the normal matrix.
std::vector<std::size_t> degenerate_parameters(const Eigen::MatrixXd &a) {
    const auto n = a.rows();
    std::vector<std::size_t> out;
    Eigen::VectorXd scale(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = a(j, j);
        if (!(d > 0.0) || !std::isfinite(d)) out.push_back(static_cast<std::size_t>(j));
        scale(j) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    if (!out.empty()) return out;
    const Eigen::MatrixXd c = scale.asDiagonal() * a * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    const Eigen::VectorXd &ev = es.eigenvalues();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (ev(k) > 1e-12 * std::max(1.0, ev.maxCoeff())) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(es.eigenvectors()(j, k)) > 0.3 &&
                std::find(out.begin(), out.end(), static_cast<std::size_t>(j)) == out.end())
                out.push_back(static_cast<std::size_t>(j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> describe(const std::vector<std::size_t> &idx, const std::vector<std::string> &names) {
    std::vector<std::string> out;
    for (std::size_t j : idx) out.push_back(j < names.size() ? names[j] : "p" + std::to_string(j));
    return out;
}

[[noreturn]] void throw_degenerate(const std::vector<std::string> &which) {
    std::ostringstream msg;
    msg << "singular normal matrix; degenerate parameters:";
    for (const auto &s : which) msg << ' ' << s;
    fail(ErrorKind::DegenerateFit, msg.str());
}

void check_inputs(std::span<const double> x, std::span<const double> y, std::span<const double> sigma,
                  std::size_t n_params) {
    if (x.size() != y.size() || x.size() != sigma.size())
        fail(ErrorKind::Validation, "fit: x, y and sigma must have equal length");
    if (x.size() < n_params) fail(ErrorKind::Validation, "fit: fewer data points than parameters");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(sigma[i] > 0.0)) fail(ErrorKind::Validation, "fit: sigma must be positive");
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(ErrorKind::Validation, "fit: non-finite data");
    }
}

}  // namespace

double FitResult::sigma(Eigen::Index i) const {
    const double v = covariance(i, i);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

Eigen::MatrixXd covariance_at(const ModelGradient &gradient, std::span<const double> params, std::span<const double> x,
                              std::span<const double> sigma, double chi2, int dof) {
    const auto n = static_cast<Eigen::Index>(params.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd row(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
        gradient(params, x[i], std::span<double>(row.data(), params.size()));
        row /= sigma[i];
        a.noalias() += row * row.transpose();
    }
    const double scale = dof > 0 ? chi2 / dof : 1.0;
    return a.completeOrthogonalDecomposition().pseudoInverse() * scale;
}

FitResult least_squares_fit(const Model &model, std::span<const double> initial, std::span<const double> x,
                            std::span<const double> y, std::span<const double> sigma, const FitOptions &options,
                            const ModelGradient &gradient) {
    const std::size_t np = initial.size();
    check_inputs(x, y, sigma, np);
    const Dataset d = canonical(x, y, sigma);
    const ModelGradient grad = gradient ? gradient : finite_difference(model);
    const auto n = static_cast<Eigen::Index>(np);

    FitResult result;
    result.params = Eigen::Map<const Eigen::VectorXd>(initial.data(), n);
    result.dof = static_cast<int>(d.x.size()) - static_cast<int>(np);

    Eigen::MatrixXd a;
    Eigen::VectorXd g;
    double chi2 = chi_square(model, result.params, d);
    result.chi2_history.push_back(chi2);
    normal_equations(model, grad, result.params, d, a, g);
    if (auto bad = degenerate_parameters(a); !bad.empty()) {
        result.degenerate = describe(bad, options.names);
        if (!options.allow_degenerate) throw_degenerate(result.degenerate);
    }

    double lambda = options.initial_lambda;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (chi2 == 0.0) {
            result.converged = true;
            break;
        }
        Eigen::MatrixXd damped = a;
        for (Eigen::Index j = 0; j < n; ++j) damped(j, j) += lambda * std::max(a(j, j), 1e-300);
        const Eigen::VectorXd step = damped.ldlt().solve(g);
        const Eigen::VectorXd trial = result.params + step;
        const double trial_chi2 = step.allFinite() ? chi_square(model, trial, d) : INFINITY;
        if (trial_chi2 < chi2) {
            const double decrease = chi2 - trial_chi2;
            result.params = trial;
            chi2 = trial_chi2;
            result.chi2_history.push_back(chi2);
            lambda = std::max(lambda / 10.0, 1e-12);
            normal_equations(model, grad, result.params, d, a, g);
            bool small_step = true;
            for (Eigen::Index j = 0; j < n; ++j)
                small_step = small_step && std::abs(step(j)) <= 1e-13 * (std::abs(result.params(j)) + 1e-13);
            if (small_step || decrease <= 1e-15 * chi2) {
                result.converged = true;
                ++it;
                break;
            }
        } else {
            lambda *= 10.0;
            // No downhill step exists at any damping: the current point is a
            // minimum to working precision.
            if (lambda > 1e16) {
                result.converged = true;
                ++it;
                break;
            }
        }
    }
    result.iterations = it;
    result.chi2 = chi2;
    result.residual_norm = std::sqrt(chi2);

    if (auto bad = degenerate_parameters(a); !bad.empty()) {
        result.degenerate = describe(bad, options.names);
        if (!options.allow_degenerate) throw_degenerate(result.degenerate);
        result.covariance = a.completeOrthogonalDecomposition().pseudoInverse();
    } else {
        result.covariance = a.inverse();
    }
    if (result.dof > 0) result.covariance *= chi2 / result.dof;
    return result;
}

SineFit fit_sine(std::span<const double> t, std::span<const double> y, std::span<const double> sigma) {
    const std::size_t n = t.size();
    if (n < 8) fail(ErrorKind::Validation, "fit_sine: at least 8 points required");
    if (y.size() != n) fail(ErrorKind::Validation, "fit_sine: t and y must have equal length");
    std::vector<double> ones;
    if (sigma.empty()) {
        ones.assign(n, 1.0);
        sigma = ones;
    }
    const auto [tmin_it, tmax_it] = std::minmax_element(t.begin(), t.end());
    const double span = *tmax_it - *tmin_it;
    if (!(span > 0.0)) fail(ErrorKind::Validation, "fit_sine: time series has zero span");
    const double nyquist = kPi * static_cast<double>(n - 1) / span;

    // Weighted linear fit of (offset, sin, cos) at a fixed frequency.
    auto linear = [&](double omega, Eigen::Vector3d &coef) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        Eigen::Vector3d b = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 1.0 / (sigma[i] * sigma[i]);
            const Eigen::Vector3d row(1.0, std::sin(omega * t[i]), std::cos(omega * t[i]));
            m.noalias() += w * row * row.transpose();
            b.noalias() += w * row * y[i];
        }
        coef = m.completeOrthogonalDecomposition().solve(b);
        double chi2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = (y[i] - coef(0) - coef(1) * std::sin(omega * t[i]) - coef(2) * std::cos(omega * t[i])) / sigma[i];
            chi2 += r * r;
        }
        return chi2;
    };

    constexpr int kCandidates = 256;
    double best_omega = 0.0, best_chi2 = INFINITY;
    Eigen::Vector3d coef;
    for (int k = 1; k <= kCandidates; ++k) {
        const double omega = nyquist * k / kCandidates;
        const double c = linear(omega, coef);
        if (c < best_chi2) {
            best_chi2 = c;
            best_omega = omega;
        }
    }
    // Finer scan inside the winning bin.
    const double bin = nyquist / kCandidates;
    const double lo = std::max(best_omega - bin, bin / 64.0);
    for (int k = 0; k <= 128; ++k) {
        const double omega = lo + (best_omega + bin - lo) * k / 128.0;
        const double c = linear(omega, coef);
        if (c < best_chi2) {
            best_chi2 = c;
            best_omega = omega;
        }
    }
    linear(best_omega, coef);
    const double amp0 = std::hypot(coef(1), coef(2));
    if (amp0 <= 1e-12 * (std::abs(coef(0)) + 1.0))
        fail(ErrorKind::DegenerateFit, "fit_sine: no oscillation in data; degenerate parameters: amplitude omega phase");
    if (best_omega * span < kPi) fail(ErrorKind::Validation, "fit_sine: series covers less than half a period");
    const double phase0 = std::atan2(coef(2), coef(1));

    const Model model = [](std::span<const double> p, double x) { return p[3] + p[0] * std::sin(p[1] * x + p[2]); };
    const ModelGradient gradient = [](std::span<const double> p, double x, std::span<double> g) {
        const double s = std::sin(p[1] * x + p[2]);
        const double c = std::cos(p[1] * x + p[2]);
        g[0] = s;
        g[1] = p[0] * x * c;
        g[2] = p[0] * c;
        g[3] = 1.0;
    };
    FitOptions options;
    options.names = {"amplitude", "omega", "phase", "offset"};
    const std::vector<double> initial{amp0, best_omega, phase0, coef(0)};
    SineFit out;
    out.fit = least_squares_fit(model, initial, t, y, sigma, options, gradient);
    out.amplitude = out.fit.params(0);
    out.omega = out.fit.params(1);
    out.phase = out.fit.params(2);
    out.offset = out.fit.params(3);
    if (out.amplitude < 0.0) {
        out.amplitude = -out.amplitude;
        out.phase += kPi;
    }
    out.phase = std::remainder(out.phase, kTwoPi);
    out.sigma_omega = out.fit.sigma(1);
    return out;
}

CrosstalkFit fit_crosstalk_decay(std::span<const double> n, std::span<const double> f, std::span<const double> sigma) {
    if (n.size() != f.size() || n.size() != sigma.size())
        fail(ErrorKind::Validation, "fit_crosstalk_decay: series lengths differ");
    if (n.size() < 2) fail(ErrorKind::Validation, "fit_crosstalk_decay: at least 2 points required");
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 0.0) fail(ErrorKind::Validation, "fit_crosstalk_decay: N must be nonnegative");
        if (f[i] < 0.0 || f[i] > 1.0) fail(ErrorKind::Validation, "fit_crosstalk_decay: F must lie in [0, 1]");
    }
    auto natural = [](std::span<const double> p) {
        const double p0 = 1.0 / (1.0 + std::exp(-p[0]));
        return std::pair{p0, std::exp(p[1])};
    };
    const Model model = [natural](std::span<const double> p, double x) {
        const auto [p0, c] = natural(p);
        return 0.5 * (1.0 + (2.0 * p0 - 1.0) * std::exp(-2.0 * c * x));
    };
    const ModelGradient gradient = [natural](std::span<const double> p, double x, std::span<double> g) {
        const auto [p0, c] = natural(p);
        const double e = std::exp(-2.0 * c * x);
        g[0] = e * p0 * (1.0 - p0);
        g[1] = c * (-x * (2.0 * p0 - 1.0) * e);
    };

    // Starting point from the shallowest and deepest points.
    const auto first = static_cast<std::size_t>(std::min_element(n.begin(), n.end()) - n.begin());
    const auto last = static_cast<std::size_t>(std::max_element(n.begin(), n.end()) - n.begin());
    const double p0_guess = std::clamp(f[first], 0.51, 0.999);
    double c_guess = 1e-4;
    if (n[last] > n[first]) {
        const double ratio = (2.0 * f[last] - 1.0) / (2.0 * p0_guess - 1.0);
        if (ratio > 0.0 && ratio < 1.0) c_guess = -std::log(ratio) / (2.0 * n[last]);
    }
    const std::vector<double> initial{std::log(p0_guess / (1.0 - p0_guess)), std::log(c_guess)};

    FitOptions options;
    options.allow_degenerate = true;
    options.names = {"logit_p0", "log_c"};
    CrosstalkFit out;
    out.fit = least_squares_fit(model, initial, n, f, sigma, options, gradient);
    const std::span<const double> ps(out.fit.params.data(), 2);
    std::tie(out.p0, out.c) = natural(ps);

    const ModelGradient natural_gradient = [](std::span<const double> q, double x, std::span<double> g) {
        const double e = std::exp(-2.0 * q[1] * x);
        g[0] = e;
        g[1] = -x * (2.0 * q[0] - 1.0) * e;
    };
    const std::vector<double> q{out.p0, out.c};
    const Eigen::MatrixXd cov = covariance_at(natural_gradient, q, n, sigma, out.fit.chi2, out.fit.dof);
    out.sigma_p0 = std::sqrt(std::max(cov(0, 0), 0.0));
    out.sigma_c = std::sqrt(std::max(cov(1, 1), 0.0));
    out.c_pinned = out.c < 1e-12;
    out.p0_pinned = out.p0 < 1e-12 || out.p0 > 1.0 - 1e-12;
    return out;
}

std::vector<ZeroCrossing> find_zero_crossings(std::span<const double> x, std::span<const double> y, SlopeSign slope,
                                              std::span<const double> sigma) {
    if (x.size() != y.size()) fail(ErrorKind::Validation, "find_zero_crossing: series lengths differ");
    if (!sigma.empty() && sigma.size() != y.size())
        fail(ErrorKind::Validation, "find_zero_crossing: sigma length differs");
    std::vector<ZeroCrossing> out;
    const std::size_t n = x.size();
    if (n < 4) return out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool bracket = slope == SlopeSign::Negative ? (y[i] > 0.0 && y[i + 1] <= 0.0)
                                                          : (y[i] < 0.0 && y[i + 1] >= 0.0);
        if (!bracket) continue;
        const std::size_t start = std::min(i > 0 ? i - 1 : 0, n - 4);
        double sw = 0.0, sx = 0.0;
        for (std::size_t k = start; k < start + 4; ++k) {
            const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[k] * sigma[k]);
            sw += w;
            sx += w * x[k];
        }
        const double xc = sx / sw;
        double sxx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t k = start; k < start + 4; ++k) {
            const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[k] * sigma[k]);
            const double dx = x[k] - xc;
            sxx += w * dx * dx;
            sy += w * y[k];
            sxy += w * dx * y[k];
        }
        // y = a + b (x - xc); a and b are uncorrelated after centering.
        const double a = sy / sw;
        const double b = sxy / sxx;
        if (b == 0.0) continue;
        double var_a = 1.0 / sw, var_b = 1.0 / sxx;
        if (sigma.empty()) {
            double rss = 0.0;
            for (std::size_t k = start; k < start + 4; ++k) {
                const double r = y[k] - a - b * (x[k] - xc);
                rss += r * r;
            }
            const double s2 = rss / 2.0;
            var_a *= s2;
            var_b *= s2;
        }
        ZeroCrossing zc;
        zc.x0 = xc - a / b;
        zc.sigma = std::sqrt(var_a / (b * b) + var_b * (a * a) / (b * b * b * b));
        zc.bracket = i;
        out.push_back(zc);
    }
    return out;
}

ZeroCrossing find_zero_crossing(std::span<const double> x, std::span<const double> y, SlopeSign slope,
                                std::span<const double> sigma, std::optional<double> near) {
    const auto all = find_zero_crossings(x, y, slope, sigma);
    if (all.empty())
        fail(ErrorKind::NoCrossing, std::string("no zero crossing with ") +
                                        (slope == SlopeSign::Negative ? "negative" : "positive") + " slope");
    if (!near) return all.front();
    return *std::min_element(all.begin(), all.end(), [&](const ZeroCrossing &p, const ZeroCrossing &q) {
        return std::abs(p.x0 - *near) < std::abs(q.x0 - *near);
    });
}

nlohmann::json to_json(const FitResult &fit) {
    nlohmann::json j;
    std::vector<double> params(fit.params.data(), fit.params.data() + fit.params.size());
    std::vector<double> sigmas;
    for (Eigen::Index i = 0; i < fit.params.size(); ++i) sigmas.push_back(fit.sigma(i));
    j["params"] = params;
    j["sigmas"] = sigmas;
    j["chi2"] = fit.chi2;
    j["dof"] = fit.dof;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    if (!fit.degenerate.empty()) j["degenerate"] = fit.degenerate;
    return j;
}

}  // namespace ionreg
