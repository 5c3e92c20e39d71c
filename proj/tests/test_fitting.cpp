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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "ionreg/errors.hpp"
#include "ionreg/experiments.hpp"
#include "ionreg/fitting.hpp"
#include "ionreg/gates.hpp"
#include "oracles.hpp"

using namespace ionreg;

namespace {
std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }
}  // namespace

TEST_CASE("linear and constant models") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v);
    const Model line = [](std::span<const double> p, double t) { return p[0] * t; };
    const std::vector<double> init{1.0};
    const FitResult r = least_squares_fit(line, init, x, y, ones(x.size()));
    CHECK(r.converged);
    CHECK(r.params(0) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.residual_norm < 1e-9);

    const std::vector<double> yc{3.0, 1.0, 2.0, 5.0, 4.0};
    const Model constant = [](std::span<const double> p, double) { return p[0]; };
    const FitResult c = least_squares_fit(constant, init, x, yc, ones(x.size()));
    CHECK(c.params(0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
    const Model m = [](std::span<const double> p, double t) { return p[0] + p[1] * t; };
    const std::vector<double> init{0, 0};
    const std::vector<double> x{1.0}, y{1.0}, s{1.0};
    CHECK_THROWS_AS(least_squares_fit(m, init, x, y, s), Error);
    const std::vector<double> x2{1.0, 2.0}, y2{1.0, 2.0}, s2{1.0, 0.0};
    CHECK_THROWS_AS(least_squares_fit(m, init, x2, y2, s2), Error);
}

TEST_CASE("degenerate parameters are named") {
    // p0 and p1 enter only through their sum.
    const Model m = [](std::span<const double> p, double t) { return (p[0] + p[1]) * t; };
    const std::vector<double> init{1, 1}, x{1, 2, 3}, y{2, 4, 6};
    FitOptions opt;
    opt.names = {"a", "b"};
    try {
        least_squares_fit(m, init, x, y, ones(3), opt);
        FAIL("expected a degenerate-fit error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DegenerateFit);
        CHECK(std::string(e.what()).find('a') != std::string::npos);
    }
    opt.allow_degenerate = true;
    const FitResult r = least_squares_fit(m, init, x, y, ones(3), opt);
    CHECK(!r.degenerate.empty());
}

TEST_CASE("results do not depend on data order and chi2 never increases") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> noise(0, 0.05);
    std::vector<double> x, y, s;
    for (int i = 0; i < 40; ++i) {
        x.push_back(0.1 * i);
        y.push_back(1.3 * std::exp(-0.7 * x.back()) + 0.2 + noise(rng));
        s.push_back(0.05);
    }
    const Model m = [](std::span<const double> p, double t) { return p[0] * std::exp(-p[1] * t) + p[2]; };
    const std::vector<double> init{1, 1, 0};
    const FitResult a = least_squares_fit(m, init, x, y, s);
    for (std::size_t i = 1; i < a.chi2_history.size(); ++i) CHECK(a.chi2_history[i] <= a.chi2_history[i - 1]);

    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> xs, ys, ss;
    for (auto i : idx) {
        xs.push_back(x[i]);
        ys.push_back(y[i]);
        ss.push_back(s[i]);
    }
    const FitResult b = least_squares_fit(m, init, xs, ys, ss);
    CHECK((a.params - b.params).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.covariance - b.covariance).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.covariance.isApprox(a.covariance.transpose()));
}

TEST_CASE("quartic coverage over 100 noise realizations") {
    const std::vector<double> truth{0.5, -1.0, 0.8, 0.3, -0.4};
    auto poly = [](std::span<const double> p, double t) {
        double v = 0.0;
        for (std::size_t k = p.size(); k-- > 0;) v = v * t + p[k];
        return v;
    };
    const Model m = poly;
    int covered = 0, total = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> x, y, s;
        for (int i = 0; i < 60; ++i) {
            const double t = -1.5 + 3.0 * i / 59.0;
            const double clean = poly(truth, t);
            const double sig = 0.01 * std::max(std::abs(clean), 0.1);
            x.push_back(t);
            y.push_back(clean + sig * g(rng));
            s.push_back(sig);
        }
        const std::vector<double> init(5, 0.0);
        const FitResult r = least_squares_fit(m, init, x, y, s);
        CHECK(r.converged);
        for (int k = 0; k < 5; ++k) {
            ++total;
            if (std::abs(r.params(k) - truth[k]) <= 3.0 * r.sigma(k)) ++covered;
        }
    }
    // 3-sigma coverage is 99.7%; allow a little slack for the t-distribution.
    CHECK(covered >= total * 97 / 100);
}

TEST_CASE("sine fit recovers the Rabi frequency") {
    const double w = kTwoPi * 11.15e3;
    std::vector<double> t, y;
    for (int i = 0; i < 60; ++i) {
        t.push_back(i * 5e-6);
        y.push_back(0.48 + 0.47 * std::sin(w * t.back() + 1.3));
    }
    const SineFit f = fit_sine(t, y);
    CHECK(std::abs(f.omega) == doctest::Approx(w).epsilon(1e-9));
    CHECK(std::abs(f.amplitude) == doctest::Approx(0.47).epsilon(1e-9));
    CHECK(f.offset == doctest::Approx(0.48).epsilon(1e-9));
}

TEST_CASE("sine fit on constant data is degenerate") {
    std::vector<double> t, y(20, 0.7);
    for (int i = 0; i < 20; ++i) t.push_back(i);
    bool flagged = false;
    try {
        const SineFit f = fit_sine(t, y);
        flagged = !f.fit.converged || !f.fit.degenerate.empty();
    } catch (const Error &e) {
        flagged = e.kind() == ErrorKind::DegenerateFit;
    }
    CHECK(flagged);
    const std::vector<double> short_t{0, 1, 2}, short_y{0, 1, 0};
    CHECK_THROWS_AS(fit_sine(short_t, short_y), Error);
}

TEST_CASE("sine fit on sampled Rabi data") {
    NoiseConfig n;
    n.eps1 = n.eps2 = 0.02;
    const double w = kTwoPi * 11.15e3;
    const auto grid = linspace(0.0, 4.0 * kTwoPi / w, 81);
    Rng rng = derive_rng(31, 0);
    const std::uint64_t shots = 200;
    const RabiSeries s = rabi_flop_experiment(grid, w, n, SimMode::Sampled, shots, rng);
    std::vector<double> sigma;
    for (double p : s.p2) {
        const double q = (p * shots + 1) / (shots + 2.0);
        sigma.push_back(std::sqrt(q * (1 - q) / shots));
    }
    const SineFit f = fit_sine(s.t, s.p2, sigma);
    CHECK(std::abs(std::abs(f.omega) - w) <= 3 * f.sigma_omega);
}

TEST_CASE("cross-talk decay fit") {
    std::vector<double> n, f, s;
    for (int k = 0; k <= 10; ++k) {
        n.push_back(100.0 * k);
        f.push_back(oracle::survival(n.back(), 3e-3, 0.95));
        s.push_back(0.01);
    }
    const CrosstalkFit fit = fit_crosstalk_decay(n, f, s);
    CHECK(fit.p0 == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(fit.c == doctest::Approx(3e-3).epsilon(1e-9));
    // The model value at N = 0 is p0 itself.
    CHECK(crosstalk_fidelity_model(0, fit.c, fit.p0) == fit.p0);

    std::vector<double> flat(n.size(), 0.96);
    const CrosstalkFit exact_flat = fit_crosstalk_decay(n, flat, s);
    CHECK((exact_flat.c_pinned || exact_flat.c <= exact_flat.sigma_c));
    CHECK(exact_flat.c < 1e-8);
    CHECK(exact_flat.p0 == doctest::Approx(0.96).epsilon(1e-9));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0, 0.01);
    for (auto &v : flat) v += g(rng);
    const CrosstalkFit ff = fit_crosstalk_decay(n, flat, s);
    CHECK((ff.c_pinned || ff.c <= 3 * ff.sigma_c));
}

TEST_CASE("zero crossings") {
    const auto x = linspace(-1.0, 1.0, 21);
    std::vector<double> y, neg;
    for (double v : x) y.push_back(-v);
    const ZeroCrossing z = find_zero_crossing(x, y, SlopeSign::Negative);
    CHECK(std::abs(z.x0) < 1e-14);

    const auto xs = linspace(2.0, 4.5, 26);
    std::vector<double> ys;
    for (double v : xs) ys.push_back(std::sin(v));
    const ZeroCrossing s = find_zero_crossing(xs, ys, SlopeSign::Negative);
    CHECK(s.x0 == doctest::Approx(kPi).epsilon(1e-3));

    for (double v : ys) neg.push_back(-v);
    const ZeroCrossing p = find_zero_crossing(xs, neg, SlopeSign::Positive);
    CHECK(p.x0 == s.x0);
    CHECK(p.sigma == s.sigma);

    CHECK_THROWS_AS(find_zero_crossing(xs, ys, SlopeSign::Positive), Error);
    try {
        find_zero_crossing(xs, ys, SlopeSign::Positive);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::NoCrossing);
    }
}

TEST_CASE("fit report JSON") {
    const Model m = [](std::span<const double> p, double t) { return p[0] * t; };
    const std::vector<double> init{1.0}, x{1, 2, 3}, y{2, 4, 6.1};
    const auto j = to_json(least_squares_fit(m, init, x, y, ones(3)));
    CHECK(j.contains("params"));
    CHECK(j.contains("sigmas"));
    CHECK(j.contains("chi2"));
    CHECK(j["converged"] == true);
}
