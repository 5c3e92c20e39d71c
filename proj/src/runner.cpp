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

#include "ionreg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ionreg/errors.hpp"
#include "ionreg/json_fields.hpp"

namespace ionreg {

namespace fs = std::filesystem;

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::Rabi, "rabi"},
    {Experiment::Crosstalk, "crosstalk"},
    {Experiment::ParityScan, "parity-scan"},
    {Experiment::CycleBench, "cycle-bench"},
    {Experiment::ZeemanSweep, "zeeman-sweep"},
    {Experiment::Transpile, "transpile"},
};

// Stream indices for derive_rng(seed, .) so experiments never share draws.
constexpr std::uint64_t kRabiStream = 0x52414249;
constexpr std::uint64_t kCrosstalkStream = 0x58544c4b;
constexpr std::uint64_t kParityStream = 0x50415249;

GridSpec read_grid(FieldReader &parent, const std::string &name, GridSpec fallback, std::vector<std::string> &violations) {
    const auto &j = parent.object(name);
    if (j.is_null()) return fallback;
    FieldReader r(j, parent.field_path(name), violations);
    GridSpec g;
    g.start = r.number("start", fallback.start);
    g.stop = r.number("stop", fallback.stop);
    g.points = static_cast<int>(r.integer("points", fallback.points));
    r.require(std::isfinite(g.start), "start", "must be finite");
    r.require(std::isfinite(g.stop), "stop", "must be finite");
    r.require(g.points >= 1, "points", "must be at least 1");
    r.reject_unknown();
    return g;
}

Ion read_ion(FieldReader &r, const std::string &name, Ion fallback) {
    const std::int64_t q = r.integer(name, index_of(fallback) + 1);
    r.require(q == 1 || q == 2, name, "must be 1 or 2");
    return q == 2 ? Ion::Two : Ion::One;
}

nlohmann::json to_json(const GridSpec &g) { return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}}; }

nlohmann::json error_json(const Error &e) { return {{"kind", to_string(e.kind())}, {"message", e.what()}}; }

std::string read_text_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Config, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const fs::path &path, const nlohmann::json &j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<double> binomial_sigma(std::span<const double> p, std::uint64_t shots) {
    std::vector<double> out;
    const double n = static_cast<double>(shots);
    for (double v : p) {
        const double smooth = (v * n + 1.0) / (n + 2.0);
        out.push_back(std::sqrt(smooth * (1.0 - smooth) / n));
    }
    return out;
}

}  // namespace

std::string to_string(Experiment e) {
    for (const auto &[kind, name] : kExperimentNames)
        if (kind == e) return std::string(name);
    return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
    for (const auto &[kind, n] : kExperimentNames)
        if (n == name) return kind;
    return std::nullopt;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const fs::path &path, const std::vector<std::string> &header,
               const std::vector<std::vector<std::string>> &rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto &r : rows) line(r);
}

RunConfig run_config_from_json(const nlohmann::json &j, std::vector<std::string> &violations) {
    RunConfig c;
    FieldReader r(j, "", violations);
    if (!r.ok()) return c;

    const std::string kind = r.string("experiment", to_string(c.experiment));
    if (auto e = experiment_from_string(kind)) {
        c.experiment = *e;
    } else {
        r.require(false, "experiment",
                  "unknown experiment '" + kind +
                      "' (expected rabi, crosstalk, parity-scan, cycle-bench, zeeman-sweep or transpile)");
    }
    c.seed = r.unsigned_integer("seed", c.seed);
    c.shots = r.unsigned_integer("shots", c.shots);
    c.exact = r.boolean("exact", c.exact);
    c.output_dir = r.string("output_dir", c.output_dir);

    if (const auto &n = r.object("noise"); !n.is_null()) c.noise = noise_from_json(n, r.field_path("noise"), violations);

    const auto rates = r.numbers("rabi_rate_rad_per_s",
                                 {c.timing.rabi_rate[0], c.timing.rabi_rate[1]});
    if (rates.size() == 2 && rates[0] > 0.0 && rates[1] > 0.0) {
        c.timing.rabi_rate = {rates[0], rates[1]};
    } else {
        r.require(false, "rabi_rate_rad_per_s", "must be two positive rates [ion 1, ion 2]");
    }

    if (const auto &s = r.object("rabi"); !s.is_null()) {
        FieldReader sr(s, r.field_path("rabi"), violations);
        c.rabi.rabi_rate = sr.number("rabi_rate_rad_per_s", c.rabi.rabi_rate);
        sr.require(c.rabi.rabi_rate > 0.0, "rabi_rate_rad_per_s", "must be positive");
        c.rabi.addressed = read_ion(sr, "addressed", c.rabi.addressed);
        c.rabi.t = read_grid(sr, "t_s", c.rabi.t, violations);
        sr.require(std::min(c.rabi.t.start, c.rabi.t.stop) >= 0.0, "t_s", "pulse times must be nonnegative");
        sr.reject_unknown();
    }

    if (const auto &s = r.object("crosstalk"); !s.is_null()) {
        FieldReader sr(s, r.field_path("crosstalk"), violations);
        const auto ns = sr.numbers("n_values", {});
        if (sr.has("n_values")) {
            c.crosstalk.n_values.clear();
            bool ok = !ns.empty();
            for (double n : ns) {
                ok = ok && n >= 0 && n == std::floor(n) && std::fmod(n, 2.0) == 0.0;
                c.crosstalk.n_values.push_back(static_cast<int>(n));
            }
            sr.require(ok, "n_values", "must be a nonempty list of even nonnegative integers");
        }
        c.crosstalk.addressed = read_ion(sr, "addressed", c.crosstalk.addressed);
        const std::string mode = sr.string("mode", "two-ion");
        sr.require(mode == "two-ion" || mode == "single-ion", "mode", "must be 'two-ion' or 'single-ion'");
        c.crosstalk.mode = mode == "single-ion" ? CrosstalkMode::SingleIon : CrosstalkMode::TwoIon;
        c.crosstalk.sequences_per_point =
            static_cast<int>(sr.integer("sequences_per_point", c.crosstalk.sequences_per_point));
        sr.require(c.crosstalk.sequences_per_point >= 1, "sequences_per_point", "must be at least 1");
        sr.reject_unknown();
    }

    if (const auto &s = r.object("parity_scan"); !s.is_null()) {
        FieldReader sr(s, r.field_path("parity_scan"), violations);
        c.parity_scan.phi = read_grid(sr, "phi_rad", c.parity_scan.phi, violations);
        sr.require(std::abs(c.parity_scan.phi.stop - c.parity_scan.phi.start) >= kPi - 1e-12 &&
                       c.parity_scan.phi.points >= 4,
                   "phi_rad", "grid must span at least pi with at least 4 points");
        sr.reject_unknown();
    }

    auto read_cb = [&](const nlohmann::json &s, const std::string &path) {
        FieldReader sr(s, path, violations);
        CBConfig cb;
        cb.m1 = static_cast<int>(sr.integer("m1", cb.m1));
        cb.m2 = static_cast<int>(sr.integer("m2", cb.m2));
        cb.randomizations = static_cast<int>(sr.integer("randomizations", cb.randomizations));
        cb.bootstrap_resamples = static_cast<int>(sr.integer("bootstrap_resamples", cb.bootstrap_resamples));
        sr.reject_unknown();
        for (const auto &v : cb.violations()) violations.push_back(path + "/" + v);
        return cb;
    };
    if (const auto &s = r.object("cycle_bench"); !s.is_null()) c.cycle_bench = read_cb(s, r.field_path("cycle_bench"));

    if (const auto &s = r.object("zeeman_sweep"); !s.is_null()) {
        const std::string path = r.field_path("zeeman_sweep");
        FieldReader sr(s, path, violations);
        auto &z = c.zeeman_sweep;
        z.dx = read_grid(sr, "dx_um", z.dx, violations);
        z.dy = read_grid(sr, "dy_um", z.dy, violations);
        z.level = sr.number("level", z.level);
        sr.require(z.level > 0.0 && z.level < 1.0, "level", "must lie in (0, 1)");
        if (const auto &m = sr.object("model"); !m.is_null())
            z.model = shift_model_from_json(m, sr.field_path("model"), violations);
        if (sr.has("target_fidelity")) {
            z.target_fidelity = sr.number("target_fidelity", 0.0);
            sr.require(*z.target_fidelity > 0.0 && *z.target_fidelity < 1.0, "target_fidelity", "must lie in (0, 1)");
        }
        z.target_dx = sr.number("target_dx_um", z.target_dx);
        z.target_dy = sr.number("target_dy_um", z.target_dy);
        sr.reject_unknown();
    }

    if (const auto &s = r.object("transpile"); !s.is_null()) {
        FieldReader sr(s, r.field_path("transpile"), violations);
        c.transpile.circuit = sr.string("circuit", "");
        c.transpile.circuit_file = sr.string("circuit_file", "");
        sr.reject_unknown();
    }

    if (!c.exact && c.shots == 0 && c.experiment != Experiment::Transpile && c.experiment != Experiment::ZeemanSweep)
        r.require(false, "shots", "must be positive in sampled mode");
    r.reject_unknown();

    c.noise.seed = c.seed;
    c.cycle_bench.seed = c.seed;
    return c;
}

std::vector<std::string> validate_config_file(const fs::path &path) {
    const std::string text = read_text_file(path);
    std::vector<std::string> violations;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        violations.push_back(path.string() + ": " + e.what());
        return violations;
    }
    run_config_from_json(j, violations);
    return violations;
}

RunConfig load_run_config(const fs::path &path) {
    const std::string text = read_text_file(path);
    std::vector<std::string> violations;
    RunConfig c;
    try {
        c = run_config_from_json(nlohmann::json::parse(text), violations);
    } catch (const nlohmann::json::parse_error &e) {
        violations.push_back(path.string() + ": " + e.what());
    }
    if (!violations.empty()) {
        std::string msg = "invalid configuration " + path.string() + ":";
        for (const auto &v : violations) msg += "\n  " + v;
        fail(ErrorKind::Config, msg);
    }
    c.base_dir = path.parent_path();
    return c;
}

nlohmann::json to_json(const RunConfig &c) {
    nlohmann::json j;
    j["experiment"] = to_string(c.experiment);
    j["seed"] = c.seed;
    j["shots"] = c.shots;
    j["exact"] = c.exact;
    j["output_dir"] = c.output_dir;
    j["noise"] = to_json(c.noise);
    j["rabi_rate_rad_per_s"] = {c.timing.rabi_rate[0], c.timing.rabi_rate[1]};
    j["rabi"] = {{"rabi_rate_rad_per_s", c.rabi.rabi_rate},
                 {"addressed", index_of(c.rabi.addressed) + 1},
                 {"t_s", to_json(c.rabi.t)}};
    j["crosstalk"] = {{"n_values", c.crosstalk.n_values},
                      {"addressed", index_of(c.crosstalk.addressed) + 1},
                      {"mode", c.crosstalk.mode == CrosstalkMode::SingleIon ? "single-ion" : "two-ion"},
                      {"sequences_per_point", c.crosstalk.sequences_per_point}};
    j["parity_scan"] = {{"phi_rad", to_json(c.parity_scan.phi)}};
    j["cycle_bench"] = {{"m1", c.cycle_bench.m1},
                        {"m2", c.cycle_bench.m2},
                        {"randomizations", c.cycle_bench.randomizations},
                        {"bootstrap_resamples", c.cycle_bench.bootstrap_resamples}};
    nlohmann::json z = {{"dx_um", to_json(c.zeeman_sweep.dx)},
                        {"dy_um", to_json(c.zeeman_sweep.dy)},
                        {"level", c.zeeman_sweep.level},
                        {"model", to_json(c.zeeman_sweep.model)},
                        {"target_dx_um", c.zeeman_sweep.target_dx},
                        {"target_dy_um", c.zeeman_sweep.target_dy}};
    if (c.zeeman_sweep.target_fidelity) z["target_fidelity"] = *c.zeeman_sweep.target_fidelity;
    j["zeeman_sweep"] = z;
    j["transpile"] = {{"circuit", c.transpile.circuit}, {"circuit_file", c.transpile.circuit_file}};
    return j;
}

namespace {

nlohmann::json run_rabi(const RunConfig &c, const fs::path &out, RunReport &report) {
    Rng rng = derive_rng(c.seed, kRabiStream);
    const auto t = c.rabi.t.values();
    const RabiSeries s = rabi_flop_experiment(t, c.rabi.rabi_rate, c.noise, c.mode(), c.shots, rng, c.rabi.addressed);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        rows.push_back({format_number(s.t[i]), format_number(s.p2[i]), format_number(s.p1[i]), format_number(s.p0[i])});
    write_csv(out / "rabi.csv", {"t_s", "p2bright", "p1bright", "p0bright"}, rows);
    report.files.push_back(out / "rabi.csv");

    nlohmann::json a;
    try {
        const auto sigma = c.exact ? std::vector<double>{} : binomial_sigma(s.p2, c.shots);
        const SineFit fit = fit_sine(s.t, s.p2, sigma);
        a["sine_fit"] = {{"amplitude", fit.amplitude},
                         {"omega_rad_per_s", std::abs(fit.omega)},
                         {"sigma_omega_rad_per_s", fit.sigma_omega},
                         {"phase_rad", fit.phase},
                         {"offset", fit.offset},
                         {"fit", to_json(fit.fit)}};
    } catch (const Error &e) {
        a["sine_fit"] = {{"error", error_json(e)}};
    }
    auto times = [&](const std::vector<double> &y) {
        std::vector<double> v;
        for (auto i : local_maxima(y)) v.push_back(s.t[i]);
        return v;
    };
    a["p1bright_maxima_t_s"] = times(s.p1);
    a["p0bright_maxima_t_s"] = times(s.p0);
    return a;
}

nlohmann::json run_crosstalk(const RunConfig &c, const fs::path &out, RunReport &report) {
    Rng rng = derive_rng(c.seed, kCrosstalkStream);
    CrosstalkOptions opt;
    opt.addressed = c.crosstalk.addressed;
    opt.mode = c.crosstalk.mode;
    opt.sequences_per_point = c.crosstalk.sequences_per_point;
    opt.sim = c.mode();
    opt.timing = c.timing;
    const auto pts = run_crosstalk_experiment(c.crosstalk.n_values, c.shots, c.noise, rng, opt);

    std::vector<std::vector<std::string>> rows;
    std::vector<double> n, f, sigma;
    for (const auto &p : pts) {
        rows.push_back({std::to_string(p.n), format_number(p.f), format_number(p.sigma)});
        n.push_back(p.n);
        f.push_back(p.f);
        sigma.push_back(p.sigma > 0.0 ? p.sigma : 1e-6);
    }
    write_csv(out / "crosstalk.csv", {"N", "F", "sigma"}, rows);
    report.files.push_back(out / "crosstalk.csv");

    nlohmann::json a;
    try {
        const CrosstalkFit fit = fit_crosstalk_decay(n, f, sigma);
        a["fit"] = {{"p0", fit.p0},
                    {"sigma_p0", fit.sigma_p0},
                    {"C", fit.c},
                    {"sigma_C", fit.sigma_c},
                    {"p0_pinned", fit.p0_pinned},
                    {"C_pinned", fit.c_pinned},
                    {"fit", to_json(fit.fit)}};
    } catch (const Error &e) {
        a["fit"] = {{"error", error_json(e)}};
    }
    return a;
}

nlohmann::json run_parity(const RunConfig &c, const fs::path &out, RunReport &report) {
    Rng rng = derive_rng(c.seed, kParityStream);
    const auto grid = c.parity_scan.phi.values();
    nlohmann::json a;
    ParityScan scan;
    try {
        const PhaseCalibration cal = calibrate_phase_offset(grid, c.noise, c.mode(), c.shots, rng, c.timing);
        scan = cal.scan;
        a["crossing_phi_dds_rad"] = cal.crossing;
        a["phi_offset_rad"] = cal.phi_offset;
        a["sigma_rad"] = cal.sigma;
    } catch (const Error &e) {
        Rng again = derive_rng(c.seed, kParityStream);
        scan = parity_scan(grid, c.noise, c.mode(), c.shots, again, c.timing);
        a["error"] = error_json(e);
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < scan.phi_dds.size(); ++i)
        rows.push_back({format_number(scan.phi_dds[i]), format_number(scan.parity[i]), format_number(scan.sigma[i])});
    write_csv(out / "parity_scan.csv", {"phi_dds_rad", "parity", "sigma"}, rows);
    report.files.push_back(out / "parity_scan.csv");
    return a;
}

nlohmann::json run_cb(const RunConfig &c, const fs::path &out, RunReport &report) {
    const CBRun r = run_cycle_benchmark(c.cycle_bench, c.noise, c.mode(), c.shots, c.timing);
    std::vector<std::vector<std::string>> rows;
    for (const auto &[key, f] : r.result.f)
        rows.push_back({std::string(1, to_char(key.basis.first)), std::string(1, to_char(key.basis.second)),
                        std::to_string(key.m), std::to_string(key.l), format_number(f)});
    write_csv(out / "cycle_bench.csv", {"P1", "P2", "m", "l", "f"}, rows);
    write_json(out / "cb_circuits.json", to_json(r.circuits));
    report.files.push_back(out / "cycle_bench.csv");
    report.files.push_back(out / "cb_circuits.json");
    return {{"F", r.estimate.fidelity},
            {"sigma_F", r.estimate.sigma},
            {"per_basis", r.estimate.per_basis},
            {"warnings", r.estimate.warnings},
            {"result", to_json(r.result)}};
}

nlohmann::json run_zeeman(const RunConfig &c, const fs::path &out, RunReport &report) {
    const auto &z = c.zeeman_sweep;
    nlohmann::json a;
    ShiftModel model = z.model;
    if (z.target_fidelity) {
        const CBPipeline pipeline(c.cycle_bench, c.noise.phi_offset, c.timing);
        const double scale =
            find_shift_scale(model, pipeline, c.noise, z.target_dx, z.target_dy, *z.target_fidelity, 1.0);
        model = model.scaled(scale);
        a["scale_factor"] = scale;
        a["fidelity_at_target"] = pipeline.fidelity(model.apply(c.noise, z.target_dx, z.target_dy));
    }
    const auto dx = z.dx.values();
    const auto dy = z.dy.values();
    const ZeemanSweep sweep = zeeman_sweep(dx, dy, model, c.cycle_bench, c.noise, z.level, c.timing);

    std::vector<std::vector<std::string>> rows;
    nlohmann::json errors = nlohmann::json::array();
    for (const auto &p : sweep.points) {
        rows.push_back({format_number(p.dx), format_number(p.dy), format_number(p.fidelity)});
        if (p.error) errors.push_back({{"dx_um", p.dx}, {"dy_um", p.dy}, {"message", *p.error}});
    }
    write_csv(out / "zeeman_sweep.csv", {"dx_um", "dy_um", "F"}, rows);
    report.files.push_back(out / "zeeman_sweep.csv");

    nlohmann::json lines = nlohmann::json::array();
    for (const auto &line : sweep.contour.lines) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto &[x, y] : line) pts.push_back({x, y});
        lines.push_back(pts);
    }
    a["model"] = to_json(model);
    a["contour"] = {{"level", sweep.contour.level}, {"closed", sweep.contour.has_closed()}, {"lines", lines}};
    a["point_errors"] = errors;
    nlohmann::json warnings = nlohmann::json::array();
    if (c.cycle_bench.randomizations < 10)
        warnings.push_back("few randomizations: coherent shifts are poorly twirled and F may leave [0, 1]");
    for (const auto &p : sweep.points)
        if (p.fidelity > 1.0) {
            warnings.push_back("some sweep points have F > 1");
            break;
        }
    a["warnings"] = warnings;
    return a;
}

nlohmann::json run_transpile(const RunConfig &c, const fs::path &out, RunReport &report) {
    std::string text = c.transpile.circuit;
    if (!c.transpile.circuit_file.empty()) {
        fs::path p = c.transpile.circuit_file;
        if (p.is_relative()) p = c.base_dir / p;
        text = read_text_file(p);
    }
    const Circuit circuit = parse_circuit(text);
    const NativeProgram lowered = lower(circuit, c.noise.phi_offset);
    const NativeProgram minimized = minimize_transports(lowered);
    nlohmann::json program = {{"lowered", to_json(lowered)}, {"minimized", to_json(minimized)}};
    write_json(out / "program.json", program);
    report.files.push_back(out / "program.json");
    return {{"transports_before", lowered.transport_count()},
            {"transports_after", minimized.transport_count()},
            {"duration_before_s", schedule_duration(lowered, c.timing.rabi_rate)},
            {"duration_after_s", schedule_duration(minimized, c.timing.rabi_rate)}};
}

}  // namespace

RunReport run(const RunConfig &config, const fs::path &out_dir) {
    config.noise.validate();
    config.cycle_bench.validate();
    fs::create_directories(out_dir);

    nlohmann::json manifest;
    manifest["tool"] = "ionreg";
    manifest["experiment"] = to_string(config.experiment);
    manifest["seed"] = config.seed;
    manifest["rng_algorithm"] = std::string(kRngAlgorithm);
    manifest["config"] = to_json(config);
    write_json(out_dir / "manifest.json", manifest);

    RunReport report;
    report.files.push_back(out_dir / "manifest.json");
    nlohmann::json analysis;
    switch (config.experiment) {
        case Experiment::Rabi: analysis = run_rabi(config, out_dir, report); break;
        case Experiment::Crosstalk: analysis = run_crosstalk(config, out_dir, report); break;
        case Experiment::ParityScan: analysis = run_parity(config, out_dir, report); break;
        case Experiment::CycleBench: analysis = run_cb(config, out_dir, report); break;
        case Experiment::ZeemanSweep: analysis = run_zeeman(config, out_dir, report); break;
        case Experiment::Transpile: analysis = run_transpile(config, out_dir, report); break;
    }
    analysis["experiment"] = to_string(config.experiment);
    write_json(out_dir / "analysis.json", analysis);
    report.files.push_back(out_dir / "analysis.json");
    report.analysis = std::move(analysis);
    return report;
}

}  // namespace ionreg
