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

#include "ionreg/zeeman.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ionreg/errors.hpp"
#include "ionreg/json_fields.hpp"

namespace ionreg {

namespace {
const char *kModelFields[2][2] = {{"delta_1_1", "delta_1_2"}, {"delta_2_1", "delta_2_2"}};
const char *kPolyFields[6] = {"c0", "cx", "cy", "cxx", "cyy", "cxy"};

double *coefficient(ShiftPolynomial &p, int i) {
    double *fields[6] = {&p.c0, &p.cx, &p.cy, &p.cxx, &p.cyy, &p.cxy};
    return fields[i];
}
}  // namespace

NoiseConfig ShiftModel::apply(const NoiseConfig &base, double dx, double dy) const {
    NoiseConfig out = base;
    for (int k = 0; k < 2; ++k) {
        for (int m = 0; m < 2; ++m) {
            const double v = scale * shift[k][m](dx, dy);
            if (!std::isfinite(v))
                fail(ErrorKind::Validation, std::string("shift model ") + kModelFields[k][m] + " is not finite at (" +
                                                std::to_string(dx) + ", " + std::to_string(dy) + ")");
            out.zeeman_shift[k][m] = v;
        }
    }
    return out;
}

nlohmann::json to_json(const ShiftModel &model) {
    nlohmann::json j;
    j["scale"] = model.scale;
    for (int k = 0; k < 2; ++k) {
        for (int m = 0; m < 2; ++m) {
            nlohmann::json p;
            ShiftPolynomial poly = model.shift[k][m];
            for (int i = 0; i < 6; ++i) p[kPolyFields[i]] = *coefficient(poly, i);
            j[kModelFields[k][m]] = p;
        }
    }
    return j;
}

ShiftModel shift_model_from_json(const nlohmann::json &j, const std::string &path, std::vector<std::string> &violations) {
    ShiftModel model;
    FieldReader r(j, path, violations);
    if (!r.ok()) return model;
    model.scale = r.number("scale", 1.0);
    for (int k = 0; k < 2; ++k) {
        for (int m = 0; m < 2; ++m) {
            const auto &sub = r.object(kModelFields[k][m]);
            if (sub.is_null()) continue;
            FieldReader pr(sub, r.field_path(kModelFields[k][m]), violations);
            for (int i = 0; i < 6; ++i) *coefficient(model.shift[k][m], i) = pr.number(kPolyFields[i], 0.0);
            pr.reject_unknown();
        }
    }
    r.reject_unknown();
    return model;
}

CBPipeline::CBPipeline(const CBConfig &config, double phi_offset, const PulseTiming &timing)
    : config_(config), timing_(timing) {
    Rng rng = derive_rng(config.seed, 0);
    circuits_ = generate_cb_circuits(config, rng);
    programs_ = compile_cb_circuits(circuits_, phi_offset);
}

double CBPipeline::fidelity(const NoiseConfig &noise) const {
    const CBResult result = measure_cb(circuits_, programs_, config_, noise, SimMode::Exact, 0, timing_);
    return estimate_composite_fidelity(result, config_).fidelity;
}

bool Contour::has_closed() const {
    for (const auto &line : lines) {
        if (line.size() < 4) continue;
        const auto &a = line.front();
        const auto &b = line.back();
        if (std::abs(a.first - b.first) < 1e-12 && std::abs(a.second - b.second) < 1e-12) return true;
    }
    return false;
}

Contour extract_contour(std::span<const double> dx, std::span<const double> dy, std::span<const double> field,
                        double level) {
    const std::size_t nx = dx.size(), ny = dy.size();
    if (field.size() != nx * ny) fail(ErrorKind::Validation, "extract_contour: field size mismatch");
    Contour contour;
    contour.level = level;
    if (nx < 2 || ny < 2) return contour;

    // Crossing points live on grid edges, identified so that segments from
    // neighbouring cells share endpoints exactly.
    using EdgeId = std::pair<std::size_t, int>;  // (lower-left node index, 0 = horizontal, 1 = vertical)
    std::map<EdgeId, std::pair<double, double>> points;
    auto value = [&](std::size_t i, std::size_t j) { return field[j * nx + i]; };
    auto edge_point = [&](std::size_t i, std::size_t j, int dir) {
        const EdgeId id{j * nx + i, dir};
        if (auto it = points.find(id); it != points.end()) return id;
        const std::size_t i2 = dir == 0 ? i + 1 : i;
        const std::size_t j2 = dir == 0 ? j : j + 1;
        const double a = value(i, j), b = value(i2, j2);
        const double s = (a == b) ? 0.5 : (level - a) / (b - a);
        points[id] = {dx[i] + s * (dx[i2] - dx[i]), dy[j] + s * (dy[j2] - dy[j])};
        return id;
    };

    std::vector<std::pair<EdgeId, EdgeId>> segments;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double v[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
            bool skip = false;
            for (double x : v) skip = skip || !std::isfinite(x);
            if (skip) continue;
            int mask = 0;
            for (int c = 0; c < 4; ++c)
                if (v[c] >= level) mask |= 1 << c;
            if (mask == 0 || mask == 15) continue;
            // Edges: bottom (i,j,h), right (i+1,j,v), top (i,j+1,h), left (i,j,v).
            const EdgeId bottom = edge_point(i, j, 0), right = edge_point(i + 1, j, 1);
            const EdgeId top = edge_point(i, j + 1, 0), left = edge_point(i, j, 1);
            auto crosses = [&](int a, int b) { return ((mask >> a) & 1) != ((mask >> b) & 1); };
            std::vector<EdgeId> hit;
            if (crosses(0, 1)) hit.push_back(bottom);
            if (crosses(1, 2)) hit.push_back(right);
            if (crosses(2, 3)) hit.push_back(top);
            if (crosses(3, 0)) hit.push_back(left);
            if (hit.size() == 2) {
                segments.emplace_back(hit[0], hit[1]);
            } else if (hit.size() == 4) {
                // Saddle: resolve with the cell-centre average.
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                const bool corner0_high = (mask & 1) != 0;
                if ((centre >= level) == corner0_high) {
                    segments.emplace_back(bottom, right);
                    segments.emplace_back(top, left);
                } else {
                    segments.emplace_back(bottom, left);
                    segments.emplace_back(right, top);
                }
            }
        }
    }

    // Chain segments into polylines.
    std::multimap<EdgeId, std::size_t> by_end;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_end.emplace(segments[s].first, s);
        by_end.emplace(segments[s].second, s);
    }
    std::vector<bool> used(segments.size(), false);
    auto next_segment = [&](const EdgeId &at) -> std::optional<std::size_t> {
        auto [lo, hi] = by_end.equal_range(at);
        for (auto it = lo; it != hi; ++it)
            if (!used[it->second]) return it->second;
        return std::nullopt;
    };
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<EdgeId> chain{segments[s].first, segments[s].second};
        // Extend forwards, then backwards.
        for (int pass = 0; pass < 2; ++pass) {
            while (true) {
                const EdgeId tail = chain.back();
                const auto n = next_segment(tail);
                if (!n) break;
                used[*n] = true;
                chain.push_back(segments[*n].first == tail ? segments[*n].second : segments[*n].first);
                if (chain.back() == chain.front()) break;
            }
            if (chain.back() == chain.front()) break;
            std::reverse(chain.begin(), chain.end());
        }
        Polyline line;
        for (const auto &id : chain) line.push_back(points.at(id));
        contour.lines.push_back(std::move(line));
    }
    return contour;
}

ZeemanSweep zeeman_sweep(std::span<const double> dx, std::span<const double> dy, const ShiftModel &model,
                         const CBConfig &cb, const NoiseConfig &base, double level, const PulseTiming &timing) {
    const CBPipeline pipeline(cb, base.phi_offset, timing);
    ZeemanSweep sweep;
    sweep.dx.assign(dx.begin(), dx.end());
    sweep.dy.assign(dy.begin(), dy.end());
    std::vector<double> field;
    for (double y : dy) {
        for (double x : dx) {
            SweepPoint pt{x, y, std::nan(""), std::nullopt};
            try {
                pt.fidelity = pipeline.fidelity(model.apply(base, x, y));
            } catch (const Error &e) {
                pt.error = e.what();
            }
            field.push_back(pt.fidelity);
            sweep.points.push_back(std::move(pt));
        }
    }
    sweep.contour = extract_contour(dx, dy, field, level);
    return sweep;
}

double find_shift_scale(const ShiftModel &model, const CBPipeline &pipeline, const NoiseConfig &base, double dx,
                        double dy, double target, double initial_scale, int iterations) {
    auto fidelity_at = [&](double s) { return pipeline.fidelity(model.scaled(s).apply(base, dx, dy)); };
    if (fidelity_at(0.0) < target) fail(ErrorKind::Validation, "target fidelity is above the shift-free fidelity");
    // Coherent shifts wrap around, so F is not monotonic in the scale. Grow
    // slowly so the bracket holds the first crossing, not a later one.
    double lo = 0.0, hi = initial_scale;
    for (int k = 0; fidelity_at(hi) >= target; ++k) {
        if (k > 400) fail(ErrorKind::Validation, "could not bracket the target fidelity");
        lo = hi;
        hi *= 1.1;
    }
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        (fidelity_at(mid) >= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ionreg
