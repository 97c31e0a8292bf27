// Copyright 2026 The ksep Authors
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

#include "ksep/search.h"

#include <cmath>
#include <optional>

#include "ksep/errors.h"
#include "ksep/parallel.h"

namespace ksep {

namespace {

ComplexVec basis_vector(int d, int i) {
    ComplexVec v(d);
    v[i] = 1.0;
    return v;
}

/// Single excitations on the last two sites: |0..01> and |0..010>.
ProductProbe excitation_pair(const Dims &dims) {
    std::size_t D = total_dimension(dims);
    std::size_t second = dims.size() >= 2 ? static_cast<std::size_t>(dims.back()) : 0;
    return canonical_probe(BasisPair{1 % D, second}, dims);
}

ProductProbe perturb(const ProductProbe &probe, double step, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, step);
    ProductProbe out = probe;
    for (auto *copy : {&out.u, &out.v}) {
        for (auto &factor : *copy) {
            for (auto &z : factor) {
                double re = gauss(rng);
                double im = gauss(rng);
                z += Complex(re, im);
            }
            factor = normalized(factor);
        }
    }
    return out;
}

struct RestartOutcome {
    ProductProbe probe;
    double lhs = 0;
    std::size_t evaluations = 0;
    std::vector<double> trace;
};

RestartOutcome run_restart(const CriterionEvaluator &evaluator, const Dims &dims, const SearchConfig &cfg, int r,
                           const SearchHooks &hooks) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(r));
    RestartOutcome out;
    if (r == 0) {
        out.probe = canonical_probe(GhzPair{}, dims);
    } else if (r == 1) {
        out.probe = excitation_pair(dims);
    } else {
        out.probe = random_probe(dims, rng);
    }
    if (hooks.on_probe) {
        hooks.on_probe(out.probe);
    }
    out.lhs = evaluator.lhs(out.probe);
    out.evaluations = 1;

    double step = cfg.step_init;
    for (int it = 0; it < cfg.max_iters && step >= cfg.convergence_eps; it++) {
        ProductProbe candidate = perturb(out.probe, step, rng);
        if (hooks.on_probe) {
            hooks.on_probe(candidate);
        }
        double value = evaluator.lhs(candidate);
        out.evaluations++;
        if (value > out.lhs) {
            out.lhs = value;
            out.probe = std::move(candidate);
        }
        if (hooks.record_traces) {
            out.trace.push_back(out.lhs);
        }
        step *= cfg.step_decay;
    }
    return out;
}

}  // namespace

void SearchConfig::validate() const {
    if (restarts < 1 || max_iters < 1) {
        throw ParameterError("search: restarts and max_iters must be positive");
    }
    if (!(step_init > 0) || !std::isfinite(step_init)) {
        throw ParameterError("search: step_init must be positive");
    }
    if (!(step_decay > 0 && step_decay < 1)) {
        throw ParameterError("search: step_decay must lie in (0, 1)");
    }
    if (!(convergence_eps > 0)) {
        throw ParameterError("search: convergence_eps must be positive");
    }
    if (!(tolerance > 0)) {
        throw ParameterError("search: tolerance must be positive");
    }
}

nlohmann::json SearchConfig::to_json() const {
    return {{"restarts", restarts},
            {"max_iters", max_iters},
            {"step_init", step_init},
            {"step_decay", step_decay},
            {"seed", seed},
            {"convergence_eps", convergence_eps},
            {"tolerance", tolerance}};
}

ProductProbe random_probe(const Dims &dims, Rng &rng) {
    total_dimension(dims);
    ProductProbe p;
    p.u = random_product_factors(dims, rng);
    p.v = random_product_factors(dims, rng);
    return p;
}

ProductProbe canonical_probe(const ProbeStyle &style, const Dims &dims) {
    const std::size_t D = total_dimension(dims);
    if (dims.empty()) {
        throw ParameterError("canonical_probe: no sites");
    }
    if (const auto *rp = std::get_if<RandomProbe>(&style)) {
        Rng rng(rp->seed);
        return random_probe(dims, rng);
    }
    std::size_t first = 0;
    std::size_t second = D - 1;
    if (const auto *bp = std::get_if<BasisPair>(&style)) {
        if (bp->first >= D || bp->second >= D) {
            throw ParameterError("canonical_probe: basis index out of range for dimension " + std::to_string(D));
        }
        first = bp->first;
        second = bp->second;
    }
    auto a = index_to_digits(first, dims);
    auto b = index_to_digits(second, dims);
    ProductProbe p;
    for (std::size_t m = 0; m < dims.size(); m++) {
        p.u.push_back(basis_vector(dims[m], a[m]));
        p.v.push_back(basis_vector(dims[m], b[m]));
    }
    return p;
}

nlohmann::json SearchResult::to_json() const {
    return {{"report", best.to_json()},
            {"best_restart", best_restart},
            {"evaluations", evaluations},
            {"restart_best", restart_best}};
}

SearchResult optimize_probe(const DensityMatrix &rho, int k, const SearchConfig &cfg, int threads,
                            const SearchHooks &hooks) {
    cfg.validate();
    CriterionEvaluator evaluator(rho, k);
    std::vector<RestartOutcome> outcomes(cfg.restarts);
    parallel_for(outcomes.size(), threads, [&](std::size_t r) {
        outcomes[r] = run_restart(evaluator, rho.dims(), cfg, static_cast<int>(r), hooks);
    });

    SearchResult result;
    for (std::size_t r = 0; r < outcomes.size(); r++) {
        result.evaluations += outcomes[r].evaluations;
        result.restart_best.push_back(outcomes[r].lhs);
        if (outcomes[r].lhs > outcomes[result.best_restart].lhs) {
            result.best_restart = static_cast<int>(r);
        }
        if (hooks.record_traces) {
            result.traces.push_back(std::move(outcomes[r].trace));
        }
    }
    result.best = evaluator.report(outcomes[result.best_restart].probe, cfg.tolerance, 1);
    return result;
}

nlohmann::json NoiseScanResult::to_json() const {
    return {{"p_star", p_star},
            {"bracket", {p_lo, p_hi}},
            {"grid_fallback", grid_fallback},
            {"never_detected", never_detected},
            {"evaluations", evaluations},
            {"probe_at_threshold", probe_at_threshold.to_json()}};
}

NoiseScanResult scan_noise(const DensityMatrix &target, int k, double resolution, const SearchConfig &cfg,
                           ScanMode mode, int threads) {
    if (!(resolution > 0) || !(resolution <= 1)) {
        throw ParameterError("scan: resolution must lie in (0, 1]");
    }
    if (k < 1 || k > target.sites()) {
        throw ParameterError("scan: k out of range");
    }
    cfg.validate();

    NoiseScanResult result;
    auto probe_at = [&](double p, const char *phase) {
        auto found = optimize_probe(white_noise(target, p), k, cfg, threads);
        bool detected = found.best.verdict == Verdict::NotKSeparable;
        result.evaluations++;
        result.trace.push_back({p, found.best.lhs, detected, phase});
        return std::make_pair(detected, found.best.probe);
    };

    std::vector<double> grid(kCoarseGridPoints);
    std::vector<bool> detected(kCoarseGridPoints);
    std::vector<ProductProbe> probes(kCoarseGridPoints);
    for (int i = 0; i < kCoarseGridPoints; i++) {
        grid[i] = static_cast<double>(i) / (kCoarseGridPoints - 1);
        auto [hit, probe] = probe_at(grid[i], "grid");
        detected[i] = hit;
        probes[i] = std::move(probe);
    }

    std::optional<int> first_hit;
    bool non_monotone = false;
    for (int i = 0; i < kCoarseGridPoints; i++) {
        if (detected[i] && !first_hit) {
            first_hit = i;
        }
        if (!detected[i] && first_hit) {
            non_monotone = true;
        }
    }

    if (!first_hit) {
        result.never_detected = true;
        result.p_star = result.p_lo = result.p_hi = 1;
        result.probe_at_threshold = probes.back();
        return result;
    }

    bool dense = mode == ScanMode::DenseGrid || (mode == ScanMode::Auto && non_monotone);
    result.grid_fallback = dense;

    if (dense) {
        // Spacing strictly below the resolution: with exactly 1/resolution
        // steps, j/steps - (j-1)/steps can round to just above it.
        const auto steps = static_cast<long>(std::floor(1.0 / resolution)) + 1;
        for (long j = 0; j <= steps; j++) {
            double p = static_cast<double>(j) / static_cast<double>(steps);
            auto [hit, probe] = probe_at(p, "dense");
            if (hit) {
                result.p_star = result.p_hi = p;
                result.p_lo = j == 0 ? p : static_cast<double>(j - 1) / static_cast<double>(steps);
                result.probe_at_threshold = std::move(probe);
                return result;
            }
        }
        // The coarse grid hit is not reproduced on the dense grid only if it
        // fell between dense points; report the coarse hit itself.
        result.p_star = result.p_lo = result.p_hi = grid[*first_hit];
        result.probe_at_threshold = probes[*first_hit];
        return result;
    }

    if (*first_hit == 0) {
        result.p_star = result.p_lo = result.p_hi = 0;
        result.probe_at_threshold = probes[0];
        return result;
    }
    double lo = grid[*first_hit - 1];
    double hi = grid[*first_hit];
    ProductProbe hi_probe = probes[*first_hit];
    while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        auto [hit, probe] = probe_at(mid, "bisect");
        if (hit) {
            hi = mid;
            hi_probe = std::move(probe);
        } else {
            lo = mid;
        }
    }
    result.p_star = hi;
    result.p_lo = lo;
    result.p_hi = hi;
    result.probe_at_threshold = std::move(hi_probe);
    return result;
}

}  // namespace ksep
