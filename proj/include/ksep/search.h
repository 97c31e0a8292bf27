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

#ifndef KSEP_SEARCH_H
#define KSEP_SEARCH_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ksep/criterion.h"
#include "ksep/states.h"

namespace ksep {

struct SearchConfig {
    int restarts = 32;
    int max_iters = 500;
    double step_init = 0.3;
    double step_decay = 0.97;
    std::uint64_t seed = 0;
    double convergence_eps = 1e-10;
    double tolerance = kDefaultCriterionTolerance;

    /// Throws ParameterError unless every field is positive and step_decay < 1.
    void validate() const;
    nlohmann::json to_json() const;
};

/// u = all |0>, v = all |d_m - 1>.
struct GhzPair {};
/// Sitewise random unit vectors from the seeded generator.
struct RandomProbe {
    std::uint64_t seed = 0;
};
/// Computational basis states; indices are flat (big-endian) basis labels.
struct BasisPair {
    std::size_t first = 0;
    std::size_t second = 0;
};
using ProbeStyle = std::variant<GhzPair, RandomProbe, BasisPair>;

/// Throws ParameterError on invalid dims or out-of-range basis indices.
ProductProbe canonical_probe(const ProbeStyle &style, const Dims &dims);

/// Random probe drawn from an existing generator stream.
ProductProbe random_probe(const Dims &dims, Rng &rng);

struct SearchResult {
    CriterionReport best;
    int best_restart = 0;
    std::size_t evaluations = 0;
    /// Best lhs of every restart, in restart order.
    std::vector<double> restart_best;
    /// Best-so-far lhs after every iteration, per restart (when requested).
    std::vector<std::vector<double>> traces;

    nlohmann::json to_json() const;
};

struct SearchHooks {
    bool record_traces = false;
    /// Called with every probe the search evaluates. Invoked concurrently
    /// when restarts run on several threads.
    std::function<void(const ProductProbe &)> on_probe;
};

/// Maximizes the criterion left-hand side over fully separable probes by
/// stochastic hill climbing with restarts. Restart 0 starts from GhzPair,
/// restart 1 from a single-excitation BasisPair, the rest from random
/// probes. Restart r draws from its own generator seeded with seed ^ r, and
/// ties are broken towards the lowest restart, so the result does not
/// depend on `threads`.
SearchResult optimize_probe(const DensityMatrix &rho, int k, const SearchConfig &cfg, int threads = 0,
                            const SearchHooks &hooks = {});

enum class ScanMode { Auto, Bisection, DenseGrid };

struct ScanSample {
    double p;
    double lhs;
    bool detected;
    std::string phase;  ///< "grid", "bisect" or "dense"
};

struct NoiseScanResult {
    double p_star = 1;
    double p_lo = 1;
    double p_hi = 1;
    bool grid_fallback = false;
    /// Number of noise levels at which the probe search was run.
    int evaluations = 0;
    ProductProbe probe_at_threshold;
    std::vector<ScanSample> trace;

    /// No grid point was detected, including p = 1.
    bool never_detected = false;
    nlohmann::json to_json() const;
};

/// Number of coarse grid points (spacing 1/16) tried before refinement.
inline constexpr int kCoarseGridPoints = 17;

/// Smallest mixing weight p at which the optimized criterion detects
/// white_noise(target, p). The coarse grid picks a bracket that is refined by
/// bisection down to `resolution`; if the grid shows a detected p below an
/// undetected one, Auto falls back to a dense grid of that spacing. A target
/// that is never detected reports p_star = 1 with bracket (1, 1).
NoiseScanResult scan_noise(const DensityMatrix &target, int k, double resolution, const SearchConfig &cfg,
                           ScanMode mode = ScanMode::Auto, int threads = 0);

}  // namespace ksep

#endif
