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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ksep/criterion.h"
#include "ksep/oracle.h"
#include "ksep/partitions.h"
#include "ksep/search.h"
#include "ksep/states.h"
#include "test_util.h"

using namespace ksep;
using ksep::testing::random_block_product;
using ksep::testing::random_dims;
using ksep::testing::random_kpartition;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed;
    std::string detail;
};

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Fast path vs explicit two-copy operators.
Outcome oracle_equivalence() {
    auto start = Clock::now();
    Rng rng(1001);
    double max_term = 0, max_lhs = 0;
    std::size_t compared = 0;
    for (int c = 0; c < 500; c++) {
        int n = 2 + c % 2;
        auto dims = random_dims(n, 3, rng);
        auto rho = random_density(dims, rng, 1 + c % static_cast<int>(total_dimension(dims)));
        auto probe = random_probe(dims, rng);
        for (int k = 1; k <= n; k++) {
            auto fast = evaluate(rho, probe, k);
            auto slow = oracle::oracle_evaluate(rho, probe, k);
            max_lhs = std::max(max_lhs, std::abs(fast.lhs - slow.lhs));
            for (std::size_t p = 0; p < fast.partition_terms.size(); p++) {
                max_term = std::max(max_term, std::abs(fast.partition_terms[p].value - slow.partition_terms[p].value));
                compared++;
            }
        }
    }
    double t = seconds_since(start);
    return {max_term < 1e-10 && max_lhs < 1e-10 && t < 60,
            fmt("500 cases, %zu partition terms; max |term diff| = %.2e, max |lhs diff| = %.2e (< 1e-10); %.1f s (< 60 s)",
                compared, max_term, max_lhs, t)};
}

// 2. No violation on fully separable states, random and optimized probes.
Outcome soundness() {
    auto start = Clock::now();
    Rng rng(2002);
    std::uniform_int_distribution<int> terms_dist(1, 20);
    std::uniform_real_distribution<double> weight_dist(0.05, 1.0);
    double worst = -1e300;
    long probes = 0;
    int optimized = 0;
    for (int s = 0; s < 200; s++) {
        int n = 3 + s % 2;
        Dims dims(n, 2);
        int terms = terms_dist(rng);
        std::vector<double> w(terms);
        double total = 0;
        for (auto &x : w) {
            x = weight_dist(rng);
            total += x;
        }
        std::vector<std::pair<double, DensityMatrix>> parts;
        for (int t = 0; t < terms; t++) {
            auto f = random_product_factors(dims, rng);
            parts.emplace_back(w[t] / total, product_pure(f).density());
        }
        auto rho = mix(parts);
        for (int k = 2; k <= n; k++) {
            CriterionEvaluator ev(rho, k);
            for (int p = 0; p < 1000; p++) {
                worst = std::max(worst, ev.lhs(random_probe(dims, rng)));
                probes++;
            }
            SearchConfig cfg;
            cfg.seed = 7000 + s;
            worst = std::max(worst, optimize_probe(rho, k, cfg, 0).best.lhs);
            optimized++;
        }
    }
    double t = seconds_since(start);
    return {worst <= 1e-9 && t < 300,
            fmt("200 states, %ld random probes, %d optimized searches; max lhs = %.3e (<= 1e-9); %.1f s (< 300 s)",
                probes, optimized, worst, t)};
}

// 3. GHZ_n with the GHZ pair probe.
Outcome ghz_detection() {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 5; n++) {
        auto rho = ghz(n).density();
        auto report = evaluate(rho, canonical_probe(GhzPair{}, Dims(n, 2)), 2);
        bool good = std::abs(report.lhs - 0.5) <= 1e-12 && report.verdict == Verdict::NotKSeparable;
        if (n <= 3) {
            auto slow = oracle::oracle_evaluate(rho, report.probe, 2);
            good = good && std::abs(slow.lhs - 0.5) <= 1e-12;
        }
        ok = ok && good;
        detail += fmt("n=%d lhs=%.17g %s; ", n, report.lhs, to_string(report.verdict).c_str());
    }
    return {ok, detail + "(|lhs - 0.5| <= 1e-12, not_k_separable)"};
}

// 4. k = 1 reduces to Cauchy-Schwarz.
Outcome k1_cauchy_schwarz() {
    Rng rng(4004);
    double worst = -1e300;
    for (int c = 0; c < 1000; c++) {
        int n = 1 + c % 3;
        auto dims = random_dims(n, 3, rng);
        auto rho = random_density(dims, rng, 1 + c % 4);
        worst = std::max(worst, evaluate(rho, random_probe(dims, rng), 1).lhs);
    }
    return {worst <= 1e-12, fmt("1000 states; max lhs = %.3e (<= 1e-12)", worst)};
}

// 5. Convexity of the left-hand side in the state.
Outcome convexity() {
    Rng rng(5005);
    double worst_gap = -1e300;
    int checks = 0;
    for (int c = 0; c < 200; c++) {
        int n = 2 + c % 2;
        auto dims = random_dims(n, 2 + c % 2, rng);
        int D = static_cast<int>(total_dimension(dims));
        auto r1 = c % 3 == 0 ? ghz(n).density() : random_density(dims, rng, 1 + c % D);
        if (r1.dims() != dims) {
            dims = r1.dims();
        }
        auto r2 = random_density(dims, rng, 1 + (c / 2) % 3);
        auto probe = c % 3 == 0 ? canonical_probe(GhzPair{}, dims) : random_probe(dims, rng);
        int k = 1 + c % n;
        double l1 = evaluate(r1, probe, k).lhs;
        double l2 = evaluate(r2, probe, k).lhs;
        for (int step = 1; step <= 9; step++) {
            double lam = step / 10.0;
            std::vector<std::pair<double, DensityMatrix>> parts{{lam, r1}, {1 - lam, r2}};
            double mixed = evaluate(mix(parts), probe, k).lhs;
            worst_gap = std::max(worst_gap, mixed - (lam * l1 + (1 - lam) * l2));
            checks++;
        }
    }
    return {worst_gap <= 1e-10, fmt("%d checks; max lhs(mix) - chord = %.3e (<= 1e-10)", checks, worst_gap)};
}

// 6. First term equals the separating partition's term for block-product pure states.
Outcome pure_cancellation() {
    Rng rng(6006);
    double worst = 0;
    for (int c = 0; c < 200; c++) {
        int n = 2 + c % 3;
        auto dims = random_dims(n, 3, rng);
        int k = 1 + (c / 3) % n;
        auto alpha = random_kpartition(n, k, rng);
        auto rho = random_block_product(dims, alpha, rng).density();
        auto probe = random_probe(dims, rng);
        worst = std::max(worst, std::abs(first_term(rho, probe) - partition_term(rho, probe, alpha)));
    }
    return {worst <= 1e-10, fmt("200 states; max |first - term(alpha)| = %.3e (<= 1e-10)", worst)};
}

// 7. Enumeration counts against brute-force filtering of all strings with
// s[m] <= m (a superset of restricted growth strings).
Outcome partition_counts() {
    bool ok = true;
    for (int n = 1; n <= 10; n++) {
        std::vector<std::uint64_t> brute(n + 1, 0);
        std::vector<int> s(n, 0);
        while (true) {
            int mx = -1;
            bool valid = true;
            for (int m = 0; m < n && valid; m++) {
                valid = s[m] <= mx + 1;
                mx = std::max(mx, s[m]);
            }
            if (valid) {
                brute[mx + 1]++;
            }
            int pos = n - 1;
            while (pos >= 0 && ++s[pos] > pos) {
                s[pos--] = 0;
            }
            if (pos < 0) {
                break;
            }
        }
        for (int k = 1; k <= n; k++) {
            std::uint64_t got = 0;
            KPartitionGenerator gen(n, k);
            while (gen.next()) {
                got++;
            }
            ok = ok && got == brute[k] && got == stirling2(n, k);
        }
    }
    bool spots = enumerate_kpartitions(3, 2).size() == 3 && enumerate_kpartitions(4, 2).size() == 7 &&
                 enumerate_kpartitions(4, 3).size() == 6 && enumerate_kpartitions(5, 2).size() == 15;
    return {ok && spots, fmt("all n <= 10, k <= n match brute force; S(3,2)=%zu S(4,2)=%zu S(4,3)=%zu S(5,2)=%zu",
                             enumerate_kpartitions(3, 2).size(), enumerate_kpartitions(4, 2).size(),
                             enumerate_kpartitions(4, 3).size(), enumerate_kpartitions(5, 2).size())};
}

// 8. Bisection and dense grid agree; reruns are exact.
Outcome noise_threshold() {
    auto start = Clock::now();
    auto target = ghz(3).density();
    SearchConfig cfg;
    cfg.seed = 8008;
    auto bisect = scan_noise(target, 2, 1e-3, cfg, ScanMode::Bisection, 0);
    auto again = scan_noise(target, 2, 1e-3, cfg, ScanMode::Bisection, 0);
    auto dense = scan_noise(target, 2, 1e-3, cfg, ScanMode::DenseGrid, 0);
    bool agree = std::abs(bisect.p_star - dense.p_star) <= 1e-3;
    bool repeat = bisect.p_star == again.p_star && bisect.p_lo == again.p_lo && bisect.p_hi == again.p_hi;
    bool width = bisect.p_hi - bisect.p_lo <= 1e-3 && dense.p_hi - dense.p_lo <= 1e-3;
    return {agree && repeat && width && !bisect.never_detected,
            fmt("bisection p* = %.6f [%.6f, %.6f], dense p* = %.6f; |diff| = %.2e (<= 1e-3); rerun %s; %.1f s",
                bisect.p_star, bisect.p_lo, bisect.p_hi, dense.p_star, std::abs(bisect.p_star - dense.p_star),
                repeat ? "identical" : "DIFFERENT", seconds_since(start))};
}

// 9. Parallel paths reproduce serial results bit for bit.
Outcome determinism() {
    auto start = Clock::now();
    Rng rng(9009);
    Dims dims(10, 2);
    auto rho = random_density(dims, rng, 4);
    auto probe = random_probe(dims, rng);
    auto serial = evaluate(rho, probe, 2);
    auto parallel = evaluate_parallel(rho, probe, 2, kDefaultCriterionTolerance, 4);
    bool same_eval = serial.lhs == parallel.lhs && serial.partition_terms.size() == 511 &&
                     parallel.partition_terms.size() == 511;
    for (std::size_t p = 0; same_eval && p < serial.partition_terms.size(); p++) {
        same_eval = serial.partition_terms[p].value == parallel.partition_terms[p].value;
    }

    auto small = random_density({2, 2, 2, 2}, rng, 3);
    SearchConfig cfg;
    cfg.seed = 99;
    auto one = optimize_probe(small, 2, cfg, 1);
    auto many = optimize_probe(small, 2, cfg, 4);
    bool same_search = one.best.to_json() == many.best.to_json() && one.restart_best == many.restart_best &&
                       one.best_restart == many.best_restart;
    return {same_eval && same_search,
            fmt("n=10 k=2: 511 terms, lhs serial %.17g vs parallel %.17g; optimize_probe 1 vs 4 threads %s; %.1f s",
                serial.lhs, parallel.lhs, same_search ? "identical" : "DIFFERENT", seconds_since(start))};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"C1 oracle equivalence", oracle_equivalence},
        {"C2 soundness on separable states", soundness},
        {"C3 GHZ detection", ghz_detection},
        {"C4 k=1 Cauchy-Schwarz", k1_cauchy_schwarz},
        {"C5 convexity", convexity},
        {"C6 pure-state cancellation", pure_cancellation},
        {"C7 partition combinatorics", partition_counts},
        {"C8 noise threshold self-consistency", noise_threshold},
        {"C9 determinism and parallel equivalence", determinism},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
