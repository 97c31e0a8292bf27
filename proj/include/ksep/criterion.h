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

#ifndef KSEP_CRITERION_H
#define KSEP_CRITERION_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ksep/linalg.h"
#include "ksep/partitions.h"
#include "ksep/states.h"

namespace ksep {

/// One-sided verdict threshold shared by evaluation and search.
inline constexpr double kDefaultCriterionTolerance = 1e-9;

/// Diagonal elements in [-kDiagonalClamp, 0) are treated as zero rounding.
inline constexpr double kDiagonalClamp = 1e-12;

/// Fully separable two-copy probe |phi1> (x) |phi2>, with
/// |phi1> = u[0] (x) ... (x) u[n-1] and |phi2> = v[0] (x) ... (x) v[n-1].
struct ProductProbe {
    std::vector<ComplexVec> u;
    std::vector<ComplexVec> v;

    int sites() const { return static_cast<int>(u.size()); }
    Dims dims() const;

    /// Throws DimensionError if the shapes disagree with `dims`,
    /// NormalizationError if any factor is not unit norm within 1e-12.
    void validate(const Dims &dims) const;

    ComplexVec phi1() const { return kron_all(u); }
    ComplexVec phi2() const { return kron_all(v); }

    nlohmann::json to_json() const;
    static ProductProbe from_json(const nlohmann::json &j);
};

/// Copy-1 and copy-2 site factors after exchanging the sites in `s` between
/// the copies: x1[m] = v[m] for m in s, else u[m]; x2 is the mirror image.
std::pair<std::vector<ComplexVec>, std::vector<ComplexVec>> apply_swap(const ProductProbe &probe, SwapSet s);

enum class Verdict { NotKSeparable, Inconclusive };

std::string to_string(Verdict v);

struct PartitionTerm {
    KPartition partition;
    double value;
};

struct CriterionReport {
    int k = 0;
    double lhs = 0;
    double first_term = 0;
    std::vector<PartitionTerm> partition_terms;
    ProductProbe probe;
    Verdict verdict = Verdict::Inconclusive;
    double tolerance = kDefaultCriterionTolerance;

    nlohmann::json to_json() const;
};

/// |<phi1| rho |phi2>|, the square root of <Phi| rho (x) rho P_tot |Phi>.
double first_term(const DensityMatrix &rho, const ProductProbe &probe);

/// (prod over ordered block pairs (i, j) of <Phi| P_ij^dagger rho (x) rho P_ij |Phi>)^(1 / 2k^2),
/// where P_ij exchanges the two copies of every site in block_i union block_j.
double partition_term(const DensityMatrix &rho, const ProductProbe &probe, const KPartition &alpha);

/// Full left-hand side: first_term minus the sum of partition terms over all
/// k-partitions. A positive value (beyond tolerance) certifies that rho is
/// not k-separable.
CriterionReport evaluate(const DensityMatrix &rho, const ProductProbe &probe, int k,
                         double tolerance = kDefaultCriterionTolerance);

/// Same result as evaluate, bit for bit, with diagonal elements and terms
/// computed on `threads` workers (0 = all cores).
CriterionReport evaluate_parallel(const DensityMatrix &rho, const ProductProbe &probe, int k,
                                  double tolerance = kDefaultCriterionTolerance, int threads = 0);

/// Reusable evaluator for a fixed (rho, k).
///
/// Every diagonal element needed by a partition term has the form
/// <x(S)|rho|x(S)> where x(S) takes copy-2 factors on S and copy-1 factors
/// elsewhere; the copy-2 side of swap set S is x(complement S). The
/// evaluator enumerates the partitions once, collects the distinct site
/// subsets S, and computes each diagonal element once per probe.
class CriterionEvaluator {
   public:
    /// `rho` is held by reference and must outlive the evaluator.
    CriterionEvaluator(const DensityMatrix &rho, int k);

    int k() const { return k_; }
    const std::vector<KPartition> &partitions() const { return partitions_; }
    std::size_t distinct_subsets() const { return subsets_.size(); }

    /// Left-hand side only. Probe is assumed validated.
    double lhs(const ProductProbe &probe) const;

    CriterionReport report(const ProductProbe &probe, double tolerance, int threads = 1) const;

   private:
    struct Factor {
        std::uint32_t swapped;     // index of x(S) in subsets_
        std::uint32_t complement;  // index of x(S^c) in subsets_
        int multiplicity;
    };

    std::vector<double> diagonals(const ProductProbe &probe, int threads) const;
    double term(std::size_t partition, const std::vector<double> &diag) const;

    const DensityMatrix &rho_;
    int k_;
    std::vector<KPartition> partitions_;
    std::vector<std::uint64_t> subsets_;
    std::vector<std::vector<Factor>> factors_;
};

}  // namespace ksep

#endif
