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

#ifndef KSEP_ORACLE_H
#define KSEP_ORACLE_H

#include <cstddef>
#include <vector>

#include "ksep/criterion.h"
#include "ksep/partitions.h"
#include "ksep/states.h"

namespace ksep::oracle {

/// Largest two-copy dimension D^2 the oracle will materialize.
inline constexpr std::size_t kMaxTwoCopyDimension = 4096;

/// Permutation of two-copy basis labels. The label (a; b) has flat index
/// A * D + B, where A and B are the big-endian flat indices of the per-site
/// digits a and b. The matrix is P|e_i> = |e_map[i]>.
class TwoCopyOperator {
   public:
    explicit TwoCopyOperator(std::vector<std::size_t> map) : map_(std::move(map)) {
    }

    std::size_t dimension() const { return map_.size(); }
    std::size_t operator[](std::size_t i) const { return map_[i]; }

    bool is_bijection() const;
    bool is_involution() const;

    /// P * psi.
    ComplexVec apply(const ComplexVec &psi) const;

   private:
    std::vector<std::size_t> map_;
};

/// Throws GuardError if D^2 exceeds kMaxTwoCopyDimension.
void check_guard(const Dims &dims);

/// Exchanges a_m <-> b_m for every site m in s.
TwoCopyOperator build_swap_operator(const Dims &dims, SwapSet s);

/// |phi1> (x) |phi2> as a D^2 vector.
ComplexVec two_copy_probe(const ProductProbe &probe);

/// <x| rho (x) rho |y> for D^2 vectors x, y.
Complex two_copy_element(const DensityMatrix &rho, const ComplexVec &x, const ComplexVec &y);

/// <Phi| P^dagger (rho (x) rho) P |Phi> for the swap over s. Throws
/// NumericalError if the imaginary part exceeds 1e-12.
double oracle_term(const DensityMatrix &rho, const ProductProbe &probe, SwapSet s);

/// sqrt(<Phi| rho (x) rho P_tot |Phi>), computed on the two-copy space.
double oracle_first_term(const DensityMatrix &rho, const ProductProbe &probe);

/// Partition term as a naive double product over all k^2 ordered block
/// pairs, each via an explicit swap operator.
double oracle_partition_term(const DensityMatrix &rho, const ProductProbe &probe, const KPartition &alpha);

CriterionReport oracle_evaluate(const DensityMatrix &rho, const ProductProbe &probe, int k,
                                double tolerance = kDefaultCriterionTolerance);

}  // namespace ksep::oracle

#endif
