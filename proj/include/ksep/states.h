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

#ifndef KSEP_STATES_H
#define KSEP_STATES_H

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ksep/errors.h"
#include "ksep/linalg.h"
#include "json.hpp"

namespace ksep {

/// Per-site local dimensions. Site 0 is the most significant factor of a
/// flat basis index (big-endian).
using Dims = std::vector<int>;

/// Product of the site dimensions. Throws ParameterError if a site has d < 2.
std::size_t total_dimension(std::span<const int> dims);

/// Flat basis index -> per-site digits.
std::vector<int> index_to_digits(std::size_t index, std::span<const int> dims);
std::size_t digits_to_index(std::span<const int> digits, std::span<const int> dims);

/// A density matrix failed validation; carries the full diagnostics.
struct StateValidationError : Error {
    StateValidationError(const std::string &what, DensityDiagnostics diagnostics)
        : Error(what), diagnostics(diagnostics) {
    }
    DensityDiagnostics diagnostics;
};

/// Hermitian, PSD, unit-trace operator on a multi-site Hilbert space.
/// Instances are validated on construction and immutable afterwards.
class DensityMatrix {
   public:
    static constexpr double kDefaultTolerance = 1e-9;

    /// Throws DimensionError if the matrix size does not match the dims,
    /// StateValidationError if the density invariants fail at `tol`.
    DensityMatrix(Dims dims, ComplexMat mat, double tol = kDefaultTolerance);

    const Dims &dims() const { return dims_; }
    const ComplexMat &matrix() const { return mat_; }
    std::size_t dimension() const { return mat_.rows(); }
    int sites() const { return static_cast<int>(dims_.size()); }

    /// Eigen-decomposition computed during validation.
    const HermitianSpectrum &spectrum() const { return *spectrum_; }

    bool operator==(const DensityMatrix &other) const { return dims_ == other.dims_ && mat_ == other.mat_; }

   private:
    Dims dims_;
    ComplexMat mat_;
    std::shared_ptr<const HermitianSpectrum> spectrum_;
};

struct PureState {
    Dims dims;
    ComplexVec vec;

    /// Throws DimensionError / NormalizationError on invalid input.
    PureState(Dims dims, ComplexVec vec);

    DensityMatrix density() const;
};

PureState ghz(int n, int d = 2);
PureState w_state(int n);

/// Kronecker product of unit-norm site vectors.
PureState product_pure(std::span<const ComplexVec> site_vecs);

DensityMatrix maximally_mixed(const Dims &dims);

/// Convex combination. Weights must be >= 0 and sum to 1 within 1e-12.
DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> states);

/// p * target + (1 - p) * I / D.
DensityMatrix white_noise(const DensityMatrix &target, double p);

// Seeded random generators. A random pure vector is a normalized vector of
// standard complex Gaussians.
using Rng = std::mt19937_64;

ComplexVec random_unit(int d, Rng &rng);
PureState random_pure(const Dims &dims, Rng &rng);
std::vector<ComplexVec> random_product_factors(const Dims &dims, Rng &rng);

/// Uniform mixture of `terms` random fully separable pure states.
DensityMatrix random_separable_mixture(const Dims &dims, int terms, Rng &rng);

/// Mixed state with random eigenbasis and random spectrum (full rank w.p. 1).
DensityMatrix random_density(const Dims &dims, Rng &rng, int rank = 0);

// On-disk JSON format:
//   { "dims": [...], "matrix": [[[re, im], ...], ...] }   (density)
//   { "dims": [...], "vector": [[re, im], ...] }           (pure)
nlohmann::json state_to_json(const DensityMatrix &rho);
nlohmann::json pure_to_json(const PureState &psi);
DensityMatrix state_from_json(const nlohmann::json &j, double tol = DensityMatrix::kDefaultTolerance);
DensityMatrix parse_state(const std::string &text, double tol = DensityMatrix::kDefaultTolerance);

void save_state(const DensityMatrix &rho, const std::filesystem::path &path);
void save_pure(const PureState &psi, const std::filesystem::path &path);
DensityMatrix load_state(const std::filesystem::path &path, double tol = DensityMatrix::kDefaultTolerance);

}  // namespace ksep

#endif
