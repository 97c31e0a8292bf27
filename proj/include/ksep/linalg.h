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

#ifndef KSEP_LINALG_H
#define KSEP_LINALG_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ksep {

using Complex = std::complex<double>;

/// Dense complex vector. Amplitudes of kets, per-site probe factors.
using ComplexVec = std::vector<Complex>;

/// Dense row-major complex matrix.
class ComplexMat {
   public:
    ComplexMat() = default;
    ComplexMat(std::size_t rows, std::size_t cols);
    ComplexMat(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMat identity(std::size_t n);
    static ComplexMat zeros(std::size_t rows, std::size_t cols) { return ComplexMat(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const Complex> entries() const { return data_; }
    std::span<Complex> entries() { return data_; }

    ComplexMat adjoint() const;
    Complex trace() const;

    ComplexMat &operator+=(const ComplexMat &other);
    ComplexMat &operator*=(double s);

    bool operator==(const ComplexMat &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMat operator+(ComplexMat a, const ComplexMat &b);
ComplexMat operator*(double s, ComplexMat a);

/// Kronecker product; result[i * b.size() + j] = a[i] * b[j].
ComplexVec kron(std::span<const Complex> a, std::span<const Complex> b);

/// Kronecker product of a list of factors, first factor most significant.
ComplexVec kron_all(std::span<const ComplexVec> factors);

double norm(std::span<const Complex> v);
bool all_finite(std::span<const Complex> v);
bool is_unit(std::span<const Complex> v, double tol = 1e-12);

/// Returns v / |v|. Throws NormalizationError on a zero or non-finite vector.
ComplexVec normalized(std::span<const Complex> v);

/// x^dagger * rho * y. Throws DimensionError on mismatched shapes.
Complex bilinear(const ComplexMat &rho, std::span<const Complex> x, std::span<const Complex> y);

/// |v><v|.
ComplexMat outer(std::span<const Complex> v);

struct DensityDiagnostics {
    double hermiticity_defect = 0;  ///< max |rho - rho^dagger| entry
    double trace_defect = 0;        ///< |tr rho - 1|
    double min_eigenvalue = 0;      ///< of the Hermitian part
    bool finite = true;
    bool accepted = false;
};

/// Checks Hermiticity, unit trace and positive semidefiniteness to `tol`.
/// Never throws for square input; a non-square matrix is a DimensionError.
/// rho = sum_i values[i] |vectors[i]><vectors[i]|, values ascending.
struct HermitianSpectrum {
    std::vector<double> values;
    std::vector<ComplexVec> vectors;
};

/// If `spectrum` is non-null it receives the eigen-decomposition of the
/// Hermitian part (left empty when the matrix is rejected as non-finite).
DensityDiagnostics check_density(const ComplexMat &rho, double tol = 1e-9, HermitianSpectrum *spectrum = nullptr);

}  // namespace ksep

#endif
