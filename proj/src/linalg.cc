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

#include "ksep/linalg.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "ksep/errors.h"

namespace ksep {

ComplexMat::ComplexMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMat::ComplexMat(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        std::stringstream ss;
        ss << "ComplexMat: " << data_.size() << " entries given for a " << rows_ << "x" << cols_ << " matrix";
        throw DimensionError(ss.str());
    }
}

ComplexMat ComplexMat::identity(std::size_t n) {
    ComplexMat m(n, n);
    for (std::size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMat ComplexMat::adjoint() const {
    ComplexMat out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex ComplexMat::trace() const {
    Complex t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); i++) {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMat &ComplexMat::operator+=(const ComplexMat &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("ComplexMat::operator+=: shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); i++) {
        data_[i] += other.data_[i];
    }
    return *this;
}

ComplexMat &ComplexMat::operator*=(double s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMat operator+(ComplexMat a, const ComplexMat &b) {
    a += b;
    return a;
}

ComplexMat operator*(double s, ComplexMat a) {
    a *= s;
    return a;
}

ComplexVec kron(std::span<const Complex> a, std::span<const Complex> b) {
    ComplexVec out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        for (std::size_t j = 0; j < b.size(); j++) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

ComplexVec kron_all(std::span<const ComplexVec> factors) {
    ComplexVec out{1.0};
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

double norm(std::span<const Complex> v) {
    double s = 0;
    for (const auto &z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

bool all_finite(std::span<const Complex> v) {
    for (const auto &z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

bool is_unit(std::span<const Complex> v, double tol) {
    return all_finite(v) && std::abs(norm(v) - 1.0) <= tol;
}

ComplexVec normalized(std::span<const Complex> v) {
    double n = norm(v);
    if (!(n > 0) || !std::isfinite(n)) {
        throw NormalizationError("cannot normalize a zero or non-finite vector");
    }
    ComplexVec out(v.begin(), v.end());
    for (auto &z : out) {
        z /= n;
    }
    return out;
}

Complex bilinear(const ComplexMat &rho, std::span<const Complex> x, std::span<const Complex> y) {
    if (!rho.is_square() || x.size() != rho.rows() || y.size() != rho.cols()) {
        std::stringstream ss;
        ss << "bilinear: matrix " << rho.rows() << "x" << rho.cols() << " with vectors of length " << x.size()
           << " and " << y.size();
        throw DimensionError(ss.str());
    }
    Complex total = 0;
    for (std::size_t r = 0; r < rho.rows(); r++) {
        if (x[r] == Complex{0}) {
            continue;
        }
        auto row = rho.row(r);
        Complex acc = 0;
        for (std::size_t c = 0; c < row.size(); c++) {
            acc += row[c] * y[c];
        }
        total += std::conj(x[r]) * acc;
    }
    return total;
}

ComplexMat outer(std::span<const Complex> v) {
    ComplexMat m(v.size(), v.size());
    for (std::size_t r = 0; r < v.size(); r++) {
        for (std::size_t c = 0; c < v.size(); c++) {
            m(r, c) = v[r] * std::conj(v[c]);
        }
    }
    return m;
}

DensityDiagnostics check_density(const ComplexMat &rho, double tol, HermitianSpectrum *spectrum) {
    if (!rho.is_square()) {
        throw DimensionError("check_density: matrix is not square");
    }
    DensityDiagnostics d;
    const std::size_t n = rho.rows();
    d.finite = all_finite(rho.entries());
    if (!d.finite || n == 0) {
        d.hermiticity_defect = d.trace_defect = d.min_eigenvalue = std::nan("");
        d.accepted = false;
        return d;
    }

    Eigen::MatrixXcd herm(n, n);
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t c = 0; c < n; c++) {
            d.hermiticity_defect = std::max(d.hermiticity_defect, std::abs(rho(r, c) - std::conj(rho(c, r))));
            herm(r, c) = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
        }
    }
    d.trace_defect = std::abs(rho.trace() - 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        herm, spectrum ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    if (spectrum) {
        spectrum->values.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
        spectrum->vectors.assign(n, ComplexVec(n));
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t r = 0; r < n; r++) {
                spectrum->vectors[i][r] = solver.eigenvectors()(r, i);
            }
        }
    }

    d.accepted = d.hermiticity_defect <= tol && d.trace_defect <= tol && d.min_eigenvalue >= -tol;
    return d;
}

}  // namespace ksep
