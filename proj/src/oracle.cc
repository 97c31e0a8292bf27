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

#include "ksep/oracle.h"

#include <cmath>
#include <sstream>

#include "ksep/errors.h"

namespace ksep::oracle {

bool TwoCopyOperator::is_bijection() const {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t target : map_) {
        if (target >= map_.size() || seen[target]) {
            return false;
        }
        seen[target] = true;
    }
    return true;
}

bool TwoCopyOperator::is_involution() const {
    for (std::size_t i = 0; i < map_.size(); i++) {
        if (map_[i] >= map_.size() || map_[map_[i]] != i) {
            return false;
        }
    }
    return true;
}

ComplexVec TwoCopyOperator::apply(const ComplexVec &psi) const {
    if (psi.size() != map_.size()) {
        throw DimensionError("TwoCopyOperator::apply: vector length mismatch");
    }
    ComplexVec out(psi.size());
    for (std::size_t i = 0; i < psi.size(); i++) {
        out[map_[i]] = psi[i];
    }
    return out;
}

void check_guard(const Dims &dims) {
    std::size_t D = 1;
    for (int d : dims) {
        D *= static_cast<std::size_t>(d);
        if (D * D > kMaxTwoCopyDimension) {
            std::stringstream ss;
            ss << "oracle guard: two-copy dimension exceeds " << kMaxTwoCopyDimension;
            throw GuardError(ss.str());
        }
    }
}

TwoCopyOperator build_swap_operator(const Dims &dims, SwapSet s) {
    check_guard(dims);
    const std::size_t D = total_dimension(dims);
    std::vector<std::size_t> map(D * D);
    for (std::size_t A = 0; A < D; A++) {
        auto a = index_to_digits(A, dims);
        for (std::size_t B = 0; B < D; B++) {
            auto b = index_to_digits(B, dims);
            auto a2 = a;
            auto b2 = b;
            for (std::size_t m = 0; m < dims.size(); m++) {
                if (s.contains(static_cast<int>(m))) {
                    std::swap(a2[m], b2[m]);
                }
            }
            map[A * D + B] = digits_to_index(a2, dims) * D + digits_to_index(b2, dims);
        }
    }
    return TwoCopyOperator(std::move(map));
}

ComplexVec two_copy_probe(const ProductProbe &probe) {
    return kron(probe.phi1(), probe.phi2());
}

Complex two_copy_element(const DensityMatrix &rho, const ComplexVec &x, const ComplexVec &y) {
    const std::size_t D = rho.dimension();
    if (x.size() != D * D || y.size() != D * D) {
        throw DimensionError("two_copy_element: vectors must have length D^2");
    }
    const ComplexMat &r = rho.matrix();
    // Reshape y to a D x D matrix Y[A', B']; then
    // (rho (x) rho) y reshaped is rho * Y * rho^T.
    ComplexMat left(D, D);
    for (std::size_t A = 0; A < D; A++) {
        for (std::size_t B2 = 0; B2 < D; B2++) {
            Complex acc = 0;
            for (std::size_t A2 = 0; A2 < D; A2++) {
                acc += r(A, A2) * y[A2 * D + B2];
            }
            left(A, B2) = acc;
        }
    }
    Complex total = 0;
    for (std::size_t A = 0; A < D; A++) {
        for (std::size_t B = 0; B < D; B++) {
            Complex acc = 0;
            for (std::size_t B2 = 0; B2 < D; B2++) {
                acc += left(A, B2) * r(B, B2);
            }
            total += std::conj(x[A * D + B]) * acc;
        }
    }
    return total;
}

double oracle_term(const DensityMatrix &rho, const ProductProbe &probe, SwapSet s) {
    check_guard(rho.dims());
    probe.validate(rho.dims());
    auto P = build_swap_operator(rho.dims(), s);
    auto moved = P.apply(two_copy_probe(probe));
    Complex value = two_copy_element(rho, moved, moved);
    if (std::abs(value.imag()) >= 1e-12) {
        throw NumericalError("oracle_term: imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

double oracle_first_term(const DensityMatrix &rho, const ProductProbe &probe) {
    check_guard(rho.dims());
    probe.validate(rho.dims());
    auto total = build_swap_operator(rho.dims(), SwapSet::all(rho.sites()));
    auto phi = two_copy_probe(probe);
    Complex value = two_copy_element(rho, phi, total.apply(phi));
    if (std::abs(value.imag()) >= 1e-12) {
        throw NumericalError("oracle_first_term: imaginary part " + std::to_string(value.imag()));
    }
    return std::sqrt(std::max(0.0, value.real()));
}

double oracle_partition_term(const DensityMatrix &rho, const ProductProbe &probe, const KPartition &alpha) {
    if (alpha.n != rho.sites()) {
        throw DimensionError("oracle_partition_term: partition size mismatch");
    }
    auto blocks = alpha.blocks();
    double product = 1;
    for (int i = 0; i < alpha.k; i++) {
        for (int j = 0; j < alpha.k; j++) {
            std::vector<int> sites = blocks[i];
            if (j != i) {
                sites.insert(sites.end(), blocks[j].begin(), blocks[j].end());
            }
            double value = oracle_term(rho, probe, SwapSet::of(sites));
            product *= std::max(0.0, value);
        }
    }
    return std::pow(product, 1.0 / (2.0 * alpha.k * alpha.k));
}

CriterionReport oracle_evaluate(const DensityMatrix &rho, const ProductProbe &probe, int k, double tolerance) {
    check_guard(rho.dims());
    if (k < 1 || k > rho.sites()) {
        throw ParameterError("oracle_evaluate: k out of range");
    }
    CriterionReport r;
    r.k = k;
    r.first_term = oracle_first_term(rho, probe);
    r.lhs = r.first_term;
    for (auto &alpha : enumerate_kpartitions(rho.sites(), k)) {
        double t = oracle_partition_term(rho, probe, alpha);
        r.lhs -= t;
        r.partition_terms.push_back({std::move(alpha), t});
    }
    r.probe = probe;
    r.tolerance = tolerance;
    r.verdict = r.lhs > tolerance ? Verdict::NotKSeparable : Verdict::Inconclusive;
    return r;
}

}  // namespace ksep::oracle
