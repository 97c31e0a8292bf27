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

#include "ksep/criterion.h"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "ksep/errors.h"
#include "ksep/parallel.h"

namespace ksep {

namespace {

nlohmann::json factors_json(const std::vector<ComplexVec> &factors) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &f : factors) {
        nlohmann::json site = nlohmann::json::array();
        for (const auto &z : f) {
            site.push_back({z.real(), z.imag()});
        }
        out.push_back(std::move(site));
    }
    return out;
}

std::vector<ComplexVec> factors_from_json(const nlohmann::json &j, const char *field) {
    if (!j.contains(field) || !j[field].is_array() || j[field].empty()) {
        throw FormatError(std::string("probe field '") + field + "': expected a nonempty array of site vectors");
    }
    std::vector<ComplexVec> out;
    for (std::size_t m = 0; m < j[field].size(); m++) {
        const auto &site = j[field][m];
        if (!site.is_array() || site.empty()) {
            throw FormatError(std::string("probe field '") + field + "[" + std::to_string(m) +
                              "]': expected an array of [re, im] pairs");
        }
        ComplexVec v;
        for (std::size_t i = 0; i < site.size(); i++) {
            const auto &z = site[i];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw FormatError(std::string("probe field '") + field + "[" + std::to_string(m) + "][" +
                                  std::to_string(i) + "]': expected [re, im]");
            }
            v.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

double overlap_sq(const ComplexVec &e, const ComplexVec &x) {
    Complex z = 0;
    for (std::size_t r = 0; r < x.size(); r++) {
        z += std::conj(e[r]) * x[r];
    }
    return std::norm(z);
}

/// <x|rho|x> for a product vector x, evaluated on the spectrum with negative
/// eigenvalues floored at zero. A sum of nonnegative terms keeps relative
/// accuracy when x is nearly orthogonal to the support of rho; the entrywise
/// sum has ~1e-16 absolute error there, which the 1/(2k^2)-th root of the
/// partition terms blows up to the 1e-3 range.
double diagonal_element(const HermitianSpectrum &sp, std::span<const ComplexVec> factors) {
    ComplexVec x = kron_all(factors);
    double pos = 0, neg = 0;
    for (std::size_t i = 0; i < sp.values.size(); i++) {
        const double lambda = sp.values[i];
        if (lambda > 0) {
            pos += lambda * overlap_sq(sp.vectors[i], x);
        } else if (lambda < 0) {
            neg -= lambda * overlap_sq(sp.vectors[i], x);
        }
    }
    if (pos - neg < -kDiagonalClamp) {
        std::stringstream ss;
        ss << "diagonal element " << pos - neg << " is negative beyond rounding; input is not PSD";
        throw NumericalError(ss.str());
    }
    return pos;
}

/// |<phi1|rho|phi2>| on the same floored spectrum as diagonal_element, so
/// Cauchy-Schwarz against the diagonal elements holds term by term.
double off_diagonal(const HermitianSpectrum &sp, const ComplexVec &phi1, const ComplexVec &phi2) {
    Complex z = 0;
    for (std::size_t i = 0; i < sp.values.size(); i++) {
        if (sp.values[i] <= 0) {
            continue;
        }
        Complex a = 0, b = 0;
        for (std::size_t r = 0; r < phi1.size(); r++) {
            a += std::conj(phi1[r]) * sp.vectors[i][r];
            b += std::conj(sp.vectors[i][r]) * phi2[r];
        }
        z += sp.values[i] * a * b;
    }
    return std::abs(z);
}

/// Geometric combination of the partition-term factors. Works in the log
/// domain: with k^2 ordered pairs the raw product underflows for k >= 5.
class TermAccumulator {
   public:
    explicit TermAccumulator(int k) : k_(k) {
    }

    bool is_zero() const { return zero_; }

    void add(double copy1, double copy2, int multiplicity) {
        if (zero_) {
            return;
        }
        if (copy1 == 0 || copy2 == 0) {
            zero_ = true;
            return;
        }
        log_sum_ += multiplicity * (std::log(copy1) + std::log(copy2));
    }

    double value() const {
        if (zero_) {
            return 0;
        }
        return std::exp(log_sum_ / (2.0 * k_ * k_));
    }

   private:
    int k_;
    bool zero_ = false;
    double log_sum_ = 0;
};

void check_k(const DensityMatrix &rho, int k) {
    if (k < 1 || k > rho.sites()) {
        throw ParameterError("k must satisfy 1 <= k <= n = " + std::to_string(rho.sites()) + ", got " +
                             std::to_string(k));
    }
}

}  // namespace

Dims ProductProbe::dims() const {
    Dims d;
    for (const auto &f : u) {
        d.push_back(static_cast<int>(f.size()));
    }
    return d;
}

void ProductProbe::validate(const Dims &dims) const {
    if (u.size() != dims.size() || v.size() != dims.size()) {
        throw DimensionError("probe has " + std::to_string(u.size()) + "/" + std::to_string(v.size()) +
                             " site factors, state has " + std::to_string(dims.size()) + " sites");
    }
    for (std::size_t m = 0; m < dims.size(); m++) {
        if (u[m].size() != static_cast<std::size_t>(dims[m]) || v[m].size() != static_cast<std::size_t>(dims[m])) {
            throw DimensionError("probe factor dimension mismatch at site " + std::to_string(m));
        }
        if (!is_unit(u[m]) || !is_unit(v[m])) {
            throw NormalizationError("probe factor at site " + std::to_string(m) + " is not unit norm");
        }
    }
}

nlohmann::json ProductProbe::to_json() const {
    return {{"u", factors_json(u)}, {"v", factors_json(v)}};
}

ProductProbe ProductProbe::from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw FormatError("probe: top level must be an object with fields 'u' and 'v'");
    }
    ProductProbe p{factors_from_json(j, "u"), factors_from_json(j, "v")};
    if (p.u.size() != p.v.size()) {
        throw FormatError("probe: 'u' and 'v' have different site counts");
    }
    return p;
}

std::pair<std::vector<ComplexVec>, std::vector<ComplexVec>> apply_swap(const ProductProbe &probe, SwapSet s) {
    std::pair<std::vector<ComplexVec>, std::vector<ComplexVec>> out{probe.u, probe.v};
    for (int m = 0; m < probe.sites(); m++) {
        if (s.contains(m)) {
            std::swap(out.first[m], out.second[m]);
        }
    }
    return out;
}

std::string to_string(Verdict v) {
    return v == Verdict::NotKSeparable ? "not_k_separable" : "inconclusive";
}

nlohmann::json CriterionReport::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : partition_terms) {
        terms.push_back({{"partition", t.partition.to_string()}, {"value", t.value}});
    }
    return {{"k", k},
            {"lhs", lhs},
            {"first_term", first_term},
            {"terms", std::move(terms)},
            {"verdict", ksep::to_string(verdict)},
            {"tolerance", tolerance},
            {"probe", probe.to_json()}};
}

double first_term(const DensityMatrix &rho, const ProductProbe &probe) {
    probe.validate(rho.dims());
    return off_diagonal(rho.spectrum(), probe.phi1(), probe.phi2());
}

double partition_term(const DensityMatrix &rho, const ProductProbe &probe, const KPartition &alpha) {
    probe.validate(rho.dims());
    if (alpha.n != rho.sites()) {
        throw DimensionError("partition covers " + std::to_string(alpha.n) + " sites, state has " +
                             std::to_string(rho.sites()));
    }
    TermAccumulator acc(alpha.k);
    for (const auto &st : swap_sets(alpha)) {
        auto [x1, x2] = apply_swap(probe, st.sites);
        double a = diagonal_element(rho.spectrum(), x1);
        if (a == 0) {
            return 0;
        }
        double b = diagonal_element(rho.spectrum(), x2);
        acc.add(a, b, st.multiplicity);
        if (acc.is_zero()) {
            return 0;
        }
    }
    return acc.value();
}

CriterionEvaluator::CriterionEvaluator(const DensityMatrix &rho, int k) : rho_(rho), k_(k) {
    check_k(rho, k);
    const int n = rho.sites();
    partitions_ = enumerate_kpartitions(n, k);
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    auto intern = [&](SwapSet s) {
        auto [it, inserted] = index.try_emplace(s.mask(), static_cast<std::uint32_t>(subsets_.size()));
        if (inserted) {
            subsets_.push_back(s.mask());
        }
        return it->second;
    };
    factors_.reserve(partitions_.size());
    for (const auto &alpha : partitions_) {
        std::vector<Factor> fs;
        for (const auto &st : swap_sets(alpha)) {
            Factor f;
            f.swapped = intern(st.sites);
            f.complement = intern(st.sites.complement(n));
            f.multiplicity = st.multiplicity;
            fs.push_back(f);
        }
        factors_.push_back(std::move(fs));
    }
}

std::vector<double> CriterionEvaluator::diagonals(const ProductProbe &probe, int threads) const {
    std::vector<double> diag(subsets_.size());
    parallel_for(subsets_.size(), threads, [&](std::size_t i) {
        SwapSet s(subsets_[i]);
        std::vector<ComplexVec> x;
        x.reserve(probe.sites());
        for (int m = 0; m < probe.sites(); m++) {
            x.push_back(s.contains(m) ? probe.v[m] : probe.u[m]);
        }
        diag[i] = diagonal_element(rho_.spectrum(), x);
    });
    return diag;
}

double CriterionEvaluator::term(std::size_t partition, const std::vector<double> &diag) const {
    TermAccumulator acc(k_);
    for (const auto &f : factors_[partition]) {
        acc.add(diag[f.swapped], diag[f.complement], f.multiplicity);
        if (acc.is_zero()) {
            break;
        }
    }
    return acc.value();
}

double CriterionEvaluator::lhs(const ProductProbe &probe) const {
    auto diag = diagonals(probe, 1);
    double value = off_diagonal(rho_.spectrum(), probe.phi1(), probe.phi2());
    for (std::size_t p = 0; p < partitions_.size(); p++) {
        value -= term(p, diag);
    }
    return value;
}

CriterionReport CriterionEvaluator::report(const ProductProbe &probe, double tolerance, int threads) const {
    probe.validate(rho_.dims());
    auto diag = diagonals(probe, threads);
    std::vector<double> terms(partitions_.size());
    parallel_for(partitions_.size(), threads, [&](std::size_t p) { terms[p] = term(p, diag); });

    CriterionReport r;
    r.k = k_;
    r.first_term = off_diagonal(rho_.spectrum(), probe.phi1(), probe.phi2());
    r.lhs = r.first_term;
    r.partition_terms.reserve(partitions_.size());
    // Reduce in enumeration order so the sum does not depend on scheduling.
    for (std::size_t p = 0; p < partitions_.size(); p++) {
        r.lhs -= terms[p];
        r.partition_terms.push_back({partitions_[p], terms[p]});
    }
    r.probe = probe;
    r.tolerance = tolerance;
    r.verdict = r.lhs > tolerance ? Verdict::NotKSeparable : Verdict::Inconclusive;
    return r;
}

CriterionReport evaluate(const DensityMatrix &rho, const ProductProbe &probe, int k, double tolerance) {
    return CriterionEvaluator(rho, k).report(probe, tolerance, 1);
}

CriterionReport evaluate_parallel(const DensityMatrix &rho, const ProductProbe &probe, int k, double tolerance,
                                  int threads) {
    return CriterionEvaluator(rho, k).report(probe, tolerance, threads);
}

}  // namespace ksep
