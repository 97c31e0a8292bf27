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

#include "ksep/states.h"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ksep {

namespace {

// Dense D x D storage: 4096 is 256 MiB of complex doubles already.
constexpr std::size_t kMaxDimension = 4096;

std::string describe(const DensityDiagnostics &d) {
    std::stringstream ss;
    ss << "hermiticity defect " << d.hermiticity_defect << ", trace defect " << d.trace_defect
       << ", min eigenvalue " << d.min_eigenvalue;
    if (!d.finite) {
        ss << ", non-finite entries";
    }
    return ss.str();
}

Complex parse_complex(const nlohmann::json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError(where + ": expected [re, im] pair of numbers, got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json complex_json(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

Dims parse_dims(const nlohmann::json &j) {
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
        throw FormatError("field 'dims': expected a nonempty array of integers");
    }
    Dims dims;
    for (std::size_t i = 0; i < j["dims"].size(); i++) {
        const auto &e = j["dims"][i];
        if (!e.is_number_integer() || e.get<long long>() < 2) {
            throw FormatError("field 'dims[" + std::to_string(i) + "]': expected integer >= 2, got " + e.dump());
        }
        dims.push_back(e.get<int>());
    }
    return dims;
}

}  // namespace

std::size_t total_dimension(std::span<const int> dims) {
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 2) {
            throw ParameterError("site dimension must be >= 2, got " + std::to_string(d));
        }
        total *= static_cast<std::size_t>(d);
        if (total > kMaxDimension) {
            throw ParameterError("total Hilbert space dimension exceeds " + std::to_string(kMaxDimension));
        }
    }
    return total;
}

std::vector<int> index_to_digits(std::size_t index, std::span<const int> dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t m = dims.size(); m-- > 0;) {
        digits[m] = static_cast<int>(index % dims[m]);
        index /= dims[m];
    }
    return digits;
}

std::size_t digits_to_index(std::span<const int> digits, std::span<const int> dims) {
    std::size_t index = 0;
    for (std::size_t m = 0; m < dims.size(); m++) {
        index = index * dims[m] + digits[m];
    }
    return index;
}

DensityMatrix::DensityMatrix(Dims dims, ComplexMat mat, double tol) : dims_(std::move(dims)), mat_(std::move(mat)) {
    if (dims_.empty()) {
        throw DimensionError("DensityMatrix: no sites");
    }
    std::size_t D = total_dimension(dims_);
    if (mat_.rows() != D || mat_.cols() != D) {
        std::stringstream ss;
        ss << "DensityMatrix: dims imply " << D << "x" << D << " but matrix is " << mat_.rows() << "x" << mat_.cols();
        throw DimensionError(ss.str());
    }
    auto spectrum = std::make_shared<HermitianSpectrum>();
    auto diag = check_density(mat_, tol, spectrum.get());
    if (!diag.accepted) {
        throw StateValidationError("invalid density matrix: " + describe(diag), diag);
    }
    spectrum_ = std::move(spectrum);
}

PureState::PureState(Dims dims_in, ComplexVec vec_in) : dims(std::move(dims_in)), vec(std::move(vec_in)) {
    if (dims.empty() || vec.size() != total_dimension(dims)) {
        throw DimensionError("PureState: vector length does not match dims");
    }
    if (!is_unit(vec)) {
        throw NormalizationError("PureState: vector is not unit norm (norm " + std::to_string(norm(vec)) + ")");
    }
}

DensityMatrix PureState::density() const {
    return DensityMatrix(dims, outer(vec));
}

PureState ghz(int n, int d) {
    if (n < 2 || d < 2) {
        throw ParameterError("ghz: need n >= 2 and d >= 2");
    }
    Dims dims(n, d);
    ComplexVec v(total_dimension(dims));
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; j++) {
        std::vector<int> digits(n, j);
        v[digits_to_index(digits, dims)] = amp;
    }
    return PureState(std::move(dims), std::move(v));
}

PureState w_state(int n) {
    if (n < 2) {
        throw ParameterError("w_state: need n >= 2");
    }
    Dims dims(n, 2);
    ComplexVec v(total_dimension(dims));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; m++) {
        v[std::size_t{1} << m] = amp;
    }
    return PureState(std::move(dims), std::move(v));
}

PureState product_pure(std::span<const ComplexVec> site_vecs) {
    if (site_vecs.empty()) {
        throw ParameterError("product_pure: no sites");
    }
    Dims dims;
    for (std::size_t m = 0; m < site_vecs.size(); m++) {
        if (!is_unit(site_vecs[m])) {
            throw NormalizationError("product_pure: site " + std::to_string(m) + " vector is not unit norm");
        }
        dims.push_back(static_cast<int>(site_vecs[m].size()));
    }
    total_dimension(dims);
    return PureState(std::move(dims), kron_all(site_vecs));
}

DensityMatrix maximally_mixed(const Dims &dims) {
    std::size_t D = total_dimension(dims);
    return DensityMatrix(dims, (1.0 / static_cast<double>(D)) * ComplexMat::identity(D));
}

DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> states) {
    if (states.empty()) {
        throw WeightError("mix: empty mixture");
    }
    const Dims &dims = states.front().second.dims();
    std::size_t D = states.front().second.dimension();
    double total = 0;
    ComplexMat acc(D, D);
    for (const auto &[w, rho] : states) {
        if (!(w >= 0) || !std::isfinite(w)) {
            throw WeightError("mix: negative or non-finite weight " + std::to_string(w));
        }
        if (rho.dims() != dims) {
            throw DimensionError("mix: states have different site dimensions");
        }
        total += w;
        acc += w * rho.matrix();
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw WeightError("mix: weights sum to " + std::to_string(total) + ", not 1");
    }
    return DensityMatrix(dims, std::move(acc));
}

DensityMatrix white_noise(const DensityMatrix &target, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("white_noise: p must lie in [0, 1], got " + std::to_string(p));
    }
    std::size_t D = target.dimension();
    ComplexMat out = p * target.matrix();
    const double floor = (1.0 - p) / static_cast<double>(D);
    for (std::size_t i = 0; i < D; i++) {
        out(i, i) += floor;
    }
    return DensityMatrix(target.dims(), std::move(out));
}

ComplexVec random_unit(int d, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVec v(d);
    for (auto &z : v) {
        double re = gauss(rng);
        double im = gauss(rng);
        z = {re, im};
    }
    return normalized(v);
}

PureState random_pure(const Dims &dims, Rng &rng) {
    std::size_t D = total_dimension(dims);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVec v(D);
    for (auto &z : v) {
        double re = gauss(rng);
        double im = gauss(rng);
        z = {re, im};
    }
    return PureState(dims, normalized(v));
}

std::vector<ComplexVec> random_product_factors(const Dims &dims, Rng &rng) {
    std::vector<ComplexVec> factors;
    factors.reserve(dims.size());
    for (int d : dims) {
        factors.push_back(random_unit(d, rng));
    }
    return factors;
}

DensityMatrix random_separable_mixture(const Dims &dims, int terms, Rng &rng) {
    if (terms < 1) {
        throw ParameterError("random_separable_mixture: need at least one term");
    }
    std::vector<std::pair<double, DensityMatrix>> parts;
    parts.reserve(terms);
    for (int t = 0; t < terms; t++) {
        auto factors = random_product_factors(dims, rng);
        parts.emplace_back(1.0 / terms, product_pure(factors).density());
    }
    return mix(parts);
}

DensityMatrix random_density(const Dims &dims, Rng &rng, int rank) {
    std::size_t D = total_dimension(dims);
    std::size_t r = rank > 0 ? static_cast<std::size_t>(rank) : D;
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMat g(D, r);
    for (auto &z : g.entries()) {
        double re = gauss(rng);
        double im = gauss(rng);
        z = {re, im};
    }
    ComplexMat rho(D, D);
    for (std::size_t a = 0; a < D; a++) {
        for (std::size_t b = 0; b < D; b++) {
            Complex acc = 0;
            for (std::size_t c = 0; c < r; c++) {
                acc += g(a, c) * std::conj(g(b, c));
            }
            rho(a, b) = acc;
        }
    }
    rho *= 1.0 / rho.trace().real();
    // Enforce exact Hermiticity; the product above is Hermitian only up to rounding.
    for (std::size_t a = 0; a < D; a++) {
        rho(a, a) = rho(a, a).real();
        for (std::size_t b = a + 1; b < D; b++) {
            rho(b, a) = std::conj(rho(a, b));
        }
    }
    return DensityMatrix(dims, std::move(rho));
}

nlohmann::json state_to_json(const DensityMatrix &rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < rho.dimension(); r++) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto &z : rho.matrix().row(r)) {
            row.push_back(complex_json(z));
        }
        rows.push_back(std::move(row));
    }
    return {{"dims", rho.dims()}, {"matrix", std::move(rows)}};
}

nlohmann::json pure_to_json(const PureState &psi) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &z : psi.vec) {
        amps.push_back(complex_json(z));
    }
    return {{"dims", psi.dims}, {"vector", std::move(amps)}};
}

DensityMatrix state_from_json(const nlohmann::json &j, double tol) {
    if (!j.is_object()) {
        throw FormatError("state file: top level must be an object");
    }
    Dims dims = parse_dims(j);
    std::size_t D;
    try {
        D = total_dimension(dims);
    } catch (const ParameterError &e) {
        throw FormatError(std::string("field 'dims': ") + e.what());
    }

    if (j.contains("vector")) {
        const auto &vj = j["vector"];
        if (!vj.is_array() || vj.size() != D) {
            throw FormatError("field 'vector': expected " + std::to_string(D) + " [re, im] entries for dims");
        }
        ComplexVec v(D);
        for (std::size_t i = 0; i < D; i++) {
            v[i] = parse_complex(vj[i], "vector[" + std::to_string(i) + "]");
        }
        if (!is_unit(v, 1e-9)) {
            throw StateValidationError("pure state vector is not unit norm (norm " + std::to_string(norm(v)) + ")",
                                       check_density(outer(v), tol));
        }
        return DensityMatrix(dims, outer(v), tol);
    }

    if (!j.contains("matrix") || !j["matrix"].is_array()) {
        throw FormatError("state file: expected field 'matrix' or 'vector'");
    }
    const auto &mj = j["matrix"];
    if (mj.size() != D) {
        throw FormatError("field 'matrix': dims imply " + std::to_string(D) + " rows, found " +
                          std::to_string(mj.size()));
    }
    ComplexMat mat(D, D);
    for (std::size_t r = 0; r < D; r++) {
        const auto &row = mj[r];
        if (!row.is_array() || row.size() != D) {
            throw FormatError("field 'matrix[" + std::to_string(r) + "]': expected " + std::to_string(D) +
                              " entries, found " + (row.is_array() ? std::to_string(row.size()) : row.type_name()));
        }
        for (std::size_t c = 0; c < D; c++) {
            mat(r, c) = parse_complex(row[c], "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return DensityMatrix(std::move(dims), std::move(mat), tol);
}

DensityMatrix parse_state(const std::string &text, double tol) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(std::string("state file is not valid JSON: ") + e.what());
    }
    return state_from_json(j, tol);
}

namespace {

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out << text << '\n';
    if (!out) {
        throw FormatError("failed writing '" + path.string() + "'");
    }
}

}  // namespace

void save_state(const DensityMatrix &rho, const std::filesystem::path &path) {
    write_text(path, state_to_json(rho).dump());
}

void save_pure(const PureState &psi, const std::filesystem::path &path) {
    write_text(path, pure_to_json(psi).dump());
}

DensityMatrix load_state(const std::filesystem::path &path, double tol) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open state file '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_state(buf.str(), tol);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace ksep
