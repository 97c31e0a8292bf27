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
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"

using namespace ksep;

namespace {

std::filesystem::path temp_file(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("ksep_states_test_" + name);
}

void expect_amplitudes(const PureState &psi, const std::vector<std::pair<std::size_t, double>> &nonzero) {
    ComplexVec expected(psi.vec.size());
    for (auto [i, a] : nonzero) {
        expected[i] = a;
    }
    for (std::size_t i = 0; i < expected.size(); i++) {
        EXPECT_NEAR(std::abs(psi.vec[i] - expected[i]), 0.0, 1e-15) << "index " << i;
    }
}

}  // namespace

TEST(states, index_convention_is_big_endian) {
    Dims dims{2, 3, 2};
    // Site 0 is the most significant digit.
    EXPECT_EQ(digits_to_index(std::vector<int>{1, 0, 0}, dims), 6u);
    EXPECT_EQ(digits_to_index(std::vector<int>{0, 2, 1}, dims), 5u);
    EXPECT_EQ(index_to_digits(11, dims), (std::vector<int>{1, 2, 1}));
    for (std::size_t i = 0; i < 12; i++) {
        EXPECT_EQ(digits_to_index(index_to_digits(i, dims), dims), i);
    }
}

TEST(states, ghz_examples) {
    double h = 1 / std::sqrt(2.0);
    expect_amplitudes(ghz(3, 2), {{0, h}, {7, h}});
    expect_amplitudes(ghz(2, 2), {{0, h}, {3, h}});
    double t = 1 / std::sqrt(3.0);
    expect_amplitudes(ghz(2, 3), {{0, t}, {4, t}, {8, t}});
    EXPECT_THROW(ghz(1, 2), ParameterError);
    EXPECT_THROW(ghz(3, 1), ParameterError);
}

TEST(states, w_examples) {
    double h = 1 / std::sqrt(2.0);
    expect_amplitudes(w_state(2), {{1, h}, {2, h}});
    double t = 1 / std::sqrt(3.0);
    expect_amplitudes(w_state(3), {{1, t}, {2, t}, {4, t}});
    expect_amplitudes(w_state(4), {{1, 0.5}, {2, 0.5}, {4, 0.5}, {8, 0.5}});
    EXPECT_THROW(w_state(1), ParameterError);
}

TEST(states, product_pure_examples) {
    ComplexVec e0{1.0, 0.0};
    ComplexVec e1{0.0, 1.0};
    ComplexVec plus{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    std::vector<ComplexVec> a{e0, e0};
    expect_amplitudes(product_pure(a), {{0, 1.0}});
    std::vector<ComplexVec> b{e0, e1, e0};
    expect_amplitudes(product_pure(b), {{2, 1.0}});
    std::vector<ComplexVec> c{plus, plus};
    expect_amplitudes(product_pure(c), {{0, 0.5}, {1, 0.5}, {2, 0.5}, {3, 0.5}});
    std::vector<ComplexVec> bad{e0, ComplexVec{1.0, 1.0}};
    EXPECT_THROW(product_pure(bad), NormalizationError);
}

TEST(states, generators_produce_valid_density_matrices) {
    for (auto psi : {ghz(3, 2), ghz(2, 3), w_state(4), ghz(4, 2)}) {
        auto d = check_density(outer(psi.vec));
        EXPECT_TRUE(d.accepted);
    }
}

TEST(states, mix_identity_and_qubit_mixture) {
    auto g = ghz(3).density();
    std::vector<std::pair<double, DensityMatrix>> single{{1.0, g}};
    EXPECT_EQ(mix(single), g);

    std::vector<ComplexVec> zero{{1.0, 0.0}};
    std::vector<ComplexVec> one{{0.0, 1.0}};
    std::vector<std::pair<double, DensityMatrix>> half{{0.5, product_pure(zero).density()},
                                                       {0.5, product_pure(one).density()}};
    EXPECT_EQ(mix(half).matrix(), 0.5 * ComplexMat::identity(2));
}

TEST(states, mix_of_many_product_states_is_valid) {
    Rng rng(100);
    std::vector<std::pair<double, DensityMatrix>> parts;
    for (int i = 0; i < 100; i++) {
        auto f = random_product_factors({2, 2, 2}, rng);
        parts.emplace_back(0.01, product_pure(f).density());
    }
    auto rho = mix(parts);
    auto d = check_density(rho.matrix(), 1e-9);
    EXPECT_TRUE(d.accepted);
    EXPECT_GE(d.min_eigenvalue, -1e-9);
}

TEST(states, mix_errors) {
    auto g = ghz(3).density();
    auto b = ghz(2).density();
    std::vector<std::pair<double, DensityMatrix>> short_weight{{0.5, g}, {0.4, g}};
    EXPECT_THROW(mix(short_weight), WeightError);
    std::vector<std::pair<double, DensityMatrix>> negative{{1.5, g}, {-0.5, g}};
    EXPECT_THROW(mix(negative), WeightError);
    std::vector<std::pair<double, DensityMatrix>> mismatched{{0.5, g}, {0.5, b}};
    EXPECT_THROW(mix(mismatched), DimensionError);
}

TEST(states, white_noise_endpoints_and_ghz_diagonal) {
    auto g = ghz(3).density();
    EXPECT_EQ(white_noise(g, 1.0), g);
    EXPECT_EQ(white_noise(g, 0.0).matrix(), maximally_mixed({2, 2, 2}).matrix());
    auto half = white_noise(g, 0.5);
    EXPECT_NEAR(half.matrix()(0, 0).real(), 0.3125, 1e-15);
    EXPECT_NEAR(half.matrix()(7, 7).real(), 0.3125, 1e-15);
    EXPECT_NEAR(half.matrix()(3, 3).real(), 0.0625, 1e-15);
    EXPECT_THROW(white_noise(g, 1.01), ParameterError);
    EXPECT_THROW(white_noise(g, -0.01), ParameterError);
}

TEST(states, white_noise_is_affine) {
    Rng rng(9);
    auto rho = random_density({2, 3}, rng);
    for (double a : {0.0, 0.2, 0.7}) {
        for (double b : {0.1, 0.5, 1.0}) {
            auto mid = white_noise(rho, 0.5 * (a + b)).matrix();
            auto avg = 0.5 * white_noise(rho, a).matrix() + 0.5 * white_noise(rho, b).matrix();
            for (std::size_t i = 0; i < mid.entries().size(); i++) {
                EXPECT_NEAR(std::abs(mid.entries()[i] - avg.entries()[i]), 0.0, 1e-12);
            }
        }
    }
}

TEST(states, density_matrix_validation) {
    EXPECT_THROW(DensityMatrix({2, 2}, ComplexMat::identity(3)), DimensionError);
    try {
        DensityMatrix({2}, ComplexMat(2, 2, {0.5, 0.0, 0.0, 0.4}));
        FAIL() << "expected StateValidationError";
    } catch (const StateValidationError &e) {
        EXPECT_NEAR(e.diagnostics.trace_defect, 0.1, 1e-15);
    }
}

TEST(states, save_load_round_trip_is_bit_exact) {
    Rng rng(2024);
    auto path = temp_file("roundtrip.json");
    for (const auto &rho : {maximally_mixed({2}), random_density({2, 3}, rng), random_density({2, 2, 2}, rng, 2)}) {
        save_state(rho, path);
        auto back = load_state(path);
        EXPECT_EQ(back.dims(), rho.dims());
        EXPECT_EQ(back.matrix(), rho.matrix());
    }
    std::filesystem::remove(path);
}

TEST(states, load_pure_state_variant) {
    auto path = temp_file("pure.json");
    auto psi = ghz(3);
    save_pure(psi, path);
    auto rho = load_state(path);
    EXPECT_EQ(rho.matrix(), outer(psi.vec));
    std::filesystem::remove(path);
}

TEST(states, load_rejects_dimension_mismatch) {
    auto path = temp_file("mismatch.json");
    {
        std::ofstream out(path);
        out << R"({"dims": [2, 2], "matrix": [[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]})";
    }
    try {
        load_state(path);
        FAIL() << "expected FormatError";
    } catch (const FormatError &e) {
        EXPECT_NE(std::string(e.what()).find("matrix"), std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST(states, load_rejects_bad_trace) {
    EXPECT_THROW(parse_state(R"({"dims": [2], "matrix": [[[0.5,0],[0,0]],[[0,0],[0.4,0]]]})"), StateValidationError);
}

TEST(states, parse_errors_carry_context) {
    EXPECT_THROW(parse_state("{not json"), FormatError);
    EXPECT_THROW(parse_state(R"({"dims": [1], "matrix": [[[1,0]]]})"), FormatError);
    EXPECT_THROW(parse_state(R"({"dims": [2]})"), FormatError);
    try {
        parse_state(R"({"dims": [2], "matrix": [[[0.5,0],[0,0]],[[0,0],"x"]]})");
        FAIL();
    } catch (const FormatError &e) {
        EXPECT_NE(std::string(e.what()).find("matrix[1][1]"), std::string::npos);
    }
    EXPECT_THROW(load_state("/nonexistent/ksep_state.json"), FormatError);
}

TEST(states, random_generators_are_seeded) {
    Rng a(42), b(42);
    EXPECT_EQ(random_pure({2, 3}, a).vec, random_pure({2, 3}, b).vec);
    EXPECT_EQ(random_density({3}, a).matrix(), random_density({3}, b).matrix());
}
