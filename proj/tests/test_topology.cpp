#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include <consensus_spectra/model_grammar.hpp>
#include <consensus_spectra/simulate.hpp>
#include <consensus_spectra/topology.hpp>

#include "oracles.hpp"

using namespace consensus;

namespace {

std::vector<NetworkModel> small_models() {
    std::vector<NetworkModel> out;
    for (double a : {0.0, 0.3, 1.0}) {
        for (std::size_t n : {3, 4, 7, 10}) out.push_back(NetworkModel::ring(n, a));
        for (std::size_t r : {1, 2, 3}) out.push_back(NetworkModel::rnearest(2 * r + 3, r, a));
        out.push_back(NetworkModel::torus({3, 4}, a));
        out.push_back(NetworkModel::torus({4, 3, 5}, a));
    }
    return out;
}

}  // namespace

TEST(Validate, RejectsOutOfRangeParameters) {
    EXPECT_THROW(validate(NetworkModel::ring(4, -0.1)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::ring(4, 1.5)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::ring(4, std::nan(""))), ParameterError);
    EXPECT_THROW(validate(NetworkModel::ring(2, 0.0)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::rnearest(5, 2, 0.0)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::rnearest(6, 0, 0.0)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::torus({4}, 0.0)), ParameterError);
    EXPECT_THROW(validate(NetworkModel::torus({4, 2}, 0.0)), ParameterError);
    EXPECT_NO_THROW(validate(NetworkModel::rnearest(6, 2, 1.0)));
    EXPECT_NO_THROW(validate(NetworkModel::torus({3, 3, 3}, 0.5)));
}

TEST(CirculantRow, RingWeights) {
    const auto row = circulant_row(NetworkModel::ring(4, 0.5));
    ASSERT_EQ(row.size(), 4u);
    EXPECT_DOUBLE_EQ(row.entries[0], 1.0);
    EXPECT_DOUBLE_EQ(row.entries[1], -0.25);
    EXPECT_DOUBLE_EQ(row.entries[2], 0.0);
    EXPECT_DOUBLE_EQ(row.entries[3], -0.75);
}

TEST(CirculantRow, RNearestWeights) {
    const auto row = circulant_row(NetworkModel::rnearest(7, 2, 0.2));
    const std::vector<double> expected{2.0, -0.4, -0.4, 0.0, 0.0, -0.6, -0.6};
    ASSERT_EQ(row.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(row.entries[i], expected[i], 1e-15) << i;
}

TEST(CirculantRow, TorusIsNotCirculant) {
    EXPECT_THROW(circulant_row(NetworkModel::torus({3, 3}, 0.0)), TopologyError);
}

TEST(DenseLaplacian, MatchesEdgeByEdgeAssembly) {
    for (const auto& model : small_models()) {
        const auto lap = dense_laplacian(model);
        const auto ref = oracle::laplacian(model);
        ASSERT_EQ(lap.order(), static_cast<std::size_t>(ref.rows()));
        for (std::size_t i = 0; i < lap.order(); ++i)
            for (std::size_t j = 0; j < lap.order(); ++j)
                ASSERT_NEAR(lap(i, j), ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 1e-15)
                    << format_model(model) << " at " << i << "," << j;
    }
}

TEST(DenseLaplacian, RowAndColumnSumsVanish) {
    for (const auto& model : small_models()) {
        const auto lap = dense_laplacian(model);
        const std::size_t n = lap.order();
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            double col = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += lap(i, j);
                col += lap(j, i);
            }
            EXPECT_NEAR(row, 0.0, 1e-14) << format_model(model);
            EXPECT_NEAR(col, 0.0, 1e-14) << format_model(model);
        }
    }
}

TEST(DenseLaplacian, KroneckerSumIndexing) {
    const auto lap = kronecker_sum(expand_circulant(circulant_row(NetworkModel::ring(3, 0.0))),
                                   expand_circulant(circulant_row(NetworkModel::ring(4, 0.0))));
    ASSERT_EQ(lap.order(), 12u);
    // node (i1, i2) -> 4 i1 + i2; neighbours differ in one digit.
    EXPECT_DOUBLE_EQ(lap(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(lap(0, 1), -0.5);
    EXPECT_DOUBLE_EQ(lap(0, 3), -0.5);
    EXPECT_DOUBLE_EQ(lap(0, 4), -0.5);
    EXPECT_DOUBLE_EQ(lap(0, 8), -0.5);
    EXPECT_DOUBLE_EQ(lap(0, 5), 0.0);
}

TEST(DenseLaplacian, CapIsEnforced) {
    EXPECT_THROW(dense_laplacian(NetworkModel::ring(20, 0.0), 10), SizeError);
    EXPECT_THROW(check_dense_cap(NetworkModel::torus({101, 100}, 0.0), kDefaultDenseCap), SizeError);
    EXPECT_NO_THROW(check_dense_cap(NetworkModel::torus({100, 100}, 0.0), kDefaultDenseCap));
}

TEST(StructuredMultiply, AgreesWithDense) {
    for (const auto& model : small_models()) {
        const auto x = random_initial_state(model.order(), 7);
        std::vector<double> y1(x.size());
        std::vector<double> y2(x.size());
        apply_laplacian(model, x, y1);
        apply_dense(dense_laplacian(model), x, y2);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y1[i], y2[i], 1e-12) << format_model(model);
    }
}

TEST(ModelGrammar, ParsesEachKind) {
    EXPECT_EQ(parse_model("ring:n=8,a=0.25"), NetworkModel::ring(8, 0.25));
    EXPECT_EQ(parse_model("rnearest:n=400,r=3,a=0.8"), NetworkModel::rnearest(400, 3, 0.8));
    EXPECT_EQ(parse_model("torus:dims=4x5x6,a=0"), NetworkModel::torus({4, 5, 6}, 0.0));
    EXPECT_EQ(parse_model("ring:a=1,n=5"), NetworkModel::ring(5, 1.0));
}

TEST(ModelGrammar, RejectsMalformedText) {
    for (const char* text : {"ring", "ring:n=4", "ring:n=4,a=0.5,r=1", "ring:n=4,n=5,a=0", "ring:n=x,a=0",
                             "ring:n=4,a=0.5x", "hex:n=4,a=0", "torus:dims=4x,a=0", "ring:n=4,a", "ring:n=-4,a=0",
                             "ring:n=2,a=0"}) {
        EXPECT_THROW(parse_model(text), ParameterError) << text;
    }
}

TEST(ModelGrammar, RoundTrips) {
    std::vector<NetworkModel> models = small_models();
    models.push_back(NetworkModel::ring(9, 0.1));
    models.push_back(NetworkModel::ring(9, 1.0 / 3.0));
    models.push_back(NetworkModel::rnearest(64, 5, 0.7));
    for (const auto& model : models) EXPECT_EQ(parse_model(format_model(model)), model) << format_model(model);
    EXPECT_EQ(format_model(NetworkModel::torus({4, 5}, 0.5)), "torus:dims=4x5,a=0.5");
}
