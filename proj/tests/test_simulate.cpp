#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include <consensus_spectra/design.hpp>
#include <consensus_spectra/model_grammar.hpp>
#include <consensus_spectra/simulate.hpp>

using namespace consensus;

TEST(RunConsensus, SymmetricRingOfFour) {
    const std::vector<double> x0{1, 2, 3, 4};
    const auto trace = run_consensus(NetworkModel::ring(4, 0.0), 2.0 / 3.0, x0, 20, 1e-300);
    ASSERT_EQ(trace.steps, 20u);
    for (double avg : trace.averages) EXPECT_NEAR(avg, 2.5, 1e-14);
    for (std::size_t t = 1; t < trace.error_norms.size(); ++t) {
        EXPECT_NEAR(trace.error_norms[t] / trace.error_norms[t - 1], 1.0 / 3.0, 1e-12) << t;
    }
    EXPECT_NEAR(trace.final_state[0], 2.5, 1e-8);
}

TEST(RunConsensus, FixedPointConvergesImmediately) {
    const std::vector<double> x0{2.5, 2.5, 2.5, 2.5};
    const auto trace = run_consensus(NetworkModel::ring(4, 0.0), 2.0 / 3.0, x0, 100, 1e-12);
    EXPECT_TRUE(trace.converged);
    EXPECT_EQ(trace.steps, 0u);
    EXPECT_EQ(trace.error_norms.front(), 0.0);
    EXPECT_EQ(trace.empirical_factor, 0.0);
}

TEST(RunConsensus, StopsAtTolerance) {
    const auto x0 = random_initial_state(16, 1);
    const auto model = NetworkModel::ring(16, 0.3);
    const auto trace = run_consensus(model, design_pipeline(model).h, x0, 10'000, 1e-9);
    EXPECT_TRUE(trace.converged);
    EXPECT_LE(trace.error_norms.back(), 1e-9);
    EXPECT_GT(trace.error_norms[trace.steps - 1], 1e-9);
}

TEST(RunConsensus, ValidatesInputs) {
    const auto model = NetworkModel::ring(4, 0.0);
    EXPECT_THROW(run_consensus(model, 0.5, std::vector<double>{1, 2, 3}, 10, 1e-9), ParameterError);
    EXPECT_THROW(run_consensus(model, 0.0, std::vector<double>{1, 2, 3, 4}, 10, 1e-9), ParameterError);
    EXPECT_THROW(run_consensus(model, 0.5, std::vector<double>{1, 2, 3, 4}, 10, 0.0), ParameterError);
    EXPECT_THROW(run_consensus(NetworkModel::ring(30, 0.0), 0.5, random_initial_state(30, 0), 10, 1e-9,
                               Multiply::Dense, 20),
                 SizeError);
}

TEST(RunConsensus, DivergesForOversizedStep) {
    EXPECT_THROW(run_consensus(NetworkModel::ring(8, 0.0), 2.0, random_initial_state(8, 3), 1000, 1e-9),
                 DivergenceError);
}

TEST(RunConsensus, DenseAndStructuredAgree) {
    for (const auto& model : {NetworkModel::ring(9, 0.4), NetworkModel::rnearest(12, 3, 0.7),
                              NetworkModel::torus({3, 4, 5}, 0.2)}) {
        const auto x0 = random_initial_state(model.order(), 11);
        const double h = design_pipeline(model).h;
        const auto a = run_consensus(model, h, x0, 200, 1e-300, Multiply::Structured);
        const auto b = run_consensus(model, h, x0, 200, 1e-300, Multiply::Dense);
        ASSERT_EQ(a.error_norms.size(), b.error_norms.size());
        for (std::size_t t = 0; t < a.error_norms.size(); ++t) {
            EXPECT_NEAR(a.error_norms[t], b.error_norms[t], 1e-12) << format_model(model);
            EXPECT_NEAR(a.averages[t], b.averages[t], 1e-12) << format_model(model);
        }
    }
}

TEST(RunConsensus, Deterministic) {
    const auto model = NetworkModel::torus({4, 5}, 0.6);
    const auto x0 = random_initial_state(model.order(), 99);
    const auto a = run_consensus(model, 0.3, x0, 300, 1e-300);
    const auto b = run_consensus(model, 0.3, x0, 300, 1e-300);
    EXPECT_EQ(a.error_norms, b.error_norms);
    EXPECT_EQ(a.averages, b.averages);
    EXPECT_EQ(a.final_state, b.final_state);
}

TEST(RunConsensus, PreservesAverageForAnyStep) {
    for (double h : {0.1, 0.5, 0.9, 1.2}) {
        for (const auto& model : {NetworkModel::ring(12, 0.9), NetworkModel::rnearest(15, 2, 0.5),
                                  NetworkModel::torus({4, 4}, 1.0)}) {
            const auto x0 = random_initial_state(model.order(), 5);
            double norm = 0.0;
            for (double v : x0) norm += v * v;
            norm = std::sqrt(norm);
            try {
                const auto trace = run_consensus(model, h, x0, 200, 1e-300);
                for (double avg : trace.averages) EXPECT_NEAR(avg, trace.averages.front(), 1e-12 * norm);
            } catch (const DivergenceError&) {
            }
        }
    }
}

TEST(EmpiricalContraction, RingOfFour) {
    const std::vector<double> x0{1, 2, 3, 4};
    const auto sym = run_consensus(NetworkModel::ring(4, 0.0), 2.0 / 3.0, x0, 150, 1e-300);
    EXPECT_NEAR(empirical_contraction(sym, 20), 1.0 / 3.0, 1e-3);

    const auto asym = run_consensus(NetworkModel::ring(4, 0.5), 8.0 / 11.0, x0, 150, 1e-300);
    EXPECT_NEAR(empirical_contraction(asym, 50), 5.0 / 11.0, 5e-3);
}

TEST(EmpiricalContraction, NeedsNonzeroTail) {
    SimulationTrace zero;
    zero.steps = 60;
    zero.error_norms.assign(61, 0.0);
    zero.averages.assign(61, 1.0);
    EXPECT_THROW(empirical_contraction(zero, 50), InsufficientDataError);

    SimulationTrace short_trace;
    short_trace.error_norms = {1.0, 0.5};
    EXPECT_THROW(empirical_contraction(short_trace, 5), InsufficientDataError);
}

TEST(EmpiricalContraction, TracksTrueSpectralFactor) {
    // Non-contracting despite a pair-solve gamma just below 1.
    const auto model = NetworkModel::rnearest(400, 3, 0.8);
    const auto d = design_pipeline(model);
    EXPECT_GE(d.gamma, 0.99);
    const auto trace = run_consensus(model, d.h, random_initial_state(400, 42), 300, 1e-9);
    EXPECT_FALSE(trace.converged);
    const double empirical = empirical_contraction(trace, 50);
    EXPECT_GE(empirical, 0.99);
    EXPECT_NEAR(empirical, spectral_factor(full_spectrum(model), d.h), 0.01 * empirical);
}

TEST(SplitMix64, ReferenceSequence) {
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, UniformRange) {
    const auto x = random_initial_state(10'000, 123);
    double sum = 0.0;
    for (double v : x) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
    }
    EXPECT_NEAR(sum / 10'000, 0.5, 0.02);
    EXPECT_EQ(x, random_initial_state(10'000, 123));
}

TEST(VerifyConsensus, AsymmetricRingPasses) {
    const auto model = NetworkModel::ring(16, 0.3);
    const auto report = verify_consensus(model, design_pipeline(model), 5, 42);
    ASSERT_EQ(report.size(), 5u);
    for (const auto& row : report) {
        EXPECT_TRUE(row.pass) << row.trial << ": " << row.message;
        EXPECT_EQ(row.seed, 42u + row.trial);
    }
}

TEST(VerifyConsensus, TorusFactorNearPointSix) {
    const auto model = NetworkModel::torus({4, 4}, 0.0);
    ConsensusDesign d{0.4, 0.6, 0.4, Method::PairSolve, std::nullopt};
    const auto report = verify_consensus(model, d, 3, 7);
    for (const auto& row : report) {
        EXPECT_TRUE(row.pass) << row.message;
        EXPECT_NEAR(row.empirical_factor, 0.6, 1e-3);
    }
}

TEST(VerifyConsensus, DivergenceIsAReportedFailure) {
    ConsensusDesign bad{2.0, 3.0, -2.0, Method::PairSolve, std::nullopt};
    const auto report = verify_consensus(NetworkModel::ring(8, 0.0), bad, 1, 42);
    ASSERT_EQ(report.size(), 1u);
    EXPECT_FALSE(report[0].pass);
    EXPECT_NE(report[0].message.find("DivergenceError"), std::string::npos);
}

TEST(VerifyConsensus, RequiresTrials) {
    const auto model = NetworkModel::ring(8, 0.0);
    EXPECT_THROW(verify_consensus(model, design_pipeline(model), 0, 1), ParameterError);
}
