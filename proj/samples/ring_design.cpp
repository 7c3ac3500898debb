// Best-constant design for a 16-node asymmetric ring, checked by simulation.

#include <cstdio>

#include <consensus_spectra/consensus.hpp>

int main() {
    using namespace consensus;

    const auto model = NetworkModel::ring(16, 0.3);
    const auto design = design_pipeline(model);
    std::printf("h = %.6f  gamma = %.6f  R = %.6f\n", design.h, design.gamma, design.rate);
    std::printf("lambda_s = %.6f%+.6fi  lambda_l = %.6f%+.6fi\n", design.extremal->lambda_s.re,
                design.extremal->lambda_s.im, design.extremal->lambda_l.re, design.extremal->lambda_l.im);

    const auto closed = closed_form_R(model, design);
    std::printf("closed form (%s): R = %.6f [%s]\n", to_string(closed.formula), closed.value, to_string(closed.tag));

    for (const auto& trial : verify_consensus(model, design, 3, 42)) {
        std::printf("trial %zu: empirical %.6f %s\n", trial.trial, trial.empirical_factor, trial.pass ? "ok" : "FAIL");
    }
}
