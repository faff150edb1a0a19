#pragma once

#include <array>
#include <vector>

#include "telecert/classical.hpp"
#include "telecert/quantum.hpp"
#include "telecert/sdp.hpp"

namespace telecert {

/// Deterministic response strategies for n dichotomic settings: all outcome
/// tables a_k(lambda) in {+1,-1}, lexicographic with +1 first. For n = 3 the
/// order matches the eight-state table of the classical model.
std::vector<std::vector<int>> deterministic_strategies(int n_settings);

struct SteeringResult {
    double steerable_weight = 0.0;
    std::array<ComplexMatrix, 8> lhs_witness;
    SdpDiagnostics diag;
};

/// SW = 1 - mu* with mu* = max sum_lambda tr sigma_lambda subject to
/// sigma_lambda psd and sum_lambda D(a|k,lambda) sigma_lambda <= rho_{a|k}.
SteeringResult steerable_weight(const Assemblage& asm_in, const SdpOptions& opts = {});

}  // namespace telecert
