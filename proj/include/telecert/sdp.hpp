#pragma once

#include <optional>
#include <string>
#include <vector>

#include "telecert/linalg.hpp"

namespace telecert {

/// One PSD variable block: a dim x dim complex Hermitian matrix.
struct SdpBlock {
    std::string name;
    int dim = 0;
};

/// Affine equality sum_b tr(coeff[b] * X_b) = rhs with Hermitian coefficients.
/// A coefficient may be an empty matrix when the block does not participate.
struct SdpConstraint {
    std::vector<ComplexMatrix> coeff;
    double rhs = 0.0;
};

/// maximize sum_b tr(objective[b] * X_b) over Hermitian PSD blocks subject to
/// affine equality constraints. Matrix-valued affine-PSD conditions are
/// modelled with an extra slack block tied down by entrywise equalities.
struct SdpProblem {
    std::vector<SdpBlock> blocks;
    std::vector<ComplexMatrix> objective;
    std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { optimal, infeasible, numerical_failure };

struct SdpSolution {
    SdpStatus status = SdpStatus::numerical_failure;
    std::vector<ComplexMatrix> primal;
    std::vector<double> dual;
    double objective = 0.0;       // primal value of the maximization
    double dual_objective = 0.0;  // r'y
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double duality_gap = 0.0;  // dual_objective - objective
    int iterations = 0;
    /// Farkas ray y with adj(A)(y) >= 0 and r'y < 0, set when infeasible.
    std::vector<double> improving_ray;
};

struct SdpOptions {
    double gap_tol = 1e-9;     // target absolute duality gap
    double gap_accept = 1e-7;  // worst gap still reported as optimal
    double feas_tol = 1e-8;    // residual contract
    int max_iterations = 500;
};

const char* to_string(SdpStatus s);

/// Primal-dual path-following interior-point solve with Nesterov-Todd
/// scaling. Complex Hermitian blocks are handled through the real symmetric
/// embedding [[Re, -Im], [Im, Re]] (block dimension doubles).
SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

}  // namespace telecert
