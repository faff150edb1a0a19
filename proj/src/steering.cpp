#include "telecert/steering.hpp"

#include <algorithm>
#include <cmath>

namespace telecert {

std::vector<std::vector<int>> deterministic_strategies(int n_settings) {
    if (n_settings < 1) throw std::invalid_argument("need at least one setting");
    std::vector<std::vector<int>> out;
    const int count = 1 << n_settings;
    for (int idx = 0; idx < count; ++idx) {
        std::vector<int> table(n_settings);
        for (int k = 0; k < n_settings; ++k)
            table[k] = ((idx >> (n_settings - 1 - k)) & 1) == 0 ? +1 : -1;
        out.push_back(std::move(table));
    }
    return out;
}

SteeringResult steerable_weight(const Assemblage& asm_in, const SdpOptions& opts) {
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a) {
            const auto& m = asm_in.members[k][a];
            if (m.rows() != 2 || m.cols() != 2 || m.hermiticity_error() > 1e-9)
                throw std::invalid_argument("steerable_weight: bad assemblage member");
            if (min_eigenvalue(m.hermitized()) < -1e-9)
                throw std::invalid_argument("steerable_weight: assemblage member not psd");
        }
    if (asm_in.non_signalling_error() > 1e-9)
        throw std::invalid_argument("steerable_weight: assemblage is signalling");

    const auto strategies = deterministic_strategies(3);
    const int nl = static_cast<int>(strategies.size());

    // Blocks: 8 LHS members, then 6 slack blocks rho_{a|k} - sum D sigma.
    SdpProblem p;
    for (int l = 0; l < nl; ++l) p.blocks.push_back({"lhs" + std::to_string(l + 1), 2});
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a)
            p.blocks.push_back({"slack_k" + std::to_string(k + 1) + (a == 0 ? "p" : "m"), 2});
    const int nb = nl + 6;
    p.objective.assign(nb, ComplexMatrix());
    for (int l = 0; l < nl; ++l) p.objective[l] = ComplexMatrix::identity(2);

    // Orthonormal Hermitian 2x2 basis for the entrywise equalities.
    const double s2 = 1.0 / std::sqrt(2.0);
    std::vector<ComplexMatrix> basis = {
        ComplexMatrix::from_rows({{1, 0}, {0, 0}}),
        ComplexMatrix::from_rows({{0, 0}, {0, 1}}),
        ComplexMatrix::from_rows({{0, s2}, {s2, 0}}),
        ComplexMatrix::from_rows({{0, Complex(0, -s2)}, {Complex(0, s2), 0}})};

    auto inner = [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return (a * b).trace().real();
    };

    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a) {
            const int sign = a == 0 ? +1 : -1;
            const int slack = nl + 2 * k + a;
            for (const auto& g : basis) {
                SdpConstraint c;
                c.coeff.assign(nb, ComplexMatrix());
                c.coeff[slack] = g;
                for (int l = 0; l < nl; ++l)
                    if (strategies[l][k] == sign) c.coeff[l] = g;
                c.rhs = inner(g, asm_in.members[k][a]);
                p.constraints.push_back(std::move(c));
            }
        }

    const SdpSolution s = solve(p, opts);
    if (s.status != SdpStatus::optimal)
        throw SolverFailure(std::string("steerable_weight: solver reported ") +
                            to_string(s.status));

    SteeringResult res;
    res.steerable_weight = std::clamp(1.0 - s.objective, 0.0, 1.0);
    res.diag = SdpDiagnostics{s.duality_gap, s.primal_residual, s.dual_residual, s.iterations};
    for (int l = 0; l < nl; ++l) res.lhs_witness[l] = s.primal[l];

    // Witness re-verification: the LHS model must stay below the assemblage.
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a) {
            ComplexMatrix lhs(2, 2);
            const int sign = a == 0 ? +1 : -1;
            for (int l = 0; l < nl; ++l)
                if (strategies[l][k] == sign) lhs += res.lhs_witness[l];
            if (min_eigenvalue(asm_in.members[k][a].hermitized() - lhs) < -1e-8)
                throw SolverFailure("steerable_weight: witness failed re-verification");
        }
    return res;
}

}  // namespace telecert
