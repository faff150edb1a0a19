#pragma once

#include <array>
#include <optional>
#include <vector>

#include "telecert/process.hpp"
#include "telecert/sdp.hpp"

namespace telecert {

/// Raised when an SDP-backed operation cannot produce a trustworthy answer.
struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sign of outcome a_k (k = 0,1,2 for the X, Y, Z properties) assigned to the
/// hidden state with index xi in 0..7. The enumeration is lexicographic with
/// +1 first, matching the eight-state table.
int outcome_sign(int xi, int k);

/// Eight unnormalized hidden-state matrices sigma_xi = P(lambda_xi) rho^B_xi.
struct ClassicalRecipe {
    std::array<ComplexMatrix, 8> sigma;

    double weight(int xi) const { return sigma[xi].trace().real(); }
    double total_weight() const;
    ComplexMatrix hidden_state(int xi) const;
    /// Worst |sum_{a_k = +1} tr - total/2| over the three properties.
    double unnormalized_marginal_error() const;
    /// Larger of the normalization error |sum tr - 1| and the worst marginal
    /// error; the invariant bundle for normalized recipes.
    double marginal_error() const;
    double min_sigma_eigenvalue() const;
};

/// Uniform recipe with all hidden states I/2; its process matrix is I/4.
ClassicalRecipe uniform_recipe();
/// The measure-prepare recipe: P = 1/8 with the eigenstate-average states.
ClassicalRecipe mp_recipe();

/// Output states of a recipe: rho_m = 2 sum_{xi with a_k(m) = +1} sigma_xi.
ProcessOutputs recipe_outputs(const ClassicalRecipe& r);

/// Process matrix of a normalized recipe. Throws when the normalization or
/// marginal conditions are violated beyond 1e-7 (outputs would not have unit
/// trace).
ProcessMatrix recipe_to_process(const ClassicalRecipe& r);

struct SdpDiagnostics {
    double duality_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
};

struct BoundResult {
    double f_ct = 0.0;
    ClassicalRecipe witness;
    SdpDiagnostics diag;
};

/// Best fidelity with ideal teleportation over the classical-teleportation
/// set: maximize tr(chi_ct chi_I) subject to sigma psd, normalization, the
/// marginal conditions and chi_ct psd.
BoundResult classical_bound(const SdpOptions& opts = {});

struct CompositionResult {
    double alpha = 0.0;
    /// The classical part chi_ct(sigma); absent when chi itself is not psd.
    std::optional<ClassicalRecipe> residual_recipe;
    bool chi_was_psd = true;
    SdpDiagnostics diag;
};

/// Quantum composition: alpha = min 1 - sum tr sigma over recipes with
/// chi - chi_ct(sigma) psd. For chi that is itself not psd no decomposition
/// with a physical quantum part exists; alpha = 1 is reported with
/// chi_was_psd = false.
CompositionResult quantum_composition(const ProcessMatrix& chi, const SdpOptions& opts = {});

struct RobustnessResult {
    double beta = 0.0;
    ClassicalRecipe mixed_recipe;  // the witness with sum tr sigma = 1 + beta
    /// (chi_ct_tilde - chi)/beta when beta > 0.
    std::optional<ProcessMatrix> noise_process;
    SdpDiagnostics diag;
};

/// Quantum robustness: beta = min sum tr sigma - 1 over recipes with
/// chi_ct(sigma) - chi psd and total weight >= 1.
RobustnessResult quantum_robustness(const ProcessMatrix& chi, const SdpOptions& opts = {});

struct FindRecipeResult {
    std::optional<ClassicalRecipe> recipe;
    double alpha = 0.0;  // membership gap; 0 means chi is classical
    std::vector<double> dual_certificate;
    SdpDiagnostics diag;
};

/// Membership in the classical set: a normalized recipe reproducing chi
/// within 1e-7, or nothing plus the separating dual certificate.
FindRecipeResult find_recipe(const ProcessMatrix& chi, const SdpOptions& opts = {});

struct RecipeCheck {
    bool ok = false;
    double max_deviation = 0.0;
};

/// True iff the recipe invariants hold (psd within 1e-9, normalized and
/// marginal conditions within 1e-9) and its process matches chi entrywise
/// within 1e-7.
RecipeCheck verify_recipe(const ClassicalRecipe& r, const ProcessMatrix& chi);

// ---------------------------------------------------------------------------
// Measure-prepare strategies
// ---------------------------------------------------------------------------

struct MpSetting {
    MeasurementSetting observable;
    double probability = 0.0;
};

struct MeasurePrepareSpec {
    std::vector<MpSetting> settings;
};

/// Three Pauli observables chosen uniformly.
MeasurePrepareSpec default_mp_spec();

/// rho_m = sum_k p_k sum_a |<a_k|m>|^2 |a_k><a_k| for a 2x2 input state.
ComplexMatrix mp_output_state(const ComplexMatrix& input_state, const MeasurePrepareSpec& spec);

/// chi_CT,MP: the measure-prepare process under the default three-Pauli spec.
ProcessMatrix mp_process();

// ---------------------------------------------------------------------------
// Extended measure-prepare model (separable shared pairs)
// ---------------------------------------------------------------------------

struct SeparableTerm {
    double p = 0.0;
    ComplexMatrix rho_a;
    ComplexMatrix rho_b;
};

/// One outcome of a product POVM {M^V_a (x) M^A_a} with its correction U_a.
struct ProductOutcome {
    ComplexMatrix m_v;
    ComplexMatrix m_a;
    ComplexMatrix correction;
};

struct ProductMpSpec {
    std::vector<SeparableTerm> resource;
    std::vector<ProductOutcome> outcomes;
};

struct EmpProcessResult {
    ProcessMatrix chi;
    ProcessOutputs outputs;
    std::vector<int> dropped_outcomes;  // outcomes with vanishing mass
};

/// Teleportation simulated with a separable resource and a product POVM:
/// rho_out,m = sum_a P(a|m) U_a rho^B_a U_a^dag.
EmpProcessResult emp_product_process(const ProductMpSpec& spec);

struct EmpRecipeResult {
    ClassicalRecipe recipe;  // sigma_xi = (1/8) rho^B_xi
    std::array<bool, 8> psd_flags{};
    std::vector<int> dropped_outcomes;
};

/// The explicit hidden-state solution with P(lambda_xi) = 1/8. Individual
/// states can carry negative coefficients for adversarial POVMs; they are
/// flagged, and the linear reproduction of the outputs holds regardless.
EmpRecipeResult emp_product_recipe(const ProductMpSpec& spec);

/// Partial Bell-state measurement spec: M_1 = |phi+><phi+|, M_2 = I - M_1,
/// with a correction unitary per outcome.
struct BsmMpSpec {
    std::vector<SeparableTerm> resource;
    std::array<ComplexMatrix, 2> corrections;
};

struct BsmOutcomeRecipe {
    std::array<double, 8> weight{};              // P(lambda_xi | a)
    std::array<ComplexMatrix, 8> hidden_state;   // rho^B_{xi,a}; empty if weight ~ 0
};

struct EmpBsmResult {
    ProcessMatrix chi;
    ProcessOutputs outputs;
    ClassicalRecipe recipe;  // combined over outcomes
    std::array<BsmOutcomeRecipe, 2> per_outcome;
};

EmpBsmResult emp_bsm_process(const BsmMpSpec& spec);

}  // namespace telecert
