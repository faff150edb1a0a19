#pragma once

#include "telecert/linalg.hpp"
#include "telecert/quantum.hpp"

namespace telecert {

/// 4x4 Hermitian trace-1 process matrix in the operator basis
/// M_k = |k1><k2| with k = 1 + k1 + 2*k2. This index convention is fixed
/// here and shared by every module.
using ProcessMatrix = ComplexMatrix;

/// Tomographic output states for the verification inputs m = 0, 1, +, R.
struct ProcessOutputs {
    ComplexMatrix out0, out1, outp, outr;
};

namespace detail {
/// Block assembly without input validation; also used on unnormalized
/// matrices when building SDP cone maps.
ProcessMatrix assemble_blocks(const ProcessOutputs& o);
}  // namespace detail

/// Process matrix from four output states: the 2x2 blocks are rho_0, rho_1
/// on the diagonal and rho_+ +- i rho_R minus the coherence correction
/// e^{i pi/4}(rho_0 + rho_1)/sqrt(2) off the diagonal, all halved.
ProcessMatrix assemble_process(const ProcessOutputs& o);

/// Process matrix of ideal teleportation (the identity channel); rank one.
ProcessMatrix chi_ideal();

/// Throws unless chi is 4x4 Hermitian (tol_herm) with unit trace (tol_trace).
void validate_process(const ProcessMatrix& chi, double tol_herm = 1e-8,
                      double tol_trace = 1e-8);

/// Apply the channel: rho_out = sum_{k,j} 2 chi(k,j) M_k rho M_j^dag.
/// Throws if the result trace deviates from the input trace by more than
/// 1e-8 (chi is not trace preserving); never silently normalizes.
ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& rho);

/// Re tr(a b), with round-off within 1e-9 clamped into [0, 1].
double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b);

/// Average state fidelity from process fidelity: (2 f + 1)/3.
double avg_state_fidelity(double f_process);
/// Inverse map: (3 f_avg - 1)/2.
double process_fidelity_from_avg(double f_avg);

/// Process matrix of teleportation run with `resource` as the shared pair
/// and everything else ideal: expand the resource in the Bell basis and use
/// the corrections {I, Z, X, Y} for {phi+, phi-, psi+, psi-}. Guarantees
/// process_fidelity(chi_ideal(), result) == state_fidelity(resource, phi+).
ProcessMatrix resource_to_process(const ComplexMatrix& resource);

}  // namespace telecert
