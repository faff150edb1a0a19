#pragma once

#include <array>
#include <vector>

#include "telecert/linalg.hpp"

namespace telecert {

/// Column kets with exact rational/sqrt(2) entries.
ComplexMatrix ket0();
ComplexMatrix ket1();
ComplexMatrix ket_plus();
ComplexMatrix ket_minus();
ComplexMatrix ket_right();  // |R> = (|0> + i|1>)/sqrt(2)
ComplexMatrix ket_left();   // |L> = (|0> - i|1>)/sqrt(2)
ComplexMatrix bell_phi_plus();
ComplexMatrix bell_phi_minus();
ComplexMatrix bell_psi_plus();
ComplexMatrix bell_psi_minus();

/// The six single-qubit kets and four Bell kets in one bundle.
struct StandardKets {
    std::array<ComplexMatrix, 6> single;  // 0, 1, +, -, R, L
    std::array<ComplexMatrix, 4> bell;    // phi+, phi-, psi+, psi-
};
StandardKets standard_kets();

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// |psi><psi| for a column ket.
ComplexMatrix projector(const ComplexMatrix& ket);

/// Throws unless m is Hermitian (1e-10), unit trace (1e-10) and PSD (1e-9).
void validate_density(const ComplexMatrix& m, const char* what = "density matrix");

/// (1-p)|phi+><phi+| + (p/4) I (x) I
ComplexMatrix werner(double p_noise);

/// <psi| rho |psi>
double state_fidelity(const ComplexMatrix& rho, const ComplexMatrix& pure_ket);

/// (||rho^{T_A}||_1 - 1)/2, partial transpose on the first factor.
double negativity(const ComplexMatrix& rho);

/// A dichotomic projective measurement given by its outcome projectors.
struct MeasurementSetting {
    ComplexMatrix plus;
    ComplexMatrix minus;
};

/// Pauli X, Y, Z settings in the order used throughout (A1, A2, A3).
std::array<MeasurementSetting, 3> pauli_settings();

/// Unnormalized conditional states rho_{a_k|k} = tr_A[(Pi_{a_k|k} (x) I) rho]
/// for three dichotomic settings on subsystem A.
struct Assemblage {
    // members[k][0] is the +1 outcome, members[k][1] the -1 outcome.
    std::array<std::array<ComplexMatrix, 2>, 3> members;

    const ComplexMatrix& at(int setting, int outcome_sign) const {
        return members[setting][outcome_sign > 0 ? 0 : 1];
    }
    /// Bob's reduced state; identical for every setting (non-signalling).
    ComplexMatrix reduced() const;
    double non_signalling_error() const;
};

Assemblage assemblage(const ComplexMatrix& rho,
                      const std::array<MeasurementSetting, 3>& settings = pauli_settings());

}  // namespace telecert
