#include "telecert/quantum.hpp"

#include <cmath>

namespace telecert {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
ComplexMatrix ket2(Complex a, Complex b) { return ComplexMatrix(2, 1, {a, b}); }
ComplexMatrix ket4(Complex a, Complex b, Complex c, Complex d) {
    return ComplexMatrix(4, 1, {a, b, c, d});
}
}  // namespace

ComplexMatrix ket0() { return ket2(1, 0); }
ComplexMatrix ket1() { return ket2(0, 1); }
ComplexMatrix ket_plus() { return ket2(kInvSqrt2, kInvSqrt2); }
ComplexMatrix ket_minus() { return ket2(kInvSqrt2, -kInvSqrt2); }
ComplexMatrix ket_right() { return ket2(kInvSqrt2, Complex(0, kInvSqrt2)); }
ComplexMatrix ket_left() { return ket2(kInvSqrt2, Complex(0, -kInvSqrt2)); }
ComplexMatrix bell_phi_plus() { return ket4(kInvSqrt2, 0, 0, kInvSqrt2); }
ComplexMatrix bell_phi_minus() { return ket4(kInvSqrt2, 0, 0, -kInvSqrt2); }
ComplexMatrix bell_psi_plus() { return ket4(0, kInvSqrt2, kInvSqrt2, 0); }
ComplexMatrix bell_psi_minus() { return ket4(0, kInvSqrt2, -kInvSqrt2, 0); }

StandardKets standard_kets() {
    return StandardKets{
        {ket0(), ket1(), ket_plus(), ket_minus(), ket_right(), ket_left()},
        {bell_phi_plus(), bell_phi_minus(), bell_psi_plus(), bell_psi_minus()}};
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }
ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1, 0}, {0, -1}}); }

ComplexMatrix projector(const ComplexMatrix& ket) {
    if (ket.cols() != 1) throw std::invalid_argument("projector wants a column ket");
    return ket * ket.adjoint();
}

void validate_density(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": not square");
    if (m.hermiticity_error() > 1e-10)
        throw std::invalid_argument(std::string(what) + ": not Hermitian within 1e-10");
    if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10)
        throw std::invalid_argument(std::string(what) + ": trace differs from 1");
    if (!is_psd(m, 1e-9))
        throw std::invalid_argument(std::string(what) + ": not positive semidefinite");
}

ComplexMatrix werner(double p_noise) {
    if (p_noise < 0.0 || p_noise > 1.0)
        throw std::invalid_argument("werner: p_noise outside [0, 1]");
    ComplexMatrix w = projector(bell_phi_plus()) * Complex(1.0 - p_noise);
    w += ComplexMatrix::identity(4) * Complex(p_noise / 4.0);
    return w;
}

double state_fidelity(const ComplexMatrix& rho, const ComplexMatrix& pure_ket) {
    if (pure_ket.cols() != 1 || rho.rows() != pure_ket.rows() || rho.rows() != rho.cols())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    const ComplexMatrix v = pure_ket.adjoint() * rho * pure_ket;
    return v(0, 0).real();
}

double negativity(const ComplexMatrix& rho) {
    const double v = 0.5 * (trace_norm(partial_transpose(rho, Subsystem::first)) - 1.0);
    return (v < 0.0 && v > -1e-9) ? 0.0 : v;
}

std::array<MeasurementSetting, 3> pauli_settings() {
    return {MeasurementSetting{projector(ket_plus()), projector(ket_minus())},
            MeasurementSetting{projector(ket_right()), projector(ket_left())},
            MeasurementSetting{projector(ket0()), projector(ket1())}};
}

ComplexMatrix Assemblage::reduced() const {
    return members[0][0] + members[0][1];
}

double Assemblage::non_signalling_error() const {
    const ComplexMatrix ref = reduced();
    double err = 0.0;
    for (int k = 1; k < 3; ++k) err = std::max(err, (members[k][0] + members[k][1] - ref).max_abs());
    return err;
}

Assemblage assemblage(const ComplexMatrix& rho,
                      const std::array<MeasurementSetting, 3>& settings) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("assemblage: state must be 4x4");
    Assemblage out;
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    for (int k = 0; k < 3; ++k) {
        const auto& s = settings[k];
        if ((s.plus + s.minus - eye).max_abs() > 1e-10)
            throw std::invalid_argument("assemblage: projectors do not complete to identity");
        out.members[k][0] = partial_trace(kron(s.plus, eye) * rho, Subsystem::second);
        out.members[k][1] = partial_trace(kron(s.minus, eye) * rho, Subsystem::second);
    }
    return out;
}

}  // namespace telecert
