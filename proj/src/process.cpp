#include "telecert/process.hpp"

#include <cmath>

namespace telecert {

namespace {
Complex phase_pi4() { return std::polar(1.0, M_PI / 4.0); }
}  // namespace

namespace detail {

ProcessMatrix assemble_blocks(const ProcessOutputs& o) {
    const Complex c = phase_pi4() / std::sqrt(2.0);
    ComplexMatrix itilde = (o.out0 + o.out1) * c;
    ComplexMatrix upper = o.outp + o.outr * Complex(0, 1) - itilde;
    ComplexMatrix lower = o.outp - o.outr * Complex(0, 1) - itilde.adjoint();

    ComplexMatrix chi(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            chi(i, j) = 0.5 * o.out0(i, j);
            chi(i, j + 2) = 0.5 * upper(i, j);
            chi(i + 2, j) = 0.5 * lower(i, j);
            chi(i + 2, j + 2) = 0.5 * o.out1(i, j);
        }
    return chi;
}

}  // namespace detail

ProcessMatrix assemble_process(const ProcessOutputs& o) {
    for (const ComplexMatrix* m : {&o.out0, &o.out1, &o.outp, &o.outr}) {
        if (m->rows() != 2 || m->cols() != 2)
            throw std::invalid_argument("assemble_process: outputs must be 2x2");
        if (m->hermiticity_error() > 1e-8)
            throw std::invalid_argument("assemble_process: output not Hermitian");
        if (std::abs(m->trace().real() - 1.0) > 1e-6)
            throw std::invalid_argument("assemble_process: output trace differs from 1");
    }
    return detail::assemble_blocks(o);
}

ProcessMatrix chi_ideal() {
    return assemble_process({projector(ket0()), projector(ket1()), projector(ket_plus()),
                             projector(ket_right())});
}

void validate_process(const ProcessMatrix& chi, double tol_herm, double tol_trace) {
    if (chi.rows() != 4 || chi.cols() != 4)
        throw std::invalid_argument("process matrix must be 4x4");
    if (chi.hermiticity_error() > tol_herm)
        throw std::invalid_argument("process matrix not Hermitian");
    if (std::abs(chi.trace().real() - 1.0) > tol_trace || std::abs(chi.trace().imag()) > tol_trace)
        throw std::invalid_argument("process matrix trace differs from 1");
}

ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& rho) {
    if (chi.rows() != 4 || chi.cols() != 4 || rho.rows() != 2 || rho.cols() != 2)
        throw std::invalid_argument("apply_process: dimension mismatch");
    // Index k (0-based) <-> M_k = |k1><k2| with k1 = k & 1, k2 = k >> 1.
    ComplexMatrix out(2, 2);
    for (int k = 0; k < 4; ++k) {
        const int k1 = k & 1, k2 = k >> 1;
        for (int j = 0; j < 4; ++j) {
            const int j1 = j & 1, j2 = j >> 1;
            out(k1, j1) += 2.0 * chi(k, j) * rho(k2, j2);
        }
    }
    if (std::abs(out.trace() - rho.trace()) > 1e-8)
        throw std::runtime_error("apply_process: chi is not trace preserving");
    return out;
}

double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
    if (a.rows() != 4 || a.cols() != 4 || b.rows() != 4 || b.cols() != 4)
        throw std::invalid_argument("process_fidelity: matrices must be 4x4");
    double f = (a * b).trace().real();
    if (f < 0.0 && f > -1e-9) f = 0.0;
    if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
    return f;
}

double avg_state_fidelity(double f_process) {
    if (f_process < -1e-12 || f_process > 1.0 + 1e-12)
        throw std::invalid_argument("avg_state_fidelity: input outside [0, 1]");
    return (2.0 * f_process + 1.0) / 3.0;
}

double process_fidelity_from_avg(double f_avg) {
    if (f_avg < 1.0 / 3.0 - 1e-12 || f_avg > 1.0 + 1e-12)
        throw std::invalid_argument("process_fidelity_from_avg: input outside [1/3, 1]");
    return (3.0 * f_avg - 1.0) / 2.0;
}

ProcessMatrix resource_to_process(const ComplexMatrix& resource) {
    validate_density(resource, "resource state");
    if (resource.rows() != 4) throw std::invalid_argument("resource state must be 4x4");

    const std::array<ComplexMatrix, 4> bell = {bell_phi_plus(), bell_phi_minus(),
                                               bell_psi_plus(), bell_psi_minus()};
    const std::array<ComplexMatrix, 4> corr = {ComplexMatrix::identity(2), pauli_z(),
                                               pauli_x(), pauli_y()};
    const std::array<ComplexMatrix, 4> inputs = {projector(ket0()), projector(ket1()),
                                                 projector(ket_plus()), projector(ket_right())};

    // Averaging the corrected outcomes of the Bell-state measurement cancels
    // the Bell-basis cross terms of the resource; only the diagonal
    // coefficients f_b survive and the channel is the Pauli mixture
    // sum_b f_b E_b rho E_b.
    std::array<ComplexMatrix, 4> outs;
    for (int m = 0; m < 4; ++m) {
        ComplexMatrix acc(2, 2);
        for (int b = 0; b < 4; ++b) {
            const double f = (bell[b].adjoint() * resource * bell[b])(0, 0).real();
            if (f == 0.0) continue;
            acc += (corr[b] * inputs[m] * corr[b].adjoint()) * Complex(f);
        }
        outs[m] = acc.hermitized();
    }
    return assemble_process({outs[0], outs[1], outs[2], outs[3]});
}

}  // namespace telecert
