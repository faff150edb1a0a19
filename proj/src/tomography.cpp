#include "telecert/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace telecert {

namespace {

ComplexMatrix plus_projector(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::x: return projector(ket_plus());
        case PauliAxis::y: return projector(ket_right());
        default: return projector(ket0());
    }
}

ComplexMatrix pauli(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::x: return pauli_x();
        case PauliAxis::y: return pauli_y();
        default: return pauli_z();
    }
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa mapping; fixed across platforms unlike the standard
    // distributions.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

CountRecord sample_counts(const ComplexMatrix& rho, PauliAxis setting, long long shots,
                          std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    const double p = std::clamp((plus_projector(setting) * rho).trace().real(), 0.0, 1.0);
    std::mt19937_64 rng(seed);
    long long n_plus = 0;
    for (long long i = 0; i < shots; ++i)
        if (uniform01(rng) < p) ++n_plus;
    return CountRecord{setting, n_plus, shots - n_plus};
}

ReconstructedState reconstruct_state(const std::array<CountRecord, 3>& records) {
    ComplexMatrix rho = ComplexMatrix::identity(2) * Complex(0.5);
    for (const auto& rec : records) {
        if (rec.shots() <= 0 || rec.n_plus < 0 || rec.n_minus < 0)
            throw std::invalid_argument("reconstruct_state: bad counts");
        const double expectation =
            static_cast<double>(rec.n_plus - rec.n_minus) / static_cast<double>(rec.shots());
        rho += pauli(rec.setting) * Complex(0.5 * expectation);
    }

    ReconstructedState out;
    const auto eig = hermitian_eig(rho);
    if (eig.eigenvalues.front() >= -1e-12) {
        out.rho = rho;
        return out;
    }
    double total = 0.0;
    for (double v : eig.eigenvalues) total += std::max(v, 0.0);
    ComplexMatrix clipped(2, 2);
    for (int k = 0; k < 2; ++k) {
        const double lam = std::max(eig.eigenvalues[k], 0.0) / total;
        if (lam == 0.0) continue;
        ComplexMatrix v(2, 1);
        v(0, 0) = eig.eigenvectors(0, k);
        v(1, 0) = eig.eigenvectors(1, k);
        clipped += projector(v) * Complex(lam);
    }
    out.rho = clipped;
    out.clipped = true;
    return out;
}

ReconstructedProcess reconstruct_process(
    const std::array<std::array<CountRecord, 3>, 4>& records) {
    std::array<ComplexMatrix, 4> outs;
    bool clipped = false;
    for (int m = 0; m < 4; ++m) {
        const ReconstructedState st = reconstruct_state(records[m]);
        outs[m] = st.rho;
        clipped = clipped || st.clipped;
    }
    ReconstructedProcess out;
    out.chi = assemble_process({outs[0], outs[1], outs[2], outs[3]});
    out.clipped = clipped;
    return out;
}

ReconstructedProcess simulate_process_tomography(const ProcessMatrix& chi_true,
                                                 long long shots_per_setting,
                                                 std::uint64_t seed) {
    const std::array<ComplexMatrix, 4> inputs = {projector(ket0()), projector(ket1()),
                                                 projector(ket_plus()), projector(ket_right())};
    std::array<std::array<CountRecord, 3>, 4> records;
    for (int m = 0; m < 4; ++m) {
        const ComplexMatrix out = apply_process(chi_true, inputs[m]);
        for (int k = 0; k < 3; ++k)
            records[m][k] = sample_counts(out, static_cast<PauliAxis>(k), shots_per_setting,
                                          derive_seed(seed, 3 * m + k));
    }
    return reconstruct_process(records);
}

}  // namespace telecert
