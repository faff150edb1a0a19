#pragma once

#include <array>
#include <cstdint>

#include "telecert/process.hpp"

namespace telecert {

enum class PauliAxis { x = 0, y = 1, z = 2 };

struct CountRecord {
    PauliAxis setting = PauliAxis::z;
    long long n_plus = 0;
    long long n_minus = 0;
    long long shots() const { return n_plus + n_minus; }
};

/// splitmix64 step; the published mixing function used to derive per-record
/// seeds so sampling is independent of scheduling.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Binomial draw of the +1 outcome count when measuring `setting` on rho.
/// Uses std::mt19937_64 with a fixed uniform-double mapping, so counts are
/// bit-reproducible across platforms for a given seed.
CountRecord sample_counts(const ComplexMatrix& rho, PauliAxis setting, long long shots,
                          std::uint64_t seed);

struct ReconstructedState {
    ComplexMatrix rho;
    bool clipped = false;  // eigenvalues were clipped to restore psd
};

/// Linear inversion rho = (I + sum_k <sigma_k> sigma_k)/2 from one record per
/// Pauli setting; non-psd results are eigenvalue-clipped at 0, renormalized
/// and flagged.
ReconstructedState reconstruct_state(const std::array<CountRecord, 3>& records);

struct ReconstructedProcess {
    ProcessMatrix chi;
    bool clipped = false;
};

/// Twelve records (three settings x four inputs m = 0, 1, +, R) -> chi.
ReconstructedProcess reconstruct_process(
    const std::array<std::array<CountRecord, 3>, 4>& records);

/// Full verification pipeline on a known process: sample the outputs of the
/// four verification inputs (record index 3*m + k seeds each draw) and
/// reconstruct.
ReconstructedProcess simulate_process_tomography(const ProcessMatrix& chi_true,
                                                 long long shots_per_setting,
                                                 std::uint64_t seed);

}  // namespace telecert
