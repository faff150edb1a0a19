#pragma once

#include <optional>
#include <string>
#include <vector>

#include "telecert/classical.hpp"
#include "telecert/steering.hpp"
#include "telecert/tomography.hpp"

namespace telecert {

struct Thresholds {
    double f_ct = 0.0;
    double f_avg = 0.0;      // (2 f_ct + 1)/3
    double guard = 1e-6;     // strict-inequality guard band on verdicts
};

struct CertificationReport {
    double f_expt = 0.0;
    double f_avg_state = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    bool gqt = false;
    std::vector<std::string> flags;  // "non_psd_input", "clipped_tomography"
    Thresholds thresholds;
};

struct SweepRow {
    double p_noise = 0.0;
    double f_expt = 0.0;
    double f_avg_state = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double negativity = 0.0;
    double steerable_weight = 0.0;
    bool gqt = false;
};

struct SweepGrid {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;
};

struct ShotSpec {
    long long shots = 0;
    std::uint64_t seed = 0;
};

/// Runs the SDP-backed certifications against the classical bound computed
/// once at construction.
class Certifier {
  public:
    explicit Certifier(const SdpOptions& opts = {}, double guard = 1e-6);

    const Thresholds& thresholds() const { return thresholds_; }
    const SdpOptions& options() const { return options_; }

    CertificationReport certify(const ProcessMatrix& chi,
                                bool clipped_tomography = false) const;

    /// Werner-family sweep; exact arithmetic without shots, the simulated
    /// tomography pipeline with them. Negativity and steerable weight always
    /// describe the exact resource state at each grid point. Points are
    /// evaluated in parallel with per-point seeds derived from the master
    /// seed and grid index, so rows do not depend on scheduling.
    std::vector<SweepRow> werner_sweep(const SweepGrid& grid,
                                       const std::optional<ShotSpec>& shots = {}) const;

  private:
    SdpOptions options_;
    Thresholds thresholds_;
};

enum class FidelityKind { process, avg_state };

struct ExperimentEntry {
    std::string name;
    FidelityKind kind = FidelityKind::process;
    double value = 0.0;
};

struct ClassifiedEntry {
    std::string name;
    double f_process = 0.0;
    bool gqt = false;
};

/// Table-1 style classification: avg-state values are mapped through the
/// inverse fidelity relation, then compared against the classical bound.
std::vector<ClassifiedEntry> classify(const std::vector<ExperimentEntry>& entries,
                                      const Thresholds& thresholds);

/// Grid helper shared by the CLI; throws on an empty or descending grid.
std::vector<double> grid_points(const SweepGrid& grid);

}  // namespace telecert
