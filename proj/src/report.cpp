#include "telecert/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

namespace telecert {

Certifier::Certifier(const SdpOptions& opts, double guard) : options_(opts) {
    const BoundResult bound = classical_bound(options_);
    thresholds_.f_ct = bound.f_ct;
    thresholds_.f_avg = avg_state_fidelity(bound.f_ct);
    thresholds_.guard = guard;
}

CertificationReport Certifier::certify(const ProcessMatrix& chi, bool clipped_tomography) const {
    validate_process(chi, 1e-6, 1e-6);
    CertificationReport rep;
    rep.thresholds = thresholds_;
    rep.f_expt = process_fidelity(chi_ideal(), chi);
    rep.f_avg_state = avg_state_fidelity(std::clamp(rep.f_expt, 0.0, 1.0));
    rep.gqt = rep.f_expt > thresholds_.f_ct + thresholds_.guard;

    // Work on an exactly Hermitian unit-trace copy; file inputs are only
    // validated to 1e-6.
    ComplexMatrix balanced = chi.hermitized();
    const double tr = balanced.trace().real();
    balanced = balanced * Complex(1.0 / tr);

    const CompositionResult comp = quantum_composition(balanced, options_);
    rep.alpha = comp.alpha;
    if (!comp.chi_was_psd) rep.flags.push_back("non_psd_input");
    rep.beta = quantum_robustness(balanced, options_).beta;
    if (clipped_tomography) rep.flags.push_back("clipped_tomography");
    return rep;
}

std::vector<double> grid_points(const SweepGrid& grid) {
    if (!(grid.step > 0.0) || grid.start < 0.0 || grid.stop > 1.0 || grid.start > grid.stop)
        throw std::invalid_argument("bad sweep grid");
    std::vector<double> pts;
    const int n = static_cast<int>(std::floor((grid.stop - grid.start) / grid.step + 1e-9));
    for (int i = 0; i <= n; ++i) pts.push_back(std::min(grid.start + i * grid.step, 1.0));
    return pts;
}

std::vector<SweepRow> Certifier::werner_sweep(const SweepGrid& grid,
                                              const std::optional<ShotSpec>& shots) const {
    const std::vector<double> pts = grid_points(grid);
    std::vector<SweepRow> rows(pts.size());

    auto eval_point = [&](size_t idx) {
        const double p = pts[idx];
        const ComplexMatrix resource = werner(p);
        ProcessMatrix chi = resource_to_process(resource);
        bool clipped = false;
        if (shots) {
            const ReconstructedProcess rec = simulate_process_tomography(
                chi, shots->shots, derive_seed(shots->seed, idx));
            chi = rec.chi;
            clipped = rec.clipped;
        }
        const CertificationReport rep = certify(chi, clipped);
        SweepRow row;
        row.p_noise = p;
        row.f_expt = rep.f_expt;
        row.f_avg_state = rep.f_avg_state;
        row.alpha = rep.alpha;
        row.beta = rep.beta;
        row.negativity = negativity(resource);
        row.steerable_weight = steerable_weight(assemblage(resource), options_).steerable_weight;
        row.gqt = rep.gqt;
        rows[idx] = row;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t workers = std::min<size_t>(hw, pts.size());
    std::vector<std::future<void>> futs;
    std::atomic<size_t> next{0};
    for (size_t w = 0; w < workers; ++w)
        futs.push_back(std::async(std::launch::async, [&] {
            for (size_t i = next.fetch_add(1); i < pts.size(); i = next.fetch_add(1))
                eval_point(i);
        }));
    for (auto& f : futs) f.get();
    return rows;
}

std::vector<ClassifiedEntry> classify(const std::vector<ExperimentEntry>& entries,
                                      const Thresholds& thresholds) {
    std::vector<ClassifiedEntry> out;
    for (const auto& e : entries) {
        ClassifiedEntry c;
        c.name = e.name;
        c.f_process = e.kind == FidelityKind::process ? e.value
                                                      : process_fidelity_from_avg(e.value);
        c.gqt = c.f_process > thresholds.f_ct + thresholds.guard;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace telecert
