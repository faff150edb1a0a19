// Acceptance suite: runs every certification-toolkit exit criterion at its
// stated tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "telecert/classical.hpp"
#include "telecert/report.hpp"
#include "telecert/steering.hpp"
#include "telecert/tomography.hpp"

using namespace telecert;

namespace {

int failures = 0;
std::vector<SdpDiagnostics> all_diags;

void record(const SdpDiagnostics& d) { all_diags.push_back(d); }

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", idx, name,
                detail.c_str());
    if (!ok) ++failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double bisect(std::function<bool(double)> high_side, double lo, double hi) {
    // high_side(lo) true, high_side(hi) false; returns the crossing point.
    for (int i = 0; i < 24; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (high_side(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ComplexMatrix random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(rng), g(rng));
    Complex n0 = std::sqrt(std::norm(a(0, 0)) + std::norm(a(1, 0)));
    a(0, 0) /= n0;
    a(1, 0) /= n0;
    const Complex ip = std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1);
    a(0, 1) -= ip * a(0, 0);
    a(1, 1) -= ip * a(1, 0);
    const Complex n1 = std::sqrt(std::norm(a(0, 1)) + std::norm(a(1, 1)));
    a(0, 1) /= n1;
    a(1, 1) /= n1;
    return a;
}

ComplexMatrix random_density(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    return rho * Complex(1.0 / rho.trace().real());
}

std::vector<SeparableTerm> random_separable(std::mt19937_64& rng, int max_terms) {
    const int nk = 1 + static_cast<int>(rng() % max_terms);
    std::vector<double> w(nk);
    double total = 0.0;
    for (auto& x : w) {
        x = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
        total += x;
    }
    std::vector<SeparableTerm> terms;
    for (int k = 0; k < nk; ++k)
        terms.push_back({w[k] / total, random_density(rng, 2), random_density(rng, 2)});
    return terms;
}

}  // namespace

int main() {
    const double sqrt3 = std::sqrt(3.0);
    const double p_star = 1.0 - 1.0 / sqrt3;

    // 1. Classical bound.
    double f_ct = 0.0;
    {
        const double t0 = now_seconds();
        const BoundResult bound = classical_bound();
        record(bound.diag);
        const double elapsed = now_seconds() - t0;
        f_ct = bound.f_ct;
        const double f_avg = avg_state_fidelity(f_ct);
        const double witness_f =
            process_fidelity(chi_ideal(), recipe_to_process(bound.witness));
        const bool ok = std::abs(f_ct - 0.683) <= 5e-4 &&
                        std::abs(f_ct - (1.0 + sqrt3) / 4.0) <= 1e-6 &&
                        std::abs(f_avg - 0.789) <= 5e-4 &&
                        std::abs(witness_f - f_ct) <= 1e-6 && elapsed < 2.0;
        report(1, "classical bound", ok,
               fmt("F_CT=%.9f (closed form %.9f), F_avg=%.9f, witness=%.9f, %.2fs", f_ct,
                   (1.0 + sqrt3) / 4.0, f_avg, witness_f, elapsed));
    }

    // 2. Measure-prepare process.
    {
        const ProcessMatrix mp = mp_process();
        const double f = process_fidelity(chi_ideal(), mp);
        const auto comp = quantum_composition(mp);
        const auto rob = quantum_robustness(mp);
        record(comp.diag);
        record(rob.diag);
        const double favg = avg_state_fidelity(0.5);
        const bool ok = std::abs(f - 0.5) <= 1e-10 && comp.alpha <= 1e-6 &&
                        rob.beta <= 1e-6 && favg == 2.0 / 3.0;
        report(2, "measure-prepare", ok,
               fmt("F=%.12f, alpha=%.2e, beta=%.2e, F_avg=%.12f", f, comp.alpha, rob.beta,
                   favg));
    }

    // 3. Ideal process.
    {
        const auto comp = quantum_composition(chi_ideal());
        const auto rob = quantum_robustness(chi_ideal());
        record(comp.diag);
        record(rob.diag);
        const bool ok = std::abs(comp.alpha - 1.0) <= 1e-6 &&
                        std::abs(rob.beta - 0.464) <= 1e-3 &&
                        rob.beta >= 1.0 / f_ct - 1.0 - 1e-7;
        report(3, "ideal process", ok,
               fmt("alpha=%.9f, beta=%.9f, dual bound 1/F_CT-1=%.9f", comp.alpha, rob.beta,
                   1.0 / f_ct - 1.0));
    }

    // 4. Werner sweep with crossings.
    {
        const double t0 = now_seconds();
        double worst_f_dev = 0.0;
        bool chain_ok = true;
        for (int i = 0; i <= 100; ++i) {
            const double p = i * 0.01;
            const ProcessMatrix chi = resource_to_process(werner(p));
            const double f = process_fidelity(chi_ideal(), chi);
            worst_f_dev = std::max(worst_f_dev, std::abs(f - (1.0 - 0.75 * p)));
            const auto comp = quantum_composition(chi);
            const auto rob = quantum_robustness(chi);
            const auto sw = steerable_weight(assemblage(werner(p)));
            const auto member = find_recipe(chi);
            record(comp.diag);
            record(rob.diag);
            record(sw.diag);
            record(member.diag);
            // Verdict chain: above the bound the quantifiers must be strict.
            if (f > f_ct + 1e-6 && (comp.alpha <= 1e-6 || rob.beta <= 1e-6))
                chain_ok = false;
        }
        auto alpha_at = [&](double p) {
            const auto c = quantum_composition(resource_to_process(werner(p)));
            record(c.diag);
            return c.alpha;
        };
        auto beta_at = [&](double p) {
            const auto r = quantum_robustness(resource_to_process(werner(p)));
            record(r.diag);
            return r.beta;
        };
        const double p_alpha =
            bisect([&](double p) { return alpha_at(p) > 1e-6; }, 0.3, 0.6);
        const double p_beta = bisect([&](double p) { return beta_at(p) > 1e-6; }, 0.3, 0.6);
        auto fid_at = [&](double p) {
            return process_fidelity(chi_ideal(), resource_to_process(werner(p)));
        };
        const double p_half = bisect([&](double p) { return fid_at(p) > 0.5; }, 0.3, 0.9);
        const double elapsed = now_seconds() - t0;
        const bool ok = worst_f_dev <= 1e-10 && chain_ok &&
                        std::abs(p_alpha - 0.4226) <= 0.002 &&
                        std::abs(p_beta - 0.4226) <= 0.002 &&
                        std::abs(p_half - 0.667) <= 0.002 && elapsed < 60.0;
        report(4, "Werner sweep", ok,
               fmt("max |F-(1-3p/4)|=%.2e, alpha->0 at %.4f, beta->0 at %.4f, F=0.5 at "
                   "%.4f, verdict chain %s, %.1fs",
                   worst_f_dev, p_alpha, p_beta, p_half, chain_ok ? "holds" : "broken",
                   elapsed));
    }

    // 5. Printed test vector at p_noise = 0.5.
    {
        const ComplexMatrix expected = ComplexMatrix::from_rows({{0.375, 0, 0, 0.25},
                                                                 {0, 0.125, 0, 0},
                                                                 {0, 0, 0.125, 0},
                                                                 {0.25, 0, 0, 0.375}});
        const ProcessMatrix chi = resource_to_process(werner(0.5));
        const double dev = (chi - expected).max_abs();

        auto mk = [](double d00, Complex d01, double d11) {
            ComplexMatrix m(2, 2);
            m(0, 0) = d00;
            m(0, 1) = d01;
            m(1, 0) = std::conj(d01);
            m(1, 1) = d11;
            return m * Complex(1.0 / 8.0);
        };
        const Complex i1(0, 1);
        ClassicalRecipe printed;
        printed.sigma[0] = mk(0.75, 0.25 * (1.0 - i1), 0.25);
        printed.sigma[1] = mk(0.25, 0.25 * (1.0 - i1), 0.75);
        printed.sigma[2] = mk(0.75, 0.25 * (1.0 + i1), 0.25);
        printed.sigma[3] = mk(0.25, 0.25 * (1.0 + i1), 0.75);
        printed.sigma[4] = mk(0.75, -0.25 * (1.0 + i1), 0.25);
        printed.sigma[5] = mk(0.25, -0.25 * (1.0 + i1), 0.75);
        printed.sigma[6] = mk(0.75, -0.25 * (1.0 - i1), 0.25);
        printed.sigma[7] = mk(0.25, -0.25 * (1.0 - i1), 0.75);
        const RecipeCheck chk = verify_recipe(printed, chi);
        const auto found = find_recipe(chi);
        record(found.diag);
        const bool ok = dev <= 5e-4 && chk.ok && chk.max_deviation <= 1e-7 &&
                        found.recipe.has_value();
        report(5, "printed test vector", ok,
               fmt("matrix dev=%.2e, recipe dev=%.2e, find_recipe=%s", dev,
                   chk.max_deviation, found.recipe ? "ok" : "none"));
    }

    // 6. Steering and entanglement markers.
    {
        double worst_neg = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double p = i * 0.01;
            const double expect = std::max(0.0, (2.0 - 3.0 * p) / 4.0);
            worst_neg = std::max(worst_neg, std::abs(negativity(werner(p)) - expect));
        }
        auto sw_at = [&](double p) {
            const auto r = steerable_weight(assemblage(werner(p)));
            record(r.diag);
            return r.steerable_weight;
        };
        const double p_sw = bisect([&](double p) { return sw_at(p) > 1e-6; }, 0.3, 0.6);
        const double sw0 = sw_at(0.0);
        const bool ok = worst_neg <= 1e-8 && negativity(werner(2.0 / 3.0 + 0.01)) <= 1e-8 &&
                        std::abs(p_sw - 0.4226) <= 0.002 && std::abs(sw0 - 1.0) <= 1e-4;
        report(6, "negativity and steerable weight", ok,
               fmt("max neg dev=%.2e, SW->0 at %.4f, SW(0)=%.6f", worst_neg, p_sw, sw0));
    }

    // 7. Fidelity and steering verdicts coincide away from the threshold.
    {
        int disagreements = 0;
        for (int i = 0; i <= 100; ++i) {
            const double p = i * 0.01;
            if (std::abs(p - p_star) <= 0.002) continue;
            const bool fid =
                process_fidelity(chi_ideal(), resource_to_process(werner(p))) > f_ct + 1e-6;
            const auto sw = steerable_weight(assemblage(werner(p)));
            record(sw.diag);
            if (fid != (sw.steerable_weight > 1e-6)) ++disagreements;
        }
        report(7, "steering iff fidelity verdict", disagreements == 0,
               fmt("disagreements=%d on the 0.01 grid (window +-0.002 around %.4f)",
                   disagreements, p_star));
    }

    // 8. Extended measure-prepare property suite.
    {
        std::mt19937_64 rng(20260809);
        double worst_f = 0.0, worst_alpha = 0.0, worst_beta = 0.0, worst_dev = 0.0;
        for (int t = 0; t < 100; ++t) {
            ProductMpSpec spec;
            spec.resource = random_separable(rng, 5);
            const ComplexMatrix uv = random_unitary(rng);
            const ComplexMatrix ua = random_unitary(rng);
            for (int i = 0; i < 2; ++i) {
                ComplexMatrix v(2, 1), a(2, 1);
                v(0, 0) = uv(0, i);
                v(1, 0) = uv(1, i);
                for (int j = 0; j < 2; ++j) {
                    a(0, 0) = ua(0, j);
                    a(1, 0) = ua(1, j);
                    spec.outcomes.push_back({v * v.adjoint(), a * a.adjoint(),
                                             random_unitary(rng)});
                }
            }
            const auto res = emp_product_process(spec);
            worst_f = std::max(worst_f, process_fidelity(chi_ideal(), res.chi));
            const auto comp = quantum_composition(res.chi);
            const auto rob = quantum_robustness(res.chi);
            record(comp.diag);
            record(rob.diag);
            worst_alpha = std::max(worst_alpha, comp.alpha);
            worst_beta = std::max(worst_beta, rob.beta);
            const auto rec = emp_product_recipe(spec);
            const ProcessOutputs outs = recipe_outputs(rec.recipe);
            worst_dev = std::max({worst_dev, (outs.out0 - res.outputs.out0).max_abs(),
                                  (outs.out1 - res.outputs.out1).max_abs(),
                                  (outs.outp - res.outputs.outp).max_abs(),
                                  (outs.outr - res.outputs.outr).max_abs()});
        }
        for (int t = 0; t < 100; ++t) {
            BsmMpSpec spec;
            spec.resource = random_separable(rng, 5);
            spec.corrections = {random_unitary(rng), random_unitary(rng)};
            const auto res = emp_bsm_process(spec);
            worst_f = std::max(worst_f, process_fidelity(chi_ideal(), res.chi));
            const auto comp = quantum_composition(res.chi);
            const auto rob = quantum_robustness(res.chi);
            record(comp.diag);
            record(rob.diag);
            worst_alpha = std::max(worst_alpha, comp.alpha);
            worst_beta = std::max(worst_beta, rob.beta);
            const ProcessOutputs outs = recipe_outputs(res.recipe);
            worst_dev = std::max({worst_dev, (outs.out0 - res.outputs.out0).max_abs(),
                                  (outs.out1 - res.outputs.out1).max_abs(),
                                  (outs.outp - res.outputs.outp).max_abs(),
                                  (outs.outr - res.outputs.outr).max_abs()});
        }
        const bool ok = worst_f <= 0.5 + 1e-6 && worst_alpha <= 1e-6 &&
                        worst_beta <= 1e-6 && worst_dev <= 1e-10;
        report(8, "extended measure-prepare suite", ok,
               fmt("worst F=%.6f, alpha=%.2e, beta=%.2e, recipe dev=%.2e over 200 trials",
                   worst_f, worst_alpha, worst_beta, worst_dev));
    }

    // 9. Solver contract over every instance above.
    {
        double worst_gap = 0.0, worst_res = 0.0;
        for (const auto& d : all_diags) {
            worst_gap = std::max(worst_gap, std::abs(d.duality_gap));
            worst_res = std::max({worst_res, d.primal_residual, d.dual_residual});
        }
        const bool ok = worst_gap <= 1e-7 && worst_res <= 1e-8;
        report(9, "solver contract", ok,
               fmt("%zu instances, worst gap=%.2e, worst residual=%.2e", all_diags.size(),
                   worst_gap, worst_res));
    }

    // 10. Reported-experiment classification.
    {
        const Thresholds thr{f_ct, avg_state_fidelity(f_ct), 1e-6};
        const std::vector<ExperimentEntry> entries = {
            {"polarization active", FidelityKind::process, 0.75},
            {"polarization passive", FidelityKind::process, 0.70},
            {"time-bin active", FidelityKind::process, 0.77},
            {"time-bin passive", FidelityKind::process, 0.84},
            {"nmr", FidelityKind::process, 0.90},
            {"atomic ensembles", FidelityKind::process, 0.87},
            {"trapped ions", FidelityKind::process, 0.73},
            {"ions and photons", FidelityKind::process, 0.84},
            {"neutral atoms", FidelityKind::process, 0.82},
            {"rare-earth crystal", FidelityKind::process, 0.835},
            {"superconducting active", FidelityKind::process, 0.539},
            {"superconducting passive", FidelityKind::process, 0.655},
            {"nv centres", FidelityKind::process, 0.655},
        };
        const std::vector<bool> expected = {true, true, true, true, true, true, true,
                                            true, true, true, false, false, false};
        const auto out = classify(entries, thr);
        bool ok = out.size() == expected.size();
        for (size_t i = 0; ok && i < out.size(); ++i) ok = out[i].gqt == expected[i];
        report(10, "experiment classification", ok,
               fmt("%zu entries, check-mark pattern %s", entries.size(),
                   ok ? "reproduced" : "mismatched"));
    }

    // 11. Tomography realism.
    {
        const ProcessMatrix chi_quarter = resource_to_process(werner(0.25));
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto rec = simulate_process_tomography(chi_quarter, 100000, seed);
            worst = std::max(worst,
                             std::abs(process_fidelity(chi_ideal(), rec.chi) - 0.8125));
        }
        bool verdicts_stable = true;
        const Certifier certifier;
        for (double p : {0.1, 0.6}) {
            const ProcessMatrix chi_true = resource_to_process(werner(p));
            const bool expected = p < p_star;
            for (std::uint64_t seed = 0; seed < 50; ++seed) {
                const auto rec = simulate_process_tomography(chi_true, 100000, seed);
                const auto rep = certifier.certify(rec.chi, rec.clipped);
                if (rep.gqt != expected) verdicts_stable = false;
            }
        }
        const bool ok = worst <= 0.01 && verdicts_stable;
        report(11, "tomography realism", ok,
               fmt("max |F-0.8125|=%.4f over 50 seeds, verdicts %s at p=0.1/0.6", worst,
                   verdicts_stable ? "stable" : "unstable"));
    }

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                failures);
    return failures == 0 ? 0 : 1;
}
