#include <random>

#include "doctest.h"
#include "telecert/classical.hpp"
#include "test_util.hpp"

using namespace telecert;

namespace {

const double kFctExact = (1.0 + std::sqrt(3.0)) / 4.0;

ComplexMatrix werner_half_chi() {
    return ComplexMatrix::from_rows({{0.375, 0, 0, 0.25},
                                     {0, 0.125, 0, 0},
                                     {0, 0, 0.125, 0},
                                     {0.25, 0, 0, 0.375}});
}

// The eight hidden states printed for the p = 0.5 Werner example, scaled by
// the uniform weight 1/8.
ClassicalRecipe werner_half_recipe() {
    auto mk = [](double d00, Complex d01, double d11) {
        ComplexMatrix m(2, 2);
        m(0, 0) = d00;
        m(0, 1) = d01;
        m(1, 0) = std::conj(d01);
        m(1, 1) = d11;
        return m * Complex(1.0 / 8.0);
    };
    const Complex i1(0, 1);
    ClassicalRecipe r;
    r.sigma[0] = mk(0.75, 0.25 * (1.0 - i1), 0.25);
    r.sigma[1] = mk(0.25, 0.25 * (1.0 - i1), 0.75);
    r.sigma[2] = mk(0.75, 0.25 * (1.0 + i1), 0.25);
    r.sigma[3] = mk(0.25, 0.25 * (1.0 + i1), 0.75);
    r.sigma[4] = mk(0.75, -0.25 * (1.0 + i1), 0.25);
    r.sigma[5] = mk(0.25, -0.25 * (1.0 + i1), 0.75);
    r.sigma[6] = mk(0.75, -0.25 * (1.0 - i1), 0.25);
    r.sigma[7] = mk(0.25, -0.25 * (1.0 - i1), 0.75);
    return r;
}

// Random recipe meeting the marginal conditions exactly: antipodal weight
// symmetrization pairs each hidden state with its all-outcomes-flipped twin.
ClassicalRecipe random_valid_recipe(std::mt19937_64& rng) {
    std::array<double, 8> w{};
    double total = 0.0;
    for (auto& x : w) {
        x = 0.02 + static_cast<double>(rng() % 1000) / 1000.0;
        total += x;
    }
    for (auto& x : w) x /= total;
    ClassicalRecipe r;
    for (int xi = 0; xi < 8; ++xi) {
        const double weight = 0.5 * (w[xi] + w[7 - xi]);
        r.sigma[xi] = test_util::random_density(rng, 2) * Complex(weight);
    }
    // Weights are antipodal-symmetric, so every marginal is total/2.
    return r;
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
        terms.push_back({w[k] / total, test_util::random_density(rng, 2),
                         test_util::random_density(rng, 2)});
    return terms;
}

ProductMpSpec random_product_spec(std::mt19937_64& rng) {
    ProductMpSpec spec;
    spec.resource = random_separable(rng, 4);
    const ComplexMatrix uv = random_unitary(rng);
    const ComplexMatrix ua = random_unitary(rng);
    for (int i = 0; i < 2; ++i) {
        ComplexMatrix v(2, 1);
        v(0, 0) = uv(0, i);
        v(1, 0) = uv(1, i);
        for (int j = 0; j < 2; ++j) {
            ComplexMatrix a(2, 1);
            a(0, 0) = ua(0, j);
            a(1, 0) = ua(1, j);
            spec.outcomes.push_back({projector(v), projector(a), random_unitary(rng)});
        }
    }
    return spec;
}

double outputs_deviation(const ProcessOutputs& a, const ProcessOutputs& b) {
    return std::max(std::max((a.out0 - b.out0).max_abs(), (a.out1 - b.out1).max_abs()),
                    std::max((a.outp - b.outp).max_abs(), (a.outr - b.outr).max_abs()));
}

}  // namespace

TEST_CASE("hidden-state outcome table") {
    // xi = 1..8 with (a1, a2, a3) lexicographic, +1 first.
    const int expected[8][3] = {{+1, +1, +1}, {+1, +1, -1}, {+1, -1, +1}, {+1, -1, -1},
                                {-1, +1, +1}, {-1, +1, -1}, {-1, -1, +1}, {-1, -1, -1}};
    for (int xi = 0; xi < 8; ++xi)
        for (int k = 0; k < 3; ++k) CHECK(outcome_sign(xi, k) == expected[xi][k]);
}

TEST_CASE("recipe_to_process") {
    CHECK((recipe_to_process(uniform_recipe()) - ComplexMatrix::identity(4) * Complex(0.25))
              .max_abs() <= 1e-15);
    CHECK((recipe_to_process(mp_recipe()) - mp_process()).max_abs() <= 1e-15);
    CHECK((recipe_to_process(werner_half_recipe()) - werner_half_chi()).max_abs() <= 1e-15);

    ClassicalRecipe bad = uniform_recipe();
    bad.sigma[0] = bad.sigma[0] * Complex(2.0);  // breaks marginals and normalization
    CHECK_THROWS_AS(recipe_to_process(bad), std::invalid_argument);
}

TEST_CASE("classical bound") {
    const BoundResult bound = classical_bound();
    CHECK(std::abs(bound.f_ct - 0.683) <= 5e-4);
    CHECK(std::abs(bound.f_ct - kFctExact) <= 1e-6);
    CHECK(std::abs(avg_state_fidelity(bound.f_ct) - 0.789) <= 5e-4);

    // Witness re-evaluated outside the solver reaches the bound.
    const double f_witness = process_fidelity(chi_ideal(), recipe_to_process(bound.witness));
    CHECK(std::abs(f_witness - bound.f_ct) <= 1e-6);
    CHECK(bound.witness.min_sigma_eigenvalue() >= -1e-9);

    CHECK(std::abs(bound.diag.duality_gap) <= 1e-7);
    CHECK(bound.diag.primal_residual <= 1e-8);
    CHECK(bound.diag.dual_residual <= 1e-8);
}

TEST_CASE("bound saturation over random recipes") {
    const double f_ct = classical_bound().f_ct;
    std::mt19937_64 rng(71);
    const auto chi_i = chi_ideal();
    for (int t = 0; t < 1000; ++t) {
        const ClassicalRecipe r = random_valid_recipe(rng);
        CHECK(process_fidelity(chi_i, recipe_to_process(r)) <= f_ct + 1e-6);
    }
}

TEST_CASE("quantum composition") {
    CHECK(quantum_composition(chi_ideal()).alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(quantum_composition(mp_process()).alpha <= 1e-6);
    CHECK(quantum_composition(resource_to_process(werner(0.5))).alpha <= 1e-6);

    const auto comp = quantum_composition(resource_to_process(werner(0.2)));
    CHECK(comp.alpha > 1e-3);  // above the steerability threshold
    REQUIRE(comp.residual_recipe.has_value());
    const ComplexMatrix chi_ct = detail::assemble_blocks(recipe_outputs(*comp.residual_recipe));
    CHECK(min_eigenvalue(chi_ct) >= -1e-7);
    CHECK(min_eigenvalue(resource_to_process(werner(0.2)) - chi_ct) >= -1e-7);
    CHECK(comp.residual_recipe->total_weight() == doctest::Approx(1.0 - comp.alpha).epsilon(1e-6));
}

TEST_CASE("quantum robustness") {
    const double f_ct = classical_bound().f_ct;
    const auto rob_ideal = quantum_robustness(chi_ideal());
    CHECK(std::abs(rob_ideal.beta - 0.464) <= 1e-3);
    CHECK(rob_ideal.beta >= 1.0 / f_ct - 1.0 - 1e-7);
    REQUIRE(rob_ideal.noise_process.has_value());
    CHECK(std::abs(rob_ideal.noise_process->trace().real() - 1.0) <= 1e-6);
    CHECK(min_eigenvalue(rob_ideal.noise_process->hermitized()) >= -1e-6);

    CHECK(quantum_robustness(mp_process()).beta <= 1e-6);
    CHECK(quantum_robustness(resource_to_process(werner(0.5))).beta <= 1e-6);

    // Strictly positive beta below the threshold, at or above the fidelity
    // dual bound F/F_CT - 1 (which turns out to be tight on this family).
    const double f03 = 1.0 - 0.75 * 0.3;
    const auto rob = quantum_robustness(resource_to_process(werner(0.3)));
    CHECK(rob.beta > 1e-3);
    CHECK(rob.beta >= f03 / f_ct - 1.0 - 1e-7);
}

TEST_CASE("find_recipe") {
    const auto found = find_recipe(resource_to_process(werner(0.5)));
    REQUIRE(found.recipe.has_value());
    CHECK(verify_recipe(*found.recipe, resource_to_process(werner(0.5))).ok);

    const auto none = find_recipe(chi_ideal());
    CHECK_FALSE(none.recipe.has_value());
    CHECK(none.alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(none.dual_certificate.empty());

    const auto depol = find_recipe(ComplexMatrix::identity(4) * Complex(0.25));
    REQUIRE(depol.recipe.has_value());
    CHECK(verify_recipe(*depol.recipe, ComplexMatrix::identity(4) * Complex(0.25)).ok);
}

TEST_CASE("alpha, beta and membership agree on both sides of the boundary") {
    std::mt19937_64 rng(73);
    int classical_seen = 0, quantum_seen = 0;
    for (int t = 0; t < 50; ++t) {
        ProcessMatrix chi;
        if (t % 2 == 0) {
            // Inside: process of a random valid recipe, rejection-sampled to
            // have a psd process matrix.
            for (;;) {
                const ClassicalRecipe r = random_valid_recipe(rng);
                chi = recipe_to_process(r);
                if (min_eigenvalue(chi) >= 1e-10) break;
            }
        } else {
            // Outside: mixtures pushed toward the ideal corner.
            const double lam = 0.75 + 0.25 * static_cast<double>(rng() % 100) / 100.0;
            chi = chi_ideal() * Complex(lam) +
                  recipe_to_process(random_valid_recipe(rng)) * Complex(1.0 - lam);
            if (process_fidelity(chi_ideal(), chi) <= kFctExact + 1e-3) continue;
        }
        const double alpha = quantum_composition(chi).alpha;
        const double beta = quantum_robustness(chi).beta;
        const bool member = find_recipe(chi).recipe.has_value();
        CHECK((alpha <= 1e-6) == member);
        CHECK((alpha <= 1e-6) == (beta <= 1e-6));
        if (member)
            ++classical_seen;
        else
            ++quantum_seen;
    }
    CHECK(classical_seen >= 20);
    CHECK(quantum_seen >= 15);
}

TEST_CASE("alpha is monotone along the ideal-MP segment") {
    double prev = -1.0;
    for (double lam : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const ProcessMatrix chi =
            chi_ideal() * Complex(lam) + mp_process() * Complex(1.0 - lam);
        const double alpha = quantum_composition(chi).alpha;
        CHECK(alpha >= prev - 1e-7);
        prev = alpha;
    }
}

TEST_CASE("verify_recipe") {
    CHECK(verify_recipe(werner_half_recipe(), werner_half_chi()).ok);
    CHECK(verify_recipe(uniform_recipe(), ComplexMatrix::identity(4) * Complex(0.25)).ok);
    CHECK_FALSE(verify_recipe(werner_half_recipe(), chi_ideal()).ok);
}

TEST_CASE("measure-prepare output states") {
    const MeasurePrepareSpec all = default_mp_spec();
    const ComplexMatrix rho0 = mp_output_state(projector(ket0()), all);
    CHECK((rho0 - (projector(ket0()) + ComplexMatrix::identity(2)) * Complex(1.0 / 3.0))
              .max_abs() <= 1e-14);

    MeasurePrepareSpec only_z;
    only_z.settings.push_back({pauli_settings()[2], 1.0});
    CHECK((mp_output_state(projector(ket0()), only_z) - projector(ket0())).max_abs() <= 1e-14);
    CHECK((mp_output_state(projector(ket_plus()), only_z) -
           ComplexMatrix::identity(2) * Complex(0.5))
              .max_abs() <= 1e-14);

    MeasurePrepareSpec bad = default_mp_spec();
    bad.settings[0].probability = 0.5;
    CHECK_THROWS_AS(mp_output_state(projector(ket0()), bad), std::invalid_argument);
}

TEST_CASE("measure-prepare process") {
    const ProcessMatrix mp = mp_process();
    CHECK(process_fidelity(chi_ideal(), mp) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(avg_state_fidelity(process_fidelity(chi_ideal(), mp)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(verify_recipe(mp_recipe(), mp).ok);
}

TEST_CASE("product measure-prepare: constant channel example") {
    // Z measurement on the input, trivial A-side, resource |0><0| x |0><0|.
    ProductMpSpec spec;
    spec.resource.push_back({1.0, projector(ket0()), projector(ket0())});
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    spec.outcomes.push_back({projector(ket0()), eye, eye});
    spec.outcomes.push_back({projector(ket1()), eye, eye});

    const auto res = emp_product_process(spec);
    for (const ComplexMatrix* out :
         {&res.outputs.out0, &res.outputs.out1, &res.outputs.outp, &res.outputs.outr})
        CHECK((*out - projector(ket0())).max_abs() <= 1e-12);
    CHECK(quantum_composition(res.chi).alpha <= 1e-6);

    const auto rec = emp_product_recipe(spec);
    CHECK(outputs_deviation(recipe_outputs(rec.recipe), res.outputs) <= 1e-10);
    for (bool flag : rec.psd_flags) CHECK(flag);
}

TEST_CASE("product measure-prepare: random property suite") {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 25; ++t) {
        const ProductMpSpec spec = random_product_spec(rng);
        const auto res = emp_product_process(spec);
        CHECK(process_fidelity(chi_ideal(), res.chi) <= 0.5 + 1e-6);
        CHECK(quantum_composition(res.chi).alpha <= 1e-6);

        const auto rec = emp_product_recipe(spec);
        CHECK(outputs_deviation(recipe_outputs(rec.recipe), res.outputs) <= 1e-10);
    }
}

TEST_CASE("product measure-prepare: outcome probability consistency") {
    std::mt19937_64 rng(83);
    const ProductMpSpec spec = random_product_spec(rng);
    const auto inputs = std::array<ComplexMatrix, 6>{
        projector(ket0()),     projector(ket1()),      projector(ket_plus()),
        projector(ket_minus()), projector(ket_right()), projector(ket_left())};
    for (const auto& o : spec.outcomes) {
        double mass = 0.0;
        for (const auto& term : spec.resource)
            mass += term.p * (o.m_a * term.rho_a).trace().real();
        auto pam = [&](int m) { return (o.m_v * inputs[m]).trace().real() * mass; };
        const double pa_z = 0.5 * (pam(0) + pam(1));
        const double pa_x = 0.5 * (pam(2) + pam(3));
        const double pa_y = 0.5 * (pam(4) + pam(5));
        CHECK(std::abs(pa_z - pa_x) <= 1e-12);
        CHECK(std::abs(pa_z - pa_y) <= 1e-12);
    }
}

TEST_CASE("product measure-prepare: adversarial POVM flags non-psd states") {
    // Project onto the -sqrt(3) eigenvector of X+Y+Z; the xi = 1 coefficient
    // tr(M^V (|0><0|+|+><+|+|R><R| - I)) = (1 - sqrt(3))/2 goes negative.
    const auto eig = hermitian_eig(pauli_x() + pauli_y() + pauli_z());
    ComplexMatrix vmin(2, 1);
    vmin(0, 0) = eig.eigenvectors(0, 0);
    vmin(1, 0) = eig.eigenvectors(1, 0);
    const ComplexMatrix pn = projector(vmin);
    const ComplexMatrix eye = ComplexMatrix::identity(2);

    ProductMpSpec spec;
    spec.resource.push_back({1.0, projector(ket0()), projector(ket0())});
    spec.outcomes.push_back({pn, projector(ket0()), eye});
    spec.outcomes.push_back({pn, projector(ket1()), eye});
    spec.outcomes.push_back({eye - pn, projector(ket0()), pauli_x()});
    spec.outcomes.push_back({eye - pn, projector(ket1()), pauli_x()});

    const auto rec = emp_product_recipe(spec);
    int non_psd = 0;
    for (bool flag : rec.psd_flags)
        if (!flag) ++non_psd;
    CHECK(non_psd >= 1);

    const auto res = emp_product_process(spec);
    CHECK(outputs_deviation(recipe_outputs(rec.recipe), res.outputs) <= 1e-10);
    CHECK(find_recipe(res.chi).recipe.has_value());
    // The |1><1| A-side outcomes never fire against this resource.
    CHECK(res.dropped_outcomes.size() == 2);
}

TEST_CASE("partial BSM: single-term resource collapses to Bob's state") {
    BsmMpSpec spec;
    spec.resource.push_back({1.0, projector(ket0()), projector(ket0())});
    spec.corrections = {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    const auto res = emp_bsm_process(spec);
    for (const ComplexMatrix* out :
         {&res.outputs.out0, &res.outputs.out1, &res.outputs.outp, &res.outputs.outr})
        CHECK((*out - projector(ket0())).max_abs() <= 1e-12);
    CHECK(quantum_composition(res.chi).alpha <= 1e-6);
}

TEST_CASE("partial BSM: random property suite") {
    std::mt19937_64 rng(89);
    for (int t = 0; t < 25; ++t) {
        BsmMpSpec spec;
        spec.resource = random_separable(rng, 5);
        spec.corrections = {random_unitary(rng), random_unitary(rng)};
        const auto res = emp_bsm_process(spec);
        CHECK(process_fidelity(chi_ideal(), res.chi) <= 0.5 + 1e-6);
        CHECK(quantum_composition(res.chi).alpha <= 1e-6);
        CHECK(outputs_deviation(recipe_outputs(res.recipe), res.outputs) <= 1e-10);
        CHECK(verify_recipe(res.recipe, res.chi).ok);
        // Per-outcome decompositions rebuild the per-outcome recipe weights.
        double total = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int xi = 0; xi < 8; ++xi) total += res.per_outcome[a].weight[xi];
        CHECK(total == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("verdict chain on the Werner family") {
    const double f_ct = classical_bound().f_ct;
    for (double p : {0.0, 0.1, 0.2, 0.3, 0.38, 0.41}) {
        const ProcessMatrix chi = resource_to_process(werner(p));
        const double f = process_fidelity(chi_ideal(), chi);
        if (f > f_ct + 1e-6) {
            CHECK(quantum_composition(chi).alpha > 1e-6);
            CHECK(quantum_robustness(chi).beta > 1e-6);
        }
    }
}
