#include "telecert/classical.hpp"

#include <algorithm>
#include <cmath>

namespace telecert {

namespace {

// Orthonormal Hermitian basis of d x d under tr(G_i G_j) = delta_ij.
std::vector<ComplexMatrix> hermitian_basis(int d) {
    std::vector<ComplexMatrix> basis;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        ComplexMatrix m(d, d);
        m(j, j) = 1.0;
        basis.push_back(m);
    }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            ComplexMatrix re(d, d);
            re(j, k) = inv_sqrt2;
            re(k, j) = inv_sqrt2;
            basis.push_back(re);
            ComplexMatrix im(d, d);
            im(j, k) = Complex(0, -inv_sqrt2);
            im(k, j) = Complex(0, inv_sqrt2);
            basis.push_back(im);
        }
    return basis;
}

double herm_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex s{};
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s.real();
}

ProcessOutputs outputs_of_sigma(const std::array<ComplexMatrix, 8>& sigma) {
    ComplexMatrix zero(2, 2);
    ProcessOutputs o{zero, zero, zero, zero};
    for (int xi = 0; xi < 8; ++xi) {
        const ComplexMatrix twice = sigma[xi] * Complex(2.0);
        if (outcome_sign(xi, 2) > 0)
            o.out0 += twice;
        else
            o.out1 += twice;
        if (outcome_sign(xi, 0) > 0) o.outp += twice;
        if (outcome_sign(xi, 1) > 0) o.outr += twice;
    }
    return o;
}

ComplexMatrix chi_of_sigma(const std::array<ComplexMatrix, 8>& sigma) {
    return detail::assemble_blocks(outputs_of_sigma(sigma));
}

// Adjoint of the sigma -> chi map: K[t][xi] with
// tr(G_t chi(sigma)) = sum_xi tr(K[t][xi] sigma_xi).
struct ConeMap {
    std::vector<ComplexMatrix> g4;               // Hermitian basis, dim 16
    std::vector<ComplexMatrix> h2;               // Hermitian basis, dim 4
    std::array<std::vector<ComplexMatrix>, 8> k;  // k[xi][t]
};

const ConeMap& cone_map() {
    static const ConeMap map = [] {
        ConeMap m;
        m.g4 = hermitian_basis(4);
        m.h2 = hermitian_basis(2);
        for (int xi = 0; xi < 8; ++xi) {
            std::vector<ComplexMatrix> phi;
            for (const auto& h : m.h2) {
                std::array<ComplexMatrix, 8> sigma;
                sigma.fill(ComplexMatrix(2, 2));
                sigma[xi] = h;
                phi.push_back(chi_of_sigma(sigma));
            }
            m.k[xi].resize(m.g4.size());
            for (size_t t = 0; t < m.g4.size(); ++t) {
                ComplexMatrix kt(2, 2);
                for (size_t s = 0; s < m.h2.size(); ++s)
                    kt += m.h2[s] * Complex(herm_inner(m.g4[t], phi[s]));
                m.k[xi][t] = kt;
            }
        }
        return m;
    }();
    return map;
}

ComplexMatrix scaled_identity2(double v) { return ComplexMatrix::identity(2) * Complex(v); }

void add_marginal_constraints(SdpProblem& p, int nblocks) {
    for (int k = 0; k < 3; ++k) {
        SdpConstraint c;
        c.coeff.assign(nblocks, ComplexMatrix());
        for (int xi = 0; xi < 8; ++xi)
            c.coeff[xi] = scaled_identity2(outcome_sign(xi, k) > 0 ? 0.5 : -0.5);
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }
}

// Equality block: tr(G_t Y_slack) + sign * tr(G_t chi(sigma)) = rhs_t.
void add_chi_slack_constraints(SdpProblem& p, int nblocks, int slack_index, double sign,
                               const ComplexMatrix* rhs_chi) {
    const auto& map = cone_map();
    for (size_t t = 0; t < map.g4.size(); ++t) {
        SdpConstraint c;
        c.coeff.assign(nblocks, ComplexMatrix());
        c.coeff[slack_index] = map.g4[t];
        for (int xi = 0; xi < 8; ++xi) c.coeff[xi] = map.k[xi][t] * Complex(sign);
        c.rhs = rhs_chi ? herm_inner(map.g4[t], *rhs_chi) : 0.0;
        p.constraints.push_back(std::move(c));
    }
}

SdpDiagnostics diag_of(const SdpSolution& s) {
    return SdpDiagnostics{s.duality_gap, s.primal_residual, s.dual_residual, s.iterations};
}

ClassicalRecipe recipe_from_solution(const SdpSolution& s) {
    ClassicalRecipe r;
    for (int xi = 0; xi < 8; ++xi) r.sigma[xi] = s.primal[xi];
    return r;
}

void require_optimal(const SdpSolution& s, const char* what) {
    if (s.status != SdpStatus::optimal)
        throw SolverFailure(std::string(what) + ": solver reported " + to_string(s.status));
}

ComplexMatrix eigenstate_projector(int sign, int axis) {
    switch (axis) {
        case 0: return projector(sign > 0 ? ket_plus() : ket_minus());
        case 1: return projector(sign > 0 ? ket_right() : ket_left());
        default: return projector(sign > 0 ? ket0() : ket1());
    }
}

void validate_separable_resource(const std::vector<SeparableTerm>& resource) {
    if (resource.empty()) throw std::invalid_argument("separable resource is empty");
    double total = 0.0;
    for (const auto& t : resource) {
        if (t.p < -1e-12) throw std::invalid_argument("separable weight negative");
        total += t.p;
        validate_density(t.rho_a, "resource rho_a");
        validate_density(t.rho_b, "resource rho_b");
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("separable weights do not sum to 1");
}

void validate_unitary(const ComplexMatrix& u, const char* what) {
    if (u.rows() != 2 || u.cols() != 2)
        throw std::invalid_argument(std::string(what) + ": must be 2x2");
    if ((u * u.adjoint() - ComplexMatrix::identity(2)).max_abs() > 1e-10)
        throw std::invalid_argument(std::string(what) + ": not unitary within 1e-10");
}

constexpr double kMassFloor = 1e-12;

}  // namespace

int outcome_sign(int xi, int k) {
    // xi bit pattern b2 b1 b0 -> (a1, a2, a3), lexicographic with +1 first.
    const int bit = (xi >> (2 - k)) & 1;
    return bit == 0 ? +1 : -1;
}

double ClassicalRecipe::total_weight() const {
    double t = 0.0;
    for (const auto& s : sigma) t += s.trace().real();
    return t;
}

ComplexMatrix ClassicalRecipe::hidden_state(int xi) const {
    const double w = weight(xi);
    if (w < kMassFloor) throw std::runtime_error("hidden state with vanishing weight");
    return sigma[xi] * Complex(1.0 / w);
}

double ClassicalRecipe::unnormalized_marginal_error() const {
    const double total = total_weight();
    double err = 0.0;
    for (int k = 0; k < 3; ++k) {
        double plus = 0.0;
        for (int xi = 0; xi < 8; ++xi)
            if (outcome_sign(xi, k) > 0) plus += weight(xi);
        err = std::max(err, std::abs(plus - 0.5 * total));
    }
    return err;
}

double ClassicalRecipe::marginal_error() const {
    return std::max(std::abs(total_weight() - 1.0), unnormalized_marginal_error());
}

double ClassicalRecipe::min_sigma_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : sigma) m = std::min(m, min_eigenvalue(s));
    return m;
}

ClassicalRecipe uniform_recipe() {
    ClassicalRecipe r;
    for (auto& s : r.sigma) s = ComplexMatrix::identity(2) * Complex(1.0 / 16.0);
    return r;
}

ClassicalRecipe mp_recipe() {
    ClassicalRecipe r;
    for (int xi = 0; xi < 8; ++xi) {
        ComplexMatrix state(2, 2);
        for (int k = 0; k < 3; ++k)
            state += eigenstate_projector(outcome_sign(xi, k), k) * Complex(1.0 / 3.0);
        r.sigma[xi] = state * Complex(1.0 / 8.0);
    }
    return r;
}

ProcessOutputs recipe_outputs(const ClassicalRecipe& r) { return outputs_of_sigma(r.sigma); }

ProcessMatrix recipe_to_process(const ClassicalRecipe& r) {
    if (std::abs(r.total_weight() - 1.0) > 1e-7)
        throw std::invalid_argument("recipe_to_process: recipe not normalized");
    if (r.marginal_error() > 1e-7)
        throw std::invalid_argument("recipe_to_process: marginal conditions violated");
    return chi_of_sigma(r.sigma);
}

BoundResult classical_bound(const SdpOptions& opts) {
    SdpProblem p;
    for (int xi = 0; xi < 8; ++xi) p.blocks.push_back({"sigma" + std::to_string(xi + 1), 2});
    p.blocks.push_back({"chi_ct", 4});
    const int nb = 9;
    p.objective.assign(nb, ComplexMatrix());
    p.objective[8] = chi_ideal();

    add_chi_slack_constraints(p, nb, 8, -1.0, nullptr);
    SdpConstraint norm;
    norm.coeff.assign(nb, ComplexMatrix());
    for (int xi = 0; xi < 8; ++xi) norm.coeff[xi] = ComplexMatrix::identity(2);
    norm.rhs = 1.0;
    p.constraints.push_back(std::move(norm));
    add_marginal_constraints(p, nb);

    const SdpSolution s = solve(p, opts);
    require_optimal(s, "classical_bound");

    BoundResult res;
    res.f_ct = s.objective;
    res.witness = recipe_from_solution(s);
    res.diag = diag_of(s);
    return res;
}

CompositionResult quantum_composition(const ProcessMatrix& chi, const SdpOptions& opts) {
    validate_process(chi);
    CompositionResult res;
    if (min_eigenvalue(chi) < -1e-9) {
        // No decomposition with a psd quantum part exists; report the whole
        // process as non-classical and flag the input.
        res.alpha = 1.0;
        res.chi_was_psd = false;
        return res;
    }

    SdpProblem p;
    for (int xi = 0; xi < 8; ++xi) p.blocks.push_back({"sigma" + std::to_string(xi + 1), 2});
    p.blocks.push_back({"chi_ct", 4});
    p.blocks.push_back({"chi_qt", 4});  // chi - chi_ct
    const int nb = 10;
    p.objective.assign(nb, ComplexMatrix());
    for (int xi = 0; xi < 8; ++xi) p.objective[xi] = ComplexMatrix::identity(2);

    add_chi_slack_constraints(p, nb, 8, -1.0, nullptr);
    add_chi_slack_constraints(p, nb, 9, +1.0, &chi);
    add_marginal_constraints(p, nb);

    const SdpSolution s = solve(p, opts);
    require_optimal(s, "quantum_composition");

    res.alpha = std::clamp(1.0 - s.objective, 0.0, 1.0);
    res.diag = diag_of(s);
    ClassicalRecipe recipe = recipe_from_solution(s);

    // Re-verify the witness outside the solver before reporting it.
    const ComplexMatrix chi_ct = chi_of_sigma(recipe.sigma);
    const bool ok = recipe.min_sigma_eigenvalue() >= -1e-8 &&
                    recipe.unnormalized_marginal_error() <= 1e-7 &&
                    min_eigenvalue(chi_ct) >= -1e-7 &&
                    min_eigenvalue(chi - chi_ct) >= -1e-7;
    if (!ok) throw SolverFailure("quantum_composition: witness failed re-verification");
    res.residual_recipe = std::move(recipe);
    return res;
}

RobustnessResult quantum_robustness(const ProcessMatrix& chi, const SdpOptions& opts) {
    validate_process(chi);
    SdpProblem p;
    for (int xi = 0; xi < 8; ++xi) p.blocks.push_back({"sigma" + std::to_string(xi + 1), 2});
    p.blocks.push_back({"chi_ct", 4});
    p.blocks.push_back({"noise", 4});  // chi_ct_tilde - chi
    p.blocks.push_back({"trace_slack", 1});
    const int nb = 11;
    p.objective.assign(nb, ComplexMatrix());
    for (int xi = 0; xi < 8; ++xi)
        p.objective[xi] = scaled_identity2(-1.0);  // max -sum tr = -min sum tr

    add_chi_slack_constraints(p, nb, 8, -1.0, nullptr);
    ComplexMatrix minus_chi = chi * Complex(-1.0);
    add_chi_slack_constraints(p, nb, 9, -1.0, &minus_chi);
    SdpConstraint tr_floor;  // sum tr sigma - t = 1
    tr_floor.coeff.assign(nb, ComplexMatrix());
    for (int xi = 0; xi < 8; ++xi) tr_floor.coeff[xi] = ComplexMatrix::identity(2);
    tr_floor.coeff[10] = ComplexMatrix(1, 1, {Complex(-1.0)});
    tr_floor.rhs = 1.0;
    p.constraints.push_back(std::move(tr_floor));
    add_marginal_constraints(p, nb);

    const SdpSolution s = solve(p, opts);
    require_optimal(s, "quantum_robustness");

    RobustnessResult res;
    res.beta = std::max(0.0, -s.objective - 1.0);
    res.diag = diag_of(s);
    res.mixed_recipe = recipe_from_solution(s);

    const ComplexMatrix chi_ct = chi_of_sigma(res.mixed_recipe.sigma);
    const bool ok = res.mixed_recipe.min_sigma_eigenvalue() >= -1e-8 &&
                    res.mixed_recipe.unnormalized_marginal_error() <= 1e-7 &&
                    min_eigenvalue(chi_ct) >= -1e-7 && min_eigenvalue(chi_ct - chi) >= -1e-7;
    if (!ok) throw SolverFailure("quantum_robustness: witness failed re-verification");
    if (res.beta > 1e-9)
        res.noise_process = (chi_ct - chi) * Complex(1.0 / res.beta);
    return res;
}

FindRecipeResult find_recipe(const ProcessMatrix& chi, const SdpOptions& opts) {
    validate_process(chi);
    FindRecipeResult out;
    if (min_eigenvalue(chi) < -1e-9) {
        out.alpha = 1.0;
        return out;
    }

    // Membership is the feasibility face of the composition program: alpha
    // vanishes exactly when chi lies in the classical set.
    SdpProblem p;
    for (int xi = 0; xi < 8; ++xi) p.blocks.push_back({"sigma" + std::to_string(xi + 1), 2});
    p.blocks.push_back({"chi_ct", 4});
    p.blocks.push_back({"chi_qt", 4});
    const int nb = 10;
    p.objective.assign(nb, ComplexMatrix());
    for (int xi = 0; xi < 8; ++xi) p.objective[xi] = ComplexMatrix::identity(2);
    add_chi_slack_constraints(p, nb, 8, -1.0, nullptr);
    add_chi_slack_constraints(p, nb, 9, +1.0, &chi);
    add_marginal_constraints(p, nb);

    const SdpSolution s = solve(p, opts);
    require_optimal(s, "find_recipe");
    out.alpha = std::clamp(1.0 - s.objective, 0.0, 1.0);
    out.diag = diag_of(s);
    out.dual_certificate = s.dual;
    if (out.alpha <= 1e-7) {
        ClassicalRecipe r = recipe_from_solution(s);
        const double total = r.total_weight();
        if (total > 0.5) {
            for (auto& sig : r.sigma) sig = sig * Complex(1.0 / total);
            if (verify_recipe(r, chi).ok) out.recipe = std::move(r);
        }
    }
    return out;
}

RecipeCheck verify_recipe(const ClassicalRecipe& r, const ProcessMatrix& chi) {
    RecipeCheck c;
    for (const auto& s : r.sigma)
        if (s.rows() != 2 || s.cols() != 2 || s.hermiticity_error() > 1e-9) return c;
    const bool invariants = r.min_sigma_eigenvalue() >= -1e-9 &&
                            std::abs(r.total_weight() - 1.0) <= 1e-9 &&
                            r.marginal_error() <= 1e-9;
    c.max_deviation = (chi_of_sigma(r.sigma) - chi).max_abs();
    c.ok = invariants && c.max_deviation <= 1e-7;
    return c;
}

MeasurePrepareSpec default_mp_spec() {
    MeasurePrepareSpec spec;
    const auto settings = pauli_settings();
    for (const auto& s : settings) spec.settings.push_back({s, 1.0 / 3.0});
    return spec;
}

ComplexMatrix mp_output_state(const ComplexMatrix& input_state, const MeasurePrepareSpec& spec) {
    if (input_state.rows() != 2 || input_state.cols() != 2)
        throw std::invalid_argument("mp_output_state: input must be 2x2");
    double ptot = 0.0;
    for (const auto& s : spec.settings) {
        if (s.probability < -1e-12)
            throw std::invalid_argument("mp_output_state: negative setting probability");
        ptot += s.probability;
    }
    if (std::abs(ptot - 1.0) > 1e-12)
        throw std::invalid_argument("mp_output_state: setting probabilities do not sum to 1");

    const ComplexMatrix eye = ComplexMatrix::identity(2);
    ComplexMatrix out(2, 2);
    for (const auto& s : spec.settings) {
        for (const ComplexMatrix* proj : {&s.observable.plus, &s.observable.minus}) {
            if ((*proj * *proj - *proj).max_abs() > 1e-10 ||
                std::abs(proj->trace().real() - 1.0) > 1e-10)
                throw std::invalid_argument("mp_output_state: outcome is not a rank-1 projector");
        }
        if ((s.observable.plus + s.observable.minus - eye).max_abs() > 1e-10)
            throw std::invalid_argument("mp_output_state: projectors do not complete to identity");
        for (const ComplexMatrix* proj : {&s.observable.plus, &s.observable.minus})
            out += *proj * Complex(s.probability * (*proj * input_state).trace().real());
    }
    return out;
}

ProcessMatrix mp_process() {
    const MeasurePrepareSpec spec = default_mp_spec();
    return assemble_process({mp_output_state(projector(ket0()), spec),
                             mp_output_state(projector(ket1()), spec),
                             mp_output_state(projector(ket_plus()), spec),
                             mp_output_state(projector(ket_right()), spec)});
}

// ---------------------------------------------------------------------------
// Extended measure-prepare
// ---------------------------------------------------------------------------

namespace {

struct ProductData {
    std::vector<double> mass;                 // sum_kappa p tr(M^A rho^A)
    std::vector<ComplexMatrix> rho_b;         // conditional Bob state per outcome
    std::vector<std::array<double, 6>> prob;  // P(a|m) for m = 0,1,+,-,R,L
    std::vector<int> dropped;
};

std::array<ComplexMatrix, 6> six_inputs() {
    return {projector(ket0()),     projector(ket1()),  projector(ket_plus()),
            projector(ket_minus()), projector(ket_right()), projector(ket_left())};
}

ProductData product_data(const ProductMpSpec& spec) {
    validate_separable_resource(spec.resource);
    if (spec.outcomes.empty()) throw std::invalid_argument("product POVM has no outcomes");
    ComplexMatrix povm_sum(4, 4);
    for (const auto& o : spec.outcomes) {
        if (min_eigenvalue(o.m_v.hermitized()) < -1e-9 ||
            min_eigenvalue(o.m_a.hermitized()) < -1e-9)
            throw std::invalid_argument("POVM element not psd");
        validate_unitary(o.correction, "correction");
        povm_sum += kron(o.m_v, o.m_a);
    }
    if ((povm_sum - ComplexMatrix::identity(4)).max_abs() > 1e-9)
        throw std::invalid_argument("product POVM does not sum to identity");

    ProductData d;
    const auto inputs = six_inputs();
    for (size_t a = 0; a < spec.outcomes.size(); ++a) {
        const auto& o = spec.outcomes[a];
        double mass = 0.0;
        ComplexMatrix acc(2, 2);
        for (const auto& t : spec.resource) {
            const double w = t.p * (o.m_a * t.rho_a).trace().real();
            mass += w;
            acc += t.rho_b * Complex(w);
        }
        std::array<double, 6> prob{};
        if (mass < kMassFloor) {
            if (kron(o.m_v, o.m_a).max_abs() > kMassFloor) d.dropped.push_back(static_cast<int>(a));
            d.mass.push_back(0.0);
            d.rho_b.push_back(ComplexMatrix(2, 2));
            d.prob.push_back(prob);
            continue;
        }
        for (int m = 0; m < 6; ++m)
            prob[m] = (o.m_v * inputs[m]).trace().real() * mass;
        d.mass.push_back(mass);
        d.rho_b.push_back((acc * Complex(1.0 / mass)).hermitized());
        d.prob.push_back(prob);
    }
    return d;
}

}  // namespace

EmpProcessResult emp_product_process(const ProductMpSpec& spec) {
    const ProductData d = product_data(spec);
    std::array<ComplexMatrix, 6> outs;
    outs.fill(ComplexMatrix(2, 2));
    for (size_t a = 0; a < spec.outcomes.size(); ++a) {
        if (d.mass[a] < kMassFloor) continue;
        const auto& u = spec.outcomes[a].correction;
        const ComplexMatrix corrected = u * d.rho_b[a] * u.adjoint();
        for (int m = 0; m < 6; ++m) outs[m] += corrected * Complex(d.prob[a][m]);
    }
    EmpProcessResult res;
    res.outputs = {outs[0], outs[1], outs[2], outs[4]};
    res.chi = assemble_process(res.outputs);
    res.dropped_outcomes = d.dropped;
    return res;
}

EmpRecipeResult emp_product_recipe(const ProductMpSpec& spec) {
    const ProductData d = product_data(spec);
    EmpRecipeResult res;
    res.dropped_outcomes = d.dropped;
    for (int xi = 0; xi < 8; ++xi) {
        ComplexMatrix state(2, 2);
        for (size_t a = 0; a < spec.outcomes.size(); ++a) {
            if (d.mass[a] < kMassFloor) continue;
            const auto& pr = d.prob[a];
            const double pa = 0.5 * (pr[0] + pr[1]);
            const double px = outcome_sign(xi, 0) > 0 ? pr[2] : pr[3];
            const double py = outcome_sign(xi, 1) > 0 ? pr[4] : pr[5];
            const double pz = outcome_sign(xi, 2) > 0 ? pr[0] : pr[1];
            const double coeff = pz + px + py - 2.0 * pa;
            if (coeff == 0.0) continue;
            const auto& u = spec.outcomes[a].correction;
            state += (u * d.rho_b[a] * u.adjoint()) * Complex(coeff);
        }
        res.recipe.sigma[xi] = state * Complex(1.0 / 8.0);
        res.psd_flags[xi] = is_psd(res.recipe.sigma[xi].hermitized(), 1e-9);
    }
    return res;
}

EmpBsmResult emp_bsm_process(const BsmMpSpec& spec) {
    validate_separable_resource(spec.resource);
    for (const auto& u : spec.corrections) validate_unitary(u, "correction");

    const int nkappa = static_cast<int>(spec.resource.size());
    const auto inputs = six_inputs();
    const auto settings = pauli_settings();

    // M^V_{1|kappa} = transpose(rho^A_kappa), M^V_{2|kappa} = I - that.
    std::vector<std::array<ComplexMatrix, 2>> mv(nkappa);
    for (int k = 0; k < nkappa; ++k) {
        mv[k][0] = spec.resource[k].rho_a.transpose();
        mv[k][1] = ComplexMatrix::identity(2) - mv[k][0];
    }

    // Joint hidden-state distribution per (kappa, outcome): product of the
    // per-setting outcome probabilities of M^V_{a|kappa}.
    auto lambda_prob = [&](int kappa, int a, int xi) {
        double p = 1.0;
        for (int k = 0; k < 3; ++k) {
            double q = (mv[kappa][a] * settings[k].plus).trace().real();
            q = std::clamp(q, 0.0, 1.0);
            p *= outcome_sign(xi, k) > 0 ? q : 1.0 - q;
        }
        return p;
    };

    EmpBsmResult res;
    std::array<ComplexMatrix, 6> outs;
    outs.fill(ComplexMatrix(2, 2));
    std::array<double, 2> p_outcome{};
    for (int a = 0; a < 2; ++a) {
        // Unnormalized teleported states and P(a|m) from the measurement.
        std::array<double, 6> pam{};
        for (int m = 0; m < 6; ++m) {
            ComplexMatrix acc(2, 2);
            for (int k = 0; k < nkappa; ++k) {
                const double w =
                    spec.resource[k].p * (mv[k][a] * inputs[m]).trace().real();
                pam[m] += w;
                acc += spec.resource[k].rho_b * Complex(w);
            }
            const auto& u = spec.corrections[a];
            outs[m] += u * acc * u.adjoint();
        }
        p_outcome[a] = 0.5 * (pam[0] + pam[1]);

        for (int xi = 0; xi < 8; ++xi) {
            double weight = 0.0;
            ComplexMatrix acc(2, 2);
            for (int k = 0; k < nkappa; ++k) {
                const double w = spec.resource[k].p * lambda_prob(k, a, xi);
                weight += w;
                acc += spec.resource[k].rho_b * Complex(w);
            }
            res.per_outcome[a].weight[xi] = weight;
            if (weight >= kMassFloor)
                res.per_outcome[a].hidden_state[xi] = acc * Complex(1.0 / weight);
        }
    }

    for (int xi = 0; xi < 8; ++xi) {
        ComplexMatrix sigma(2, 2);
        for (int a = 0; a < 2; ++a) {
            if (res.per_outcome[a].weight[xi] < kMassFloor) continue;
            const auto& u = spec.corrections[a];
            const ComplexMatrix term = u * res.per_outcome[a].hidden_state[xi] * u.adjoint();
            sigma += term * Complex(p_outcome[a] * res.per_outcome[a].weight[xi]);
        }
        res.recipe.sigma[xi] = sigma.hermitized();
    }

    res.outputs = {outs[0].hermitized(), outs[1].hermitized(), outs[2].hermitized(),
                   outs[4].hermitized()};
    res.chi = assemble_process(res.outputs);
    return res;
}

}  // namespace telecert
