#include "telecert/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace telecert {

namespace {

// Dense real symmetric helpers on row-major vectors. All blocks here are
// tiny (<= 16x16), so clarity wins over blocking tricks.
using RVec = std::vector<double>;

RVec matmul(int n, const RVec& a, const RVec& b) {
    RVec r(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a[static_cast<size_t>(i) * n + k];
            if (aik == 0.0) continue;
            const double* brow = &b[static_cast<size_t>(k) * n];
            double* rrow = &r[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) rrow[j] += aik * brow[j];
        }
    return r;
}

void symmetrize(int n, RVec& a) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a[static_cast<size_t>(i) * n + j] +
                                    a[static_cast<size_t>(j) * n + i]);
            a[static_cast<size_t>(i) * n + j] = v;
            a[static_cast<size_t>(j) * n + i] = v;
        }
}

double dot(const RVec& a, const RVec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double trace(int n, const RVec& a) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[static_cast<size_t>(i) * n + i];
    return s;
}

RVec identity(int n, double scale = 1.0) {
    RVec r(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) r[static_cast<size_t>(i) * n + i] = scale;
    return r;
}

void axpy(double alpha, const RVec& x, RVec& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double max_abs(const RVec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double fro(const RVec& a) { return std::sqrt(dot(a, a)); }

// Functions of a symmetric matrix through its eigendecomposition.
struct SymEig {
    std::vector<double> vals;
    RVec vecs;  // columns
};

SymEig eig(int n, const RVec& a) {
    SymEig e;
    detail::eig_sym_real(n, a, e.vals, e.vecs);
    return e;
}

RVec apply_fn(int n, const SymEig& e, double (*fn)(double)) {
    RVec r(static_cast<size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double f = fn(e.vals[k]);
        for (int i = 0; i < n; ++i) {
            const double vik = e.vecs[static_cast<size_t>(i) * n + k];
            if (vik == 0.0) continue;
            for (int j = 0; j < n; ++j)
                r[static_cast<size_t>(i) * n + j] +=
                    f * vik * e.vecs[static_cast<size_t>(j) * n + k];
        }
    }
    return r;
}

double fn_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }
double fn_invsqrt(double x) { return 1.0 / std::sqrt(std::max(x, 1e-300)); }
double fn_inv(double x) {
    return 1.0 / (std::abs(x) < 1e-300 ? (x < 0 ? -1e-300 : 1e-300) : x);
}

bool cholesky(int n, RVec& a) {
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double l = a[static_cast<size_t>(j) * n + k];
            d -= l * l;
        }
        if (d <= 0.0) return false;
        const double lj = std::sqrt(d);
        a[static_cast<size_t>(j) * n + j] = lj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
            a[static_cast<size_t>(i) * n + j] = s / lj;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a[static_cast<size_t>(i) * n + j] = 0.0;
    return true;
}

void chol_solve(int n, const RVec& l, std::vector<double>& x) {
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * x[k];
        x[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= l[static_cast<size_t>(k) * n + i] * x[k];
        x[i] = s / l[static_cast<size_t>(i) * n + i];
    }
}

// Largest t with X + t*D psd, via eigenvalues of Xinvsqrt D Xinvsqrt.
double max_step(int n, const RVec& x_invsqrt, const RVec& d) {
    RVec t = matmul(n, x_invsqrt, matmul(n, d, x_invsqrt));
    symmetrize(n, t);
    const auto e = eig(n, t);
    const double lo = e.vals.front();
    if (lo >= -1e-14) return std::numeric_limits<double>::infinity();
    return -1.0 / lo;
}

struct RealProblem {
    int nb = 0;
    std::vector<int> dim;
    std::vector<RVec> c;
    std::vector<std::vector<RVec>> a;  // a[i][b]
    std::vector<double> r;
};

// [[Re, -Im], [Im, Re]] scaled so that tr(embed(A) embed(X)) = tr(A X).
RVec embed_half(const ComplexMatrix& h, int d) {
    const int n = 2 * d;
    RVec e(static_cast<size_t>(n) * n, 0.0);
    if (h.empty()) return e;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            const double re = 0.5 * v.real();
            const double im = 0.5 * v.imag();
            e[static_cast<size_t>(i) * n + j] = re;
            e[static_cast<size_t>(i + d) * n + j + d] = re;
            e[static_cast<size_t>(i) * n + j + d] = -im;
            e[static_cast<size_t>(i + d) * n + j] = im;
        }
    return e;
}

ComplexMatrix extract(const RVec& x, int d) {
    const int n = 2 * d;
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double re = 0.5 * (x[static_cast<size_t>(i) * n + j] +
                                     x[static_cast<size_t>(i + d) * n + j + d]);
            const double im = 0.5 * (x[static_cast<size_t>(i + d) * n + j] -
                                     x[static_cast<size_t>(i) * n + j + d]);
            m(i, j) = Complex(re, im);
        }
    return m.hermitized();
}

struct Iterate {
    std::vector<RVec> x, s;
    std::vector<double> y;
};

struct Metrics {
    double pobj = 0.0, dobj = 0.0, pres = 0.0, dres = 0.0, gap = 0.0, mu = 0.0;
    /// Worst metric relative to its acceptance threshold.
    double score(const SdpOptions& o) const {
        return std::max({pres / o.feas_tol, dres / o.feas_tol, std::abs(gap) / o.gap_accept});
    }
};

Metrics measure(const RealProblem& p, const Iterate& it, int ntot) {
    Metrics m;
    for (int b = 0; b < p.nb; ++b) m.pobj += dot(p.c[b], it.x[b]);
    const int nc = static_cast<int>(p.r.size());
    for (int i = 0; i < nc; ++i) {
        m.dobj += p.r[i] * it.y[i];
        double ax = 0.0;
        for (int b = 0; b < p.nb; ++b) ax += dot(p.a[i][b], it.x[b]);
        m.pres = std::max(m.pres, std::abs(ax - p.r[i]));
    }
    double comp = 0.0;
    for (int b = 0; b < p.nb; ++b) {
        RVec rd = p.c[b];
        axpy(1.0, it.s[b], rd);
        for (int i = 0; i < nc; ++i) axpy(-it.y[i], p.a[i][b], rd);
        m.dres = std::max(m.dres, max_abs(rd));
        comp += dot(it.x[b], it.s[b]);
    }
    m.gap = m.dobj - m.pobj;
    m.mu = comp / ntot;
    return m;
}

}  // namespace

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::infeasible: return "infeasible";
        case SdpStatus::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

SdpSolution solve(const SdpProblem& prob, const SdpOptions& opts) {
    const int nb = static_cast<int>(prob.blocks.size());
    const int nc = static_cast<int>(prob.constraints.size());
    if (nb == 0) throw std::invalid_argument("sdp: no blocks");
    if (static_cast<int>(prob.objective.size()) != nb)
        throw std::invalid_argument("sdp: objective size mismatch");

    auto check_coeff = [&](const ComplexMatrix& m, int d, const char* what) {
        if (m.empty()) return;
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument(std::string("sdp: ") + what + " dimension mismatch");
        if (m.hermiticity_error() > 1e-10)
            throw std::invalid_argument(std::string("sdp: ") + what + " not Hermitian");
    };

    RealProblem p;
    p.nb = nb;
    p.dim.resize(nb);
    p.c.resize(nb);
    for (int b = 0; b < nb; ++b) {
        if (prob.blocks[b].dim <= 0) throw std::invalid_argument("sdp: bad block dimension");
        p.dim[b] = 2 * prob.blocks[b].dim;
        check_coeff(prob.objective[b], prob.blocks[b].dim, "objective");
        p.c[b] = embed_half(prob.objective[b], prob.blocks[b].dim);
    }
    p.a.resize(nc);
    p.r.resize(nc);
    for (int i = 0; i < nc; ++i) {
        const auto& con = prob.constraints[i];
        if (static_cast<int>(con.coeff.size()) != nb)
            throw std::invalid_argument("sdp: constraint coefficient count mismatch");
        if (!std::isfinite(con.rhs)) throw std::invalid_argument("sdp: non-finite rhs");
        p.a[i].resize(nb);
        for (int b = 0; b < nb; ++b) {
            check_coeff(con.coeff[b], prob.blocks[b].dim, "constraint");
            p.a[i][b] = embed_half(con.coeff[b], prob.blocks[b].dim);
        }
        p.r[i] = con.rhs;
    }

    int ntot = 0;
    for (int b = 0; b < nb; ++b) ntot += p.dim[b];

    double rmax = 0.0, data_norm = 1.0;
    for (double v : p.r) rmax = std::max(rmax, std::abs(v));
    for (int b = 0; b < nb; ++b) data_norm = std::max(data_norm, fro(p.c[b]));
    for (int i = 0; i < nc; ++i)
        for (int b = 0; b < nb; ++b) data_norm = std::max(data_norm, fro(p.a[i][b]));

    Iterate it;
    it.x.resize(nb);
    it.s.resize(nb);
    it.y.assign(nc, 0.0);
    for (int b = 0; b < nb; ++b) {
        it.x[b] = identity(p.dim[b], 1.0 + rmax);
        it.s[b] = identity(p.dim[b], data_norm);
    }

    SdpSolution sol;
    auto finalize = [&](const Iterate& best, const Metrics& m, SdpStatus st, int iters) {
        sol.status = st;
        sol.objective = m.pobj;
        sol.dual_objective = m.dobj;
        sol.primal_residual = m.pres;
        sol.dual_residual = m.dres;
        sol.duality_gap = m.gap;
        sol.iterations = iters;
        sol.dual = best.y;
        sol.primal.clear();
        for (int b = 0; b < nb; ++b)
            sol.primal.push_back(extract(best.x[b], prob.blocks[b].dim));
        return sol;
    };

    Iterate best = it;
    Metrics best_m = measure(p, it, ntot);
    double last_mu = best_m.mu;
    int stall = 0;
    int best_iter = 0;

    // Farkas check: a scaled y with adj(A)(y) psd and r'y < 0 proves primal
    // infeasibility.
    auto try_farkas = [&](const std::vector<double>& y) {
        double ynorm = 0.0;
        for (double v : y) ynorm = std::max(ynorm, std::abs(v));
        if (!(ynorm > 1e4) || !std::isfinite(ynorm)) return false;
        double ry = 0.0;
        for (int i = 0; i < nc; ++i) ry += p.r[i] * y[i] / ynorm;
        if (!(ry < -1e-8)) return false;
        for (int b = 0; b < nb; ++b) {
            RVec aty(static_cast<size_t>(p.dim[b]) * p.dim[b], 0.0);
            for (int i = 0; i < nc; ++i) axpy(y[i] / ynorm, p.a[i][b], aty);
            std::vector<double> vals;
            RVec vecs;
            detail::eig_sym_real(p.dim[b], aty, vals, vecs);
            if (vals.front() < -1e-8) return false;
        }
        sol.improving_ray.resize(nc);
        for (int i = 0; i < nc; ++i) sol.improving_ray[i] = y[i] / ynorm;
        return true;
    };
    std::vector<double> last_finite_y = it.y;

    std::vector<RVec> w(nb), s_inv(nb), x_invsqrt(nb), s_invsqrt_m(nb);
    std::vector<std::vector<RVec>> waw(nc);  // W A_i W per block
    std::vector<RVec> rd(nb), corr(nb), dxa(nb), dsa(nb), dx(nb), ds(nb);

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        Metrics m = measure(p, it, ntot);
        if (!std::isfinite(m.pobj) || !std::isfinite(m.dobj) || !std::isfinite(m.mu)) {
            if (try_farkas(last_finite_y))
                return finalize(best, best_m, SdpStatus::infeasible, iter);
            return finalize(best, best_m, SdpStatus::numerical_failure, iter);
        }
        last_finite_y = it.y;
        if (m.score(opts) < best_m.score(opts)) {
            best = it;
            best_m = m;
            best_iter = iter;
        }
        const double scale = 1.0 + std::abs(m.pobj) + std::abs(m.dobj);
        if (m.pres <= 1e-10 * scale && m.dres <= 1e-10 * scale &&
            std::abs(m.gap) <= opts.gap_tol * scale && m.mu <= opts.gap_tol * scale)
            return finalize(it, m, SdpStatus::optimal, iter);
        // Near-degenerate endgames can corrupt feasibility once mu is tiny;
        // settle for the best stored iterate when it already meets the
        // acceptance contract and has stopped improving.
        if (best_m.score(opts) <= 1.0 && iter - best_iter >= 4)
            return finalize(best, best_m, SdpStatus::optimal, iter);

        if (m.mu < 0.9 * last_mu)
            stall = 0;
        else
            ++stall;
        last_mu = std::min(last_mu, m.mu);

        double ynorm = 0.0;
        for (double v : it.y) ynorm = std::max(ynorm, std::abs(v));
        if (ynorm > 1e5 * (1.0 + rmax) && m.pres > opts.feas_tol && try_farkas(it.y))
            return finalize(best, best_m, SdpStatus::infeasible, iter);

        if (stall >= 15 || iter == opts.max_iterations) {
            if (best_m.pres <= opts.feas_tol * scale && best_m.dres <= opts.feas_tol * scale &&
                std::abs(best_m.gap) <= opts.gap_accept * scale)
                return finalize(best, best_m, SdpStatus::optimal, iter);
            if (try_farkas(it.y)) return finalize(best, best_m, SdpStatus::infeasible, iter);
            return finalize(best, best_m, SdpStatus::numerical_failure, iter);
        }

        // Nesterov-Todd scaling point per block: W S W = X.
        bool scaling_ok = true;
        for (int b = 0; b < nb; ++b) {
            const int n = p.dim[b];
            const auto es = eig(n, it.s[b]);
            if (es.vals.front() <= 0.0) {
                scaling_ok = false;
                break;
            }
            const RVec s_sqrt = apply_fn(n, es, fn_sqrt);
            const RVec s_invsqrt = apply_fn(n, es, fn_invsqrt);
            s_inv[b] = apply_fn(n, es, fn_inv);
            s_invsqrt_m[b] = s_invsqrt;
            RVec t = matmul(n, s_sqrt, matmul(n, it.x[b], s_sqrt));
            symmetrize(n, t);
            const auto et = eig(n, t);
            if (et.vals.front() <= 0.0) {
                scaling_ok = false;
                break;
            }
            const RVec t_sqrt = apply_fn(n, et, fn_sqrt);
            w[b] = matmul(n, s_invsqrt, matmul(n, t_sqrt, s_invsqrt));
            symmetrize(n, w[b]);

            const auto ex = eig(n, it.x[b]);
            if (ex.vals.front() <= 0.0) {
                scaling_ok = false;
                break;
            }
            x_invsqrt[b] = apply_fn(n, ex, fn_invsqrt);

            RVec r = p.c[b];
            axpy(1.0, it.s[b], r);
            for (int i = 0; i < nc; ++i) axpy(-it.y[i], p.a[i][b], r);
            rd[b] = std::move(r);
        }
        if (!scaling_ok) {
            if (best_m.pres <= opts.feas_tol * scale && best_m.dres <= opts.feas_tol * scale &&
                std::abs(best_m.gap) <= opts.gap_accept * scale)
                return finalize(best, best_m, SdpStatus::optimal, iter);
            return finalize(best, best_m, SdpStatus::numerical_failure, iter);
        }

        // Schur complement M_ij = sum_b tr(A_i W A_j W), factorized once per
        // iteration and reused for predictor and corrector solves.
        for (int j = 0; j < nc; ++j) {
            waw[j].resize(nb);
            for (int b = 0; b < nb; ++b) {
                const int n = p.dim[b];
                RVec t = matmul(n, w[b], matmul(n, p.a[j][b], w[b]));
                symmetrize(n, t);
                waw[j][b] = std::move(t);
            }
        }
        RVec schur(static_cast<size_t>(nc) * nc, 0.0);
        for (int i = 0; i < nc; ++i)
            for (int j = i; j < nc; ++j) {
                double v = 0.0;
                for (int b = 0; b < nb; ++b) v += dot(p.a[i][b], waw[j][b]);
                schur[static_cast<size_t>(i) * nc + j] = v;
                schur[static_cast<size_t>(j) * nc + i] = v;
            }
        RVec chol = schur;
        bool ok = cholesky(nc, chol);
        if (!ok) {
            double tr = trace(nc, schur);
            for (int i = 0; i < nc; ++i)
                schur[static_cast<size_t>(i) * nc + i] += 1e-12 * (1.0 + tr / nc);
            chol = schur;
            ok = cholesky(nc, chol);
        }
        if (!ok) return finalize(best, best_m, SdpStatus::numerical_failure, iter);

        // Direction for given sigma*mu and corrector term:
        //   M dy = sigma*mu*A(S^-1) - A(corr) - r + A(W Rd W)
        //   dS = adj(A)(dy) - Rd;  dX = sigma*mu*S^-1 - X - corr - W dS W
        auto compute_direction = [&](double sigma_mu, bool with_corr,
                                     std::vector<RVec>& dx_out, std::vector<RVec>& dso) {
            std::vector<double> rhs(nc, 0.0);
            for (int i = 0; i < nc; ++i) {
                double v = -p.r[i];
                for (int b = 0; b < nb; ++b) {
                    v += sigma_mu * dot(p.a[i][b], s_inv[b]);
                    v += dot(rd[b], waw[i][b]);
                    if (with_corr) v -= dot(p.a[i][b], corr[b]);
                }
                rhs[i] = v;
            }
            const std::vector<double> rhs0 = rhs;
            chol_solve(nc, chol, rhs);
            // One round of iterative refinement; the Schur matrix turns
            // ill-conditioned as mu shrinks.
            {
                std::vector<double> resid = rhs0;
                for (int i = 0; i < nc; ++i)
                    for (int j = 0; j < nc; ++j)
                        resid[i] -= schur[static_cast<size_t>(i) * nc + j] * rhs[j];
                chol_solve(nc, chol, resid);
                for (int i = 0; i < nc; ++i) rhs[i] += resid[i];
            }
            for (int b = 0; b < nb; ++b) {
                const int n = p.dim[b];
                RVec dsb = rd[b];
                for (auto& v : dsb) v = -v;
                for (int i = 0; i < nc; ++i) axpy(rhs[i], p.a[i][b], dsb);
                RVec dxb = s_inv[b];
                for (auto& v : dxb) v *= sigma_mu;
                axpy(-1.0, it.x[b], dxb);
                if (with_corr) axpy(-1.0, corr[b], dxb);
                RVec wdsw = matmul(n, w[b], matmul(n, dsb, w[b]));
                axpy(-1.0, wdsw, dxb);
                symmetrize(n, dxb);
                dx_out[b] = std::move(dxb);
                dso[b] = std::move(dsb);
            }
            return rhs;
        };

        auto steps = [&](const std::vector<RVec>& dxv, const std::vector<RVec>& dsv) {
            double ap = std::numeric_limits<double>::infinity();
            double ad = ap;
            for (int b = 0; b < nb; ++b) {
                const int n = p.dim[b];
                ap = std::min(ap, max_step(n, x_invsqrt[b], dxv[b]));
                RVec si = matmul(n, s_invsqrt_m[b], matmul(n, dsv[b], s_invsqrt_m[b]));
                symmetrize(n, si);
                const auto e = eig(n, si);
                if (e.vals.front() < -1e-14) ad = std::min(ad, -1.0 / e.vals.front());
            }
            return std::pair<double, double>(ap, ad);
        };

        (void)compute_direction(0.0, false, dxa, dsa);
        auto [apa, ada] = steps(dxa, dsa);
        const double ap_aff = std::min(1.0, 0.99 * apa);
        const double ad_aff = std::min(1.0, 0.99 * ada);
        double comp_aff = 0.0;
        for (int b = 0; b < nb; ++b) {
            RVec xa = it.x[b];
            axpy(ap_aff, dxa[b], xa);
            RVec sa = it.s[b];
            axpy(ad_aff, dsa[b], sa);
            comp_aff += dot(xa, sa);
        }
        const double mu_aff = comp_aff / ntot;
        double sigma = std::pow(std::max(mu_aff, 0.0) / std::max(m.mu, 1e-300), 3.0);
        // Keep centering while feasibility lags complementarity, otherwise
        // the iterate dives to the boundary with the residual stuck.
        if (std::max(m.pres, m.dres) > 10.0 * m.mu) sigma = std::max(sigma, 0.5);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        for (int b = 0; b < nb; ++b) {
            const int n = p.dim[b];
            RVec t = matmul(n, dxa[b], matmul(n, dsa[b], s_inv[b]));
            symmetrize(n, t);
            corr[b] = std::move(t);
        }
        std::vector<double> dy = compute_direction(sigma * m.mu, true, dx, ds);
        auto [apc, adc] = steps(dx, ds);
        if (std::min(apc, adc) < 0.2 * std::min(apa, ada)) {
            dy = compute_direction(sigma * m.mu, false, dx, ds);
            std::tie(apc, adc) = steps(dx, ds);
        }
        const double ap = std::min(1.0, 0.99 * apc);
        const double ad = std::min(1.0, 0.99 * adc);
        if (ap < 1e-10 && ad < 1e-10) {
            ++stall;
            continue;
        }
        for (int b = 0; b < nb; ++b) {
            axpy(ap, dx[b], it.x[b]);
            axpy(ad, ds[b], it.s[b]);
            symmetrize(p.dim[b], it.x[b]);
            symmetrize(p.dim[b], it.s[b]);
        }
        for (int i = 0; i < nc; ++i) it.y[i] += ad * dy[i];
    }

    Metrics m = measure(p, it, ntot);
    return finalize(it, m, SdpStatus::numerical_failure, opts.max_iterations);
}

}  // namespace telecert
