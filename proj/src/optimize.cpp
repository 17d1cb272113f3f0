#include "tvscb/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tvscb {

namespace {

bool finite(const LossEval& e) {
    return std::isfinite(e.value) && (e.grad.size() == 0 || e.grad.allFinite()) &&
           (e.hess.size() == 0 || e.hess.allFinite());
}

}  // namespace

OptResult projected_newton(const BoxProblem& prob, const VectorXd& x0, const OptOptions& opt) {
    const Eigen::Index n = x0.size();
    OptResult res;
    res.x = prob.project(x0);
    LossEval cur = prob.f(res.x, Order::Hessian);
    if (!finite(cur)) {
        res.value = cur.value;
        return res;
    }
    for (int it = 0; it < opt.max_iter; ++it) {
        res.iterations = it;
        const VectorXd& g = cur.grad;
        const VectorXd pg = res.x - prob.project(res.x - g);
        const double pgn = pg.lpNorm<Eigen::Infinity>();
        if (pgn <= opt.grad_tol) {
            res.converged = true;
            break;
        }
        // Variables held at a bound: within eps of it with the gradient pushing outward.
        const double eps = std::min(1e-6, pgn);
        std::vector<Eigen::Index> free_idx;
        std::vector<char> active(static_cast<std::size_t>(n), 0);
        for (Eigen::Index a = 0; a < n; ++a) {
            const bool at_lo = res.x(a) - prob.lower(a) <= eps && g(a) > 0.0;
            const bool at_hi = prob.upper(a) - res.x(a) <= eps && g(a) < 0.0;
            if (at_lo || at_hi) {
                active[static_cast<std::size_t>(a)] = 1;
            } else {
                free_idx.push_back(a);
            }
        }
        VectorXd p = VectorXd::Zero(n);
        for (Eigen::Index a = 0; a < n; ++a) {
            if (active[static_cast<std::size_t>(a)]) {
                p(a) = -g(a) / std::max(std::abs(cur.hess(a, a)), 1e-8);
            }
        }
        if (!free_idx.empty()) {
            const auto nf = static_cast<Eigen::Index>(free_idx.size());
            MatrixXd hf(nf, nf);
            VectorXd gf(nf);
            for (Eigen::Index r = 0; r < nf; ++r) {
                gf(r) = g(free_idx[static_cast<std::size_t>(r)]);
                for (Eigen::Index c = 0; c < nf; ++c) {
                    hf(r, c) = cur.hess(free_idx[static_cast<std::size_t>(r)], free_idx[static_cast<std::size_t>(c)]);
                }
            }
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(hf);
            VectorXd lam = es.eigenvalues().cwiseAbs();
            const double floor = 1e-10 * std::max(1.0, lam.maxCoeff());
            lam = lam.cwiseMax(floor);
            const MatrixXd& Q = es.eigenvectors();
            const VectorXd pf = -(Q * ((Q.transpose() * gf).cwiseQuotient(lam)));
            for (Eigen::Index r = 0; r < nf; ++r) p(free_idx[static_cast<std::size_t>(r)]) = pf(r);
        }

        double step = 1.0;
        bool accepted = false;
        VectorXd xn;
        LossEval trial;
        double decrease = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            xn = prob.project(res.x + step * p);
            decrease = g.dot(xn - res.x);
            trial = prob.f(xn, Order::Value);
            if (std::isfinite(trial.value) && trial.value <= cur.value + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No representable decrease left along a descent direction: stationary to rounding.
            const double pred = -g.dot(prob.project(res.x + p) - res.x);
            if (pred <= 1e-14 * std::max(1.0, std::abs(cur.value)) || pgn <= 1e3 * opt.grad_tol) {
                res.converged = true;
            }
            break;
        }
        res.x = xn;
        cur = prob.f(res.x, Order::Hessian);
        if (!finite(cur)) break;
        if (-decrease < 1e-18) {
            res.iterations = it + 1;
            res.converged = true;
            break;
        }
        res.iterations = it + 1;
    }
    res.value = cur.value;
    return res;
}

OptResult nelder_mead_box(const BoxProblem& prob, const VectorXd& x0, const VectorXd& step,
                          const OptOptions& opt) {
    const Eigen::Index n = x0.size();
    const auto np = static_cast<std::size_t>(n + 1);
    std::vector<VectorXd> pts(np);
    std::vector<double> fv(np);
    auto eval = [&](const VectorXd& x) {
        const double v = prob.f(x, Order::Value).value;
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    pts[0] = prob.project(x0);
    for (Eigen::Index a = 0; a < n; ++a) {
        VectorXd v = pts[0];
        v(a) += step(a);
        if (prob.project(v) == pts[0]) v(a) -= 2.0 * step(a);
        pts[static_cast<std::size_t>(a + 1)] = prob.project(v);
    }
    int evals = 0;
    for (std::size_t k = 0; k < np; ++k) {
        fv[k] = eval(pts[k]);
        ++evals;
    }
    // adaptive coefficients for higher dimensions
    const double dn = static_cast<double>(n);
    const double rho = 1.0, chi = 1.0 + 2.0 / dn, psi = 0.75 - 1.0 / (2.0 * dn), sig = 1.0 - 1.0 / dn;

    OptResult res;
    std::vector<std::size_t> ord(np);
    int iter = 0;
    while (evals < opt.max_nm_evals) {
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        double diam = 0.0;
        for (std::size_t k = 1; k < np; ++k) {
            diam = std::max(diam, (pts[ord[k]] - pts[ord[0]]).lpNorm<Eigen::Infinity>());
        }
        if (diam < opt.simplex_tol) {
            res.converged = true;
            break;
        }
        ++iter;
        const std::size_t worst = ord[np - 1];
        VectorXd cen = VectorXd::Zero(n);
        for (std::size_t k = 0; k + 1 < np; ++k) cen += pts[ord[k]];
        cen /= dn;
        const VectorXd xr = prob.project(cen + rho * (cen - pts[worst]));
        const double fr = eval(xr);
        ++evals;
        const double fbest = fv[ord[0]], fsecond = fv[ord[np - 2]], fworst = fv[worst];
        if (fr < fbest) {
            const VectorXd xe = prob.project(cen + rho * chi * (cen - pts[worst]));
            const double fe = eval(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fsecond) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        bool shrink = false;
        if (fr < fworst) {
            const VectorXd xc = prob.project(cen + psi * rho * (cen - pts[worst]));
            const double fc = eval(xc);
            ++evals;
            if (fc <= fr) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {
                shrink = true;
            }
        } else {
            const VectorXd xc = prob.project(cen - psi * (cen - pts[worst]));
            const double fc = eval(xc);
            ++evals;
            if (fc < fworst) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            const VectorXd best = pts[ord[0]];
            for (std::size_t k = 1; k < np; ++k) {
                pts[ord[k]] = prob.project(best + sig * (pts[ord[k]] - best));
                fv[ord[k]] = eval(pts[ord[k]]);
                ++evals;
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = pts[best];
    res.value = fv[best];
    res.iterations = iter;
    return res;
}

}  // namespace tvscb
