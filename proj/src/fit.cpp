#include "tvscb/fit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tvscb/parallel.hpp"

namespace tvscb {

namespace {

double sample_variance(const std::vector<double>& x) {
    if (x.empty()) return 1.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double v = 0.0;
    for (double xi : x) v += (xi - mean) * (xi - mean);
    v /= static_cast<double>(x.size());
    return v > 0.0 ? v : 1.0;
}

double mean_square(const std::vector<double>& x) {
    if (x.empty()) return 1.0;
    double v = 0.0;
    for (double xi : x) v += xi * xi;
    v /= static_cast<double>(x.size());
    return v > 0.0 ? v : 1.0;
}

struct LocalBox {
    VectorXd lower;
    VectorXd upper;
};

LocalBox local_box(const ModelSpec& model, bool freeze_slope) {
    const int d = model.dim();
    LocalBox b;
    if (freeze_slope) {
        b.lower = model.lower;
        b.upper = model.upper;
        return b;
    }
    b.lower.resize(2 * d);
    b.upper.resize(2 * d);
    b.lower << model.lower, VectorXd::Constant(d, -model.slope_radius);
    b.upper << model.upper, VectorXd::Constant(d, model.slope_radius);
    return b;
}

// Newton, then up to `restarts` random restarts, then Nelder-Mead polished by
// Newton. Keeps the best converged attempt, or the best attempt overall.
OptResult minimize_with_fallbacks(const BoxProblem& prob, const VectorXd& x0, const FitOptions& fo,
                                  std::uint64_t stream_index) {
    OptResult best = projected_newton(prob, x0, fo.opt);
    if (best.converged) return best;
    int total_iter = best.iterations;

    auto consider = [&](OptResult r) {
        total_iter += r.iterations;
        const bool better = (r.converged && !best.converged) ||
                            (r.converged == best.converged && r.value < best.value);
        if (better) best = std::move(r);
    };

    const Eigen::Index n = x0.size();
    for (int a = 0; a < fo.restarts && !best.converged; ++a) {
        auto gen = make_engine(fo.seed, "restarts", stream_index * 8 + static_cast<std::uint64_t>(a));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        VectorXd z = x0;
        for (Eigen::Index c = 0; c < n; ++c) {
            const double span = 0.3 * std::max(std::abs(x0(c)), 0.1);
            z(c) = x0(c) + span * unif(gen);
        }
        consider(projected_newton(prob, prob.project(z), fo.opt));
    }
    if (!best.converged) {
        VectorXd step(n);
        for (Eigen::Index c = 0; c < n; ++c) step(c) = 0.1 * std::max(std::abs(x0(c)), 0.05);
        OptResult nm = nelder_mead_box(prob, best.x, step, fo.opt);
        OptResult polished = projected_newton(prob, nm.x, fo.opt);
        polished.iterations += nm.iterations;
        if (!polished.converged && nm.converged && nm.value <= polished.value) {
            consider(std::move(nm));
        } else {
            consider(std::move(polished));
        }
    }
    best.iterations = total_iter;
    return best;
}

}  // namespace

VectorXd initial_guess(const Series& s, const ModelSpec& model) {
    const int d = model.dim();
    VectorXd th(d);
    switch (model.family) {
        case Family::TvAR:
            th.setZero();
            th(model.p) = sample_variance(s.x);
            break;
        case Family::TvARCH: {
            const double a = 0.3 / model.p;
            th.setConstant(a);
            th(0) = mean_square(s.x) * 0.7;
            break;
        }
        case Family::TvGARCH: {
            th.setZero();
            for (int j = 1; j <= model.p; ++j) th(j) = 0.15 / model.p;
            for (int j = 1; j <= model.l; ++j) th(model.p + j) = 0.6 / model.l;
            th(0) = mean_square(s.x) * 0.25;
            break;
        }
    }
    return model.clamp(th);
}

OptResult global_qmle(const Series& s, const ModelSpec& model, const FitOptions& fo,
                      const std::optional<VectorXd>& start) {
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("global_qmle: empty series");
    const double nd = static_cast<double>(n);
    BoxProblem prob;
    prob.lower = model.lower;
    prob.upper = model.upper;
    if (model.family == Family::TvGARCH) {
        prob.f = [&s, &model, nd, n](const VectorXd& th, Order order) {
            const GarchState st = garch_sigma2_path(s.y, model.p, model.l, th, order);
            LossEval out;
            if (order != Order::Value) out.grad = VectorXd::Zero(th.size());
            if (order == Order::Hessian) out.hess = MatrixXd::Zero(th.size(), th.size());
            for (std::size_t i = 1; i <= n; ++i) {
                const LossEval e = garch_loss(i, st, s.y[i - 1], order);
                out.value += e.value / nd;
                if (order != Order::Value) out.grad += e.grad / nd;
                if (order == Order::Hessian) out.hess += e.hess / nd;
            }
            return out;
        };
    } else {
        prob.f = [&s, &model, nd, n](const VectorXd& th, Order order) {
            LossEval out;
            if (order != Order::Value) out.grad = VectorXd::Zero(th.size());
            if (order == Order::Hessian) out.hess = MatrixXd::Zero(th.size(), th.size());
            for (std::size_t i = 1; i <= n; ++i) {
                const LossEval e = observation_loss(s, model, i, th, order);
                out.value += e.value / nd;
                if (order != Order::Value) out.grad += e.grad / nd;
                if (order == Order::Hessian) out.hess += e.hess / nd;
            }
            return out;
        };
    }
    const VectorXd x0 = start ? model.clamp(*start) : initial_guess(s, model);
    return minimize_with_fallbacks(prob, x0, fo, 0x676c6f62616cULL);
}

LocalFit fit_local(const Series& s, double t, double b, const ModelSpec& model, const Kernel& k,
                   const std::optional<WarmStart>& warm, const FitOptions& fo,
                   std::optional<std::size_t> leave_out) {
    const int d = model.dim();
    const LocalBox box = local_box(model, fo.freeze_slope);
    BoxProblem prob;
    prob.lower = box.lower;
    prob.upper = box.upper;
    const VectorXd zero_slope = VectorXd::Zero(d);
    if (fo.freeze_slope) {
        prob.f = [&, t, b](const VectorXd& th, Order order) {
            LossEval e = local_objective(s, model, k, t, b, th, zero_slope, order, leave_out);
            if (order != Order::Value) e.grad = e.grad.head(d).eval();
            if (order == Order::Hessian) e.hess = e.hess.topLeftCorner(d, d).eval();
            return e;
        };
    } else {
        prob.f = [&, t, b](const VectorXd& z, Order order) {
            return local_objective(s, model, k, t, b, z.head(d), z.tail(d), order, leave_out);
        };
    }

    VectorXd th0, tp0;
    if (warm) {
        th0 = warm->first;
        tp0 = warm->second.size() == d ? warm->second : zero_slope;
    } else {
        th0 = global_qmle(s, model, fo).x;
        tp0 = zero_slope;
    }
    VectorXd x0(prob.lower.size());
    if (fo.freeze_slope) {
        x0 = th0;
    } else {
        x0 << th0, tp0;
    }
    x0 = prob.project(x0);

    const std::uint64_t idx = std::bit_cast<std::uint64_t>(t) ^ (leave_out ? (*leave_out << 1) : 0);
    const OptResult r = minimize_with_fallbacks(prob, x0, fo, idx);

    LocalFit out;
    out.t = t;
    out.theta = r.x.head(d);
    out.theta_prime = fo.freeze_slope ? zero_slope : VectorXd(r.x.tail(d));
    out.converged = r.converged;
    out.objective = r.value;
    out.iterations = r.iterations;
    return out;
}

std::vector<double> default_grid(double b, int min_points) {
    if (!(b > 0.0)) throw std::invalid_argument("default_grid: bandwidth must be positive");
    const int g = std::max(min_points, static_cast<int>(std::ceil(3.0 / b)));
    std::vector<double> grid(static_cast<std::size_t>(g));
    for (int k = 1; k <= g; ++k) grid[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / (g + 1);
    return grid;
}

CurveFit fit_curve(const Series& s, double b, const std::vector<double>& grid, const ModelSpec& model,
                   const Kernel& k, const FitOptions& fo) {
    if (grid.empty()) throw std::invalid_argument("fit_curve: empty grid");
    for (double t : grid) {
        if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("fit_curve: grid points must lie in (0,1)");
    }
    CurveFit cf;
    cf.model = model;
    cf.bandwidth = b;
    cf.grid = grid;
    cf.fits.resize(grid.size());

    const VectorXd theta_global = global_qmle(s, model, fo).x;
    const VectorXd zero = VectorXd::Zero(model.dim());
    const std::size_t G = grid.size();
    const std::size_t C = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(fo.chunks, 1)), 1, G);
    parallel_for(C, fo.threads, [&](std::size_t c) {
        const std::size_t lo = c * G / C;
        const std::size_t hi = (c + 1) * G / C;
        WarmStart ws{theta_global, zero};
        for (std::size_t g = lo; g < hi; ++g) {
            cf.fits[g] = fit_local(s, grid[g], b, model, k, ws, fo);
            if (cf.fits[g].converged) ws = {cf.fits[g].theta, cf.fits[g].theta_prime};
        }
    });
    for (const auto& f : cf.fits) cf.discarded += f.converged ? 0 : 1;
    if (static_cast<double>(cf.discarded) > fo.max_fail_fraction * static_cast<double>(G)) {
        throw ConvergenceError("fit_curve: " + std::to_string(cf.discarded) + " of " + std::to_string(G) +
                               " grid points did not converge at b=" + std::to_string(b) +
                               "; try a larger bandwidth");
    }
    return cf;
}

DebiasedCurve jackknife_debias(const CurveFit& fit_b, const CurveFit& fit_b_sqrt2) {
    if (fit_b.grid != fit_b_sqrt2.grid || fit_b.fits.size() != fit_b_sqrt2.fits.size()) {
        throw std::invalid_argument("jackknife_debias: fits do not share a grid");
    }
    DebiasedCurve out;
    out.grid = fit_b.grid;
    out.theta.resize(fit_b.fits.size());
    out.valid.resize(fit_b.fits.size());
    for (std::size_t g = 0; g < fit_b.fits.size(); ++g) {
        out.theta[g] = 2.0 * fit_b_sqrt2.fits[g].theta - fit_b.fits[g].theta;
        out.valid[g] = fit_b.fits[g].converged && fit_b_sqrt2.fits[g].converged;
    }
    return out;
}

}  // namespace tvscb
