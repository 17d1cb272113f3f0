#include "tvscb/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tvscb/loss.hpp"
#include "tvscb/parallel.hpp"
#include "tvscb/simulate.hpp"

namespace tvscb {

double cv_objective(const Series& s, double b, const ModelSpec& model, const Kernel& k, const CvOptions& opt) {
    if (!(opt.gamma0 > 0.0 && opt.gamma0 < 0.5)) throw std::invalid_argument("cv: gamma0 must lie in (0, 1/2)");
    if (opt.stride < 1) throw std::invalid_argument("cv: stride must be >= 1");
    const std::size_t n = s.size();
    const double nd = static_cast<double>(n);
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / nd;
        if (t >= opt.gamma0 && t <= 1.0 - opt.gamma0) idx.push_back(i);
    }
    std::vector<std::size_t> eval;
    for (std::size_t j = 0; j < idx.size(); j += static_cast<std::size_t>(opt.stride)) eval.push_back(idx[j]);
    if (eval.empty()) throw std::invalid_argument("cv: no evaluation points inside [gamma0, 1-gamma0]");

    const VectorXd theta_global = global_qmle(s, model, opt.fit).x;
    const VectorXd zero = VectorXd::Zero(model.dim());
    const std::size_t E = eval.size();
    std::vector<double> terms(E, 0.0);
    std::vector<char> ok(E, 0);
    const std::size_t C = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opt.fit.chunks, 1)), 1, E);
    parallel_for(C, opt.fit.threads, [&](std::size_t c) {
        WarmStart ws{theta_global, zero};
        for (std::size_t e = c * E / C; e < (c + 1) * E / C; ++e) {
            const std::size_t i = eval[e];
            const double t = static_cast<double>(i) / nd;
            const LocalFit f = fit_local(s, t, b, model, k, ws, opt.fit, i);
            ok[e] = f.converged;
            if (f.converged) ws = {f.theta, f.theta_prime};
            terms[e] = observation_loss(s, model, i, model.clamp(f.theta), Order::Value).value;
        }
    });
    std::size_t failed = 0;
    double sum = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
        if (!ok[e]) ++failed;
        sum += terms[e];
    }
    if (static_cast<double>(failed) > 0.2 * static_cast<double>(E)) {
        throw ConvergenceError("cv: " + std::to_string(failed) + " of " + std::to_string(E) +
                               " leave-one-out fits did not converge at b=" + std::to_string(b));
    }
    return sum * static_cast<double>(opt.stride) / nd;
}

BandwidthSelection select_bandwidth(const Series& s, const ModelSpec& model, const std::vector<double>& b_grid,
                                    const Kernel& k, const CvOptions& opt) {
    if (b_grid.empty()) throw std::invalid_argument("select_bandwidth: empty bandwidth grid");
    std::vector<double> grid = b_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    BandwidthSelection out;
    for (double b : grid) {
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("select_bandwidth: bandwidths must lie in (0,1)");
        out.table.emplace_back(b, cv_objective(s, b, model, k, opt));
    }
    double best = out.table.front().second;
    out.b_cv = out.table.front().first;
    for (const auto& [b, v] : out.table) {
        if (v < best) {
            best = v;
            out.b_cv = b;
        }
    }
    return out;
}

std::vector<double> default_bandwidth_grid() {
    std::vector<double> g(14);
    const double lo = std::log(0.05), hi = std::log(0.7);
    for (int j = 0; j < 14; ++j) g[static_cast<std::size_t>(j)] = std::exp(lo + (hi - lo) * j / 13.0);
    return g;
}

StationaryMoments stationary_moments(const ModelSpec& model, const VectorXd& theta, std::size_t draws,
                                     std::uint64_t seed) {
    std::vector<CurveComponent> comps;
    for (Eigen::Index j = 0; j < theta.size(); ++j) comps.push_back(CurveComponent::constant(theta(j)));
    const ParamCurves frozen(model, comps);
    const Series path = simulate(frozen, draws, seed).series;
    const int d = model.dim();
    StationaryMoments m{MatrixXd::Zero(d, d), MatrixXd::Zero(d, d)};
    // skip the zero-padded start of the truncated past
    const std::size_t skip = std::min<std::size_t>(draws / 10, 2000);
    std::size_t count = 0;
    auto add = [&](const LossEval& e) {
        m.V += e.hess;
        m.I += e.grad * e.grad.transpose();
        ++count;
    };
    if (model.family == Family::TvGARCH) {
        const GarchState st = garch_sigma2_path(path.y, model.p, model.l, theta, Order::Hessian);
        for (std::size_t i = skip + 1; i <= draws; ++i) add(garch_loss(i, st, path.y[i - 1], Order::Hessian));
    } else {
        for (std::size_t i = skip + 1; i <= draws; ++i) add(observation_loss(path, model, i, theta, Order::Hessian));
    }
    m.V /= static_cast<double>(count);
    m.I /= static_cast<double>(count);
    return m;
}

double oracle_bandwidth(const ParamCurves& truth, std::size_t n, const Kernel& k, const OracleOptions& opt) {
    if (opt.points < 3 || opt.points % 2 == 0) throw std::invalid_argument("oracle_bandwidth: points must be odd and >= 3");
    const auto P = static_cast<std::size_t>(opt.points);
    std::vector<double> tr(P), curv(P);
    parallel_for(P, opt.threads, [&](std::size_t j) {
        const double t = static_cast<double>(j) / static_cast<double>(P - 1);
        const VectorXd th = truth.at(t);
        const StationaryMoments sm = stationary_moments(truth.model, th, opt.mc_draws, stream_seed(opt.seed, "oracle", j));
        const MatrixXd vi = sm.V.inverse();
        tr[j] = (vi * sm.I * vi).trace();
        double c = 0.0;
        for (const auto& comp : truth.components) {
            const double v = comp.second_derivative(t);
            c += v * v;
        }
        curv[j] = c;
    });
    // Simpson's rule on [0, 1]
    auto simpson = [P](const std::vector<double>& f) {
        const double h = 1.0 / static_cast<double>(P - 1);
        double s = f.front() + f.back();
        for (std::size_t j = 1; j + 1 < P; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * f[j];
        return s * h / 3.0;
    };
    const double num = kernel_moment(k, 0, true) * simpson(tr);
    const double mu2 = kernel_moment(k, 2, false);
    const double den = mu2 * mu2 * simpson(curv);
    if (!(den > 0.0)) throw std::domain_error("oracle_bandwidth: theta'' vanishes, optimal bandwidth undefined");
    return std::pow(static_cast<double>(n), -0.2) * std::pow(num / den, 0.2);
}

}  // namespace tvscb
