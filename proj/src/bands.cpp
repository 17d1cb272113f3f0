#include "tvscb/bands.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "tvscb/parallel.hpp"

namespace tvscb {

std::string to_string(BandMethod m) {
    switch (m) {
        case BandMethod::BootstrapDebias: return "bootstrap";
        case BandMethod::Gumbel: return "gumbel";
        case BandMethod::Pointwise: return "pointwise";
    }
    return "unknown";
}

bool Band::contains(std::size_t g, const VectorXd& value_C) const {
    const VectorXd diff = value_C - center[g];
    if (diff.size() == 1) return std::abs(diff(0)) <= radius[g];
    const VectorXd z = sigma[g].ldlt().solve(diff);
    return z.norm() <= scale[g];
}

bool Band::covers(const std::vector<VectorXd>& values_C) const {
    if (values_C.size() != grid.size()) throw std::invalid_argument("Band::covers: size mismatch");
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (active[g] && !contains(g, values_C[g])) return false;
    }
    return true;
}

double boundary_divisor(const Kernel& k, double b, double t) {
    const double f = boundary_factor(k, 0, b, t) * boundary_factor(k, 0, b / std::sqrt(2.0), t);
    return std::max(f, 0.05);
}

MatrixXd debias_weights(std::size_t n, double b, const Kernel& k, const std::vector<double>& grid) {
    const double nd = static_cast<double>(n);
    const double b2 = b / std::sqrt(2.0);
    MatrixXd a = MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(n));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double t = grid[g];
        const double n0b = boundary_factor(k, 0, b, t);
        const double n0b2 = boundary_factor(k, 0, b2, t);
        const double rb = truncated_moment(k, 1, b, t) / truncated_moment(k, 2, b, t);
        const double rb2 = truncated_moment(k, 1, b2, t) / truncated_moment(k, 2, b2, t);
        const Window win = kernel_window(n, t, b, k);
        for (std::size_t i = win.first; i <= win.last; ++i) {
            const double u = static_cast<double>(i) / nd - t;
            const double xb = u / b, xb2 = u / b2;
            const double kb = k(xb) / (nd * b);
            const double kb2 = k(xb2) / (nd * b2);
            a(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i - 1)) =
                2.0 * n0b * (kb2 - rb2 * kb2 * xb2) - n0b2 * (kb - rb * kb * xb);
        }
    }
    return a;
}

double empirical_quantile(const std::vector<double>& sorted, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: no draws");
    const double N = static_cast<double>(sorted.size());
    const auto k = static_cast<std::size_t>(std::max(1.0, std::floor((1.0 - alpha) * N + 1e-9)));
    return sorted[std::min(k, sorted.size()) - 1];
}

BootstrapQuantile bootstrap_sup_quantile(std::size_t n, double b, const Kernel& k, int s, int N,
                                         double alpha, std::uint64_t seed,
                                         const std::vector<double>& grid, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (N < 1 || s < 1) throw std::invalid_argument("bootstrap: need N >= 1 and s >= 1");
    if (grid.empty()) throw std::invalid_argument("bootstrap: empty grid");
    const MatrixXd A = debias_weights(n, b, k, grid);
    const auto G = static_cast<Eigen::Index>(grid.size());

    // Replicates are generated in fixed batches, each from its own stream,
    // so the draws do not depend on the thread count.
    constexpr int kBatch = 64;
    const int nbatch = (N + kBatch - 1) / kBatch;
    std::vector<double> sups(static_cast<std::size_t>(N));
    parallel_for(static_cast<std::size_t>(nbatch), threads, [&](std::size_t bi) {
        const int r0 = static_cast<int>(bi) * kBatch;
        const int nr = std::min(kBatch, N - r0);
        MatrixXd V(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nr) * s);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int r = 0; r < nr; ++r) {
            auto gen = make_engine(seed, "bootstrap", static_cast<std::uint64_t>(r0 + r));
            for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
                for (int c = 0; c < s; ++c) V(i, static_cast<Eigen::Index>(r) * s + c) = nd(gen);
            }
        }
        const MatrixXd W = A * V;
        for (int r = 0; r < nr; ++r) {
            double best = 0.0;
            for (Eigen::Index g = 0; g < G; ++g) {
                double sq = 0.0;
                for (int c = 0; c < s; ++c) {
                    const double w = W(g, static_cast<Eigen::Index>(r) * s + c);
                    sq += w * w;
                }
                best = std::max(best, sq);
            }
            sups[static_cast<std::size_t>(r0 + r)] = std::sqrt(best);
        }
    });
    BootstrapQuantile out;
    out.draws = std::move(sups);
    std::sort(out.draws.begin(), out.draws.end());
    out.u = empirical_quantile(out.draws, alpha);
    return out;
}

namespace {

Band assemble(const std::vector<VectorXd>& theta, const SigmaField& sigma, const std::vector<double>& scale,
              const std::vector<char>& active, double alpha, double u, BandMethod method) {
    if (theta.size() != sigma.grid.size() || sigma.SigmaC.size() != sigma.grid.size()) {
        throw std::invalid_argument("band: estimate and covariance do not share a grid");
    }
    Band band;
    band.grid = sigma.grid;
    band.alpha = alpha;
    band.u = u;
    band.method = method;
    band.scale = scale;
    band.active = active;
    const std::size_t G = sigma.grid.size();
    band.center.resize(G);
    band.sigma = sigma.SigmaC;
    band.radius.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        band.center[g] = sigma.C.transpose() * theta[g];
        const MatrixXd& S = sigma.SigmaC[g];
        const double norm2 = S.size() == 1 ? std::abs(S(0, 0))
                                           : Eigen::SelfAdjointEigenSolver<MatrixXd>(S).eigenvalues().cwiseAbs().maxCoeff();
        band.radius[g] = norm2 * scale[g];
    }
    return band;
}

}  // namespace

Band build_scb_bootstrap(const DebiasedCurve& debiased, const SigmaField& sigma, double u, double b,
                         const Kernel& k, bool widen_boundary, double alpha) {
    if (debiased.grid != sigma.grid) throw std::invalid_argument("build_scb_bootstrap: grid mismatch");
    const std::size_t G = sigma.grid.size();
    std::vector<double> scale(G, u);
    if (widen_boundary) {
        for (std::size_t g = 0; g < G; ++g) scale[g] = u / boundary_divisor(k, b, sigma.grid[g]);
    }
    return assemble(debiased.theta, sigma, scale, debiased.valid, alpha, u, BandMethod::BootstrapDebias);
}

double gumbel_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    return -std::log(-std::log(1.0 - alpha) / 2.0);
}

Band gumbel_scb(const DebiasedCurve& debiased, const SigmaField& sigma, std::size_t n, double b,
                double alpha, const Kernel& k) {
    if (debiased.grid != sigma.grid) throw std::invalid_argument("gumbel_scb: grid mismatch");
    const Kernel kt = k.type() == KernelType::Jackknife4thOrder ? k : Kernel::jackknife(k);
    const int s = static_cast<int>(sigma.C.cols());
    const GumbelConstants gc = gumbel_constants(kt, s, b);
    const double ms = 1.0 / b;
    const double crit = gc.B + gumbel_quantile(alpha) / std::sqrt(2.0 * std::log(ms));
    const double sk = std::sqrt(kernel_moment(kt, 0, true));
    const double q = sk * crit / std::sqrt(static_cast<double>(n) * b);
    const std::size_t G = sigma.grid.size();
    std::vector<char> active(G);
    for (std::size_t g = 0; g < G; ++g) {
        const double t = sigma.grid[g];
        active[g] = debiased.valid[g] && t >= b && t <= 1.0 - b;
    }
    return assemble(debiased.theta, sigma, std::vector<double>(G, q), active, alpha, crit, BandMethod::Gumbel);
}

Band pointwise_band(const std::vector<VectorXd>& theta, const SigmaField& sigma, std::size_t n, double b,
                    double alpha, const Kernel& k) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    const boost::math::normal_distribution<double> norm;
    const double z = boost::math::quantile(norm, 1.0 - alpha / 2.0);
    const double q = z * std::sqrt(kernel_moment(k, 0, true)) / std::sqrt(static_cast<double>(n) * b);
    const std::size_t G = sigma.grid.size();
    return assemble(theta, sigma, std::vector<double>(G, q), std::vector<char>(G, 1), alpha, z,
                    BandMethod::Pointwise);
}

bool band_rejects_constancy(const Band& band) {
    if (band.rank() != 1) throw std::invalid_argument("band_rejects_constancy: needs an s = 1 band");
    double max_lower = -std::numeric_limits<double>::infinity();
    double min_upper = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < band.grid.size(); ++g) {
        if (!band.active[g]) continue;
        max_lower = std::max(max_lower, band.lower(g));
        min_upper = std::min(min_upper, band.upper(g));
    }
    return max_lower > min_upper;
}

}  // namespace tvscb
