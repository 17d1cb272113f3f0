#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvscb/covar.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/kernel.hpp"

namespace tvscb {

enum class BandMethod { BootstrapDebias, Gumbel, Pointwise };

std::string to_string(BandMethod m);

/// Band for theta_C(t) = C^T theta(t) on a grid.
///
/// Membership at t: |Sigma(t)^-1 (x - center(t))| <= scale(t). For s = 1
/// this is the interval center +- radius with radius = Sigma * scale; for
/// s > 1 radius is the spectral-norm bound of the ellipsoid.
struct Band {
    std::vector<double> grid;
    std::vector<VectorXd> center;
    std::vector<MatrixXd> sigma;
    std::vector<double> scale;
    std::vector<double> radius;
    std::vector<char> active;  ///< grid points the band is defined on
    double alpha = 0.05;
    double u = 0.0;
    BandMethod method = BandMethod::BootstrapDebias;

    int rank() const { return center.empty() ? 0 : static_cast<int>(center.front().size()); }
    /// Lower/upper ends for an s = 1 band.
    double lower(std::size_t g) const { return center[g](0) - radius[g]; }
    double upper(std::size_t g) const { return center[g](0) + radius[g]; }
    bool contains(std::size_t g, const VectorXd& value_C) const;
    /// True iff every active grid point contains the given values.
    bool covers(const std::vector<VectorXd>& values_C) const;
};

struct BootstrapQuantile {
    double u = 0.0;
    std::vector<double> draws;  ///< sorted sup statistics
};

/// G x n matrix A with W^{debias}(t_g) = sum_i A(g, i) V_i.
MatrixXd debias_weights(std::size_t n, double b, const Kernel& k, const std::vector<double>& grid);

/// Boundary divisor max(N^{(0)}_b(t) N^{(0)}_{b/sqrt2}(t), 0.05).
double boundary_divisor(const Kernel& k, double b, double t);

/// u = q_{floor((1-alpha) N)} of the sup_t |W^{debias}(t)| draws.
BootstrapQuantile bootstrap_sup_quantile(std::size_t n, double b, const Kernel& k, int s, int N,
                                         double alpha, std::uint64_t seed,
                                         const std::vector<double>& grid, int threads = 1);

/// Order statistic rule shared by all quantile users.
double empirical_quantile(const std::vector<double>& sorted, double alpha);

/// Center C^T theta~(t), radius |Sigma_C(t)| u, optionally widened by the
/// boundary divisor (which is 1 on [b, 1-b]).
Band build_scb_bootstrap(const DebiasedCurve& debiased, const SigmaField& sigma, double u,
                         double b, const Kernel& k, bool widen_boundary, double alpha);

/// u_alpha = -log(-log(1 - alpha)/2).
double gumbel_quantile(double alpha);

/// Extreme-value band on T_n = [b, 1-b] for the jackknife estimate, using
/// the fourth-order kernel built from `k`.
Band gumbel_scb(const DebiasedCurve& debiased, const SigmaField& sigma, std::size_t n, double b,
                double alpha, const Kernel& k);

/// z_{1-alpha/2} sigma_{K,0} Sigma_C(t) / sqrt(nb). Pass the jackknife kernel
/// when the center is the jackknife estimate.
Band pointwise_band(const std::vector<VectorXd>& theta, const SigmaField& sigma, std::size_t n,
                    double b, double alpha, const Kernel& k);

/// True iff no horizontal line fits inside an s = 1 band.
bool band_rejects_constancy(const Band& band);

}  // namespace tvscb
