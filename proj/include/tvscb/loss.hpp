#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tvscb/kernel.hpp"
#include "tvscb/model.hpp"

namespace tvscb {

/// Derivative order requested from a loss evaluation.
enum class Order { Value = 0, Gradient = 1, Hessian = 2 };

struct LossEval {
    double value = 0.0;
    VectorXd grad;  ///< empty unless requested
    MatrixXd hess;  ///< empty unless requested
};

/// Volatility loss 1/2 (y / s2 + log s2) given s2 and its parameter
/// derivatives. ARCH and GARCH both go through here so that a GARCH model
/// with beta = 0 reproduces ARCH exactly.
LossEval volatility_loss(double y, double s2, const VectorXd& ds2, const MatrixXd* d2s2, Order order);

/// ARCH(q): s2 = alpha_0 + sum alpha_j lags_j. Throws std::domain_error if s2 < kAlphaMin.
LossEval arch_loss(double y, const VectorXd& lags, const VectorXd& theta, Order order = Order::Hessian);

/// AR(p) with innovation variance beta_0 = theta(p).
LossEval tvar_loss(double x, const VectorXd& lags, const VectorXd& theta, Order order = Order::Hessian);

/// GARCH recursion over a whole series at a fixed parameter.
struct GarchState {
    std::vector<double> sigma2;       ///< sigma^2_1 .. sigma^2_n
    MatrixXd dsigma2;                 ///< d x n, column i-1 holds d sigma^2_i / d theta
    std::vector<MatrixXd> d2sigma2;   ///< per i, d x d (only with Order::Hessian)
};

/// sigma^2_i = alpha_0 + sum alpha_j y_{i-j} + sum beta_j sigma^2_{i-j}; y with
/// index <= 0 is 0 and pre-sample sigma^2 is alpha_0 (derivative e_0).
GarchState garch_sigma2_path(const std::vector<double>& y, int m, int l, const VectorXd& theta,
                             Order order = Order::Gradient);

/// Loss at 1-based index i from a precomputed path.
LossEval garch_loss(std::size_t i, const GarchState& state, double y_i, Order order = Order::Gradient);

/// Recursion depth after which beta-weighted memory falls below 1e-13.
/// Returns SIZE_MAX when the beta sum is >= 1.
std::size_t garch_memory_depth(const VectorXd& theta, int m, int l);

/// l(Z_i^c, theta) at 1-based index i, for any family. For GARCH the
/// truncated past is run through the recursion at `theta` itself.
LossEval observation_loss(const Series& s, const ModelSpec& model, std::size_t i,
                          const VectorXd& theta, Order order = Order::Hessian);

/// sigma^2(Z_i^c, theta) for ARCH/GARCH, beta_0 for AR.
double conditional_variance(const Series& s, const ModelSpec& model, std::size_t i, const VectorXd& theta);

/// Observation indices i (1-based) with K((i/n - t)/b) > 0.
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;  ///< inclusive; first > last means empty
};
Window kernel_window(std::size_t n, double t, double b, const Kernel& k);

inline constexpr double kBoxPenalty = 1e6;

/// Local linear objective (nb)^-1 sum K((i/n - t)/b) l(Z_i^c, theta + theta'(i/n - t)).
/// Gradient and Hessian are with respect to the stacked vector (theta, theta').
/// Out-of-box line evaluations are clamped and charged kBoxPenalty * dist^2
/// (times the kernel weight). Throws std::invalid_argument on an empty window.
LossEval local_objective(const Series& s, const ModelSpec& model, const Kernel& k, double t,
                         double b, const VectorXd& theta, const VectorXd& theta_prime,
                         Order order = Order::Value,
                         std::optional<std::size_t> leave_out = std::nullopt);

}  // namespace tvscb
