#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tvscb/kernel.hpp"
#include "tvscb/loss.hpp"
#include "tvscb/model.hpp"
#include "tvscb/optimize.hpp"

namespace tvscb {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Raised when too many grid points fail to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitOptions {
    OptOptions opt;
    int restarts = 3;
    std::uint64_t seed = kDefaultSeed;
    bool freeze_slope = false;  ///< fix theta' = 0 (local constant fit)
    int threads = 1;
    /// fit_curve splits the grid into this many contiguous chunks, each
    /// warm-started from the global fit. Fixed, so results do not depend on
    /// the thread count.
    int chunks = 1;
    double max_fail_fraction = 0.2;
};

struct LocalFit {
    double t = 0.0;
    VectorXd theta;
    VectorXd theta_prime;
    bool converged = false;
    double objective = 0.0;
    int iterations = 0;
};

using WarmStart = std::pair<VectorXd, VectorXd>;

LocalFit fit_local(const Series& s, double t, double b, const ModelSpec& model, const Kernel& k,
                   const std::optional<WarmStart>& warm = std::nullopt, const FitOptions& fo = {},
                   std::optional<std::size_t> leave_out = std::nullopt);

struct CurveFit {
    ModelSpec model;
    double bandwidth = 0.0;
    std::vector<double> grid;
    std::vector<LocalFit> fits;
    int discarded = 0;
};

/// G = max(101, ceil(3/b)) points k/(G+1), k = 1..G.
std::vector<double> default_grid(double b, int min_points = 101);

/// Fits every grid point, warm-starting each from its predecessor. Throws
/// ConvergenceError if more than max_fail_fraction of the points fail.
CurveFit fit_curve(const Series& s, double b, const std::vector<double>& grid, const ModelSpec& model,
                   const Kernel& k, const FitOptions& fo = {});

/// Constant-parameter QMLE over the whole series (1/n) sum l(Z_i^c, theta).
/// GARCH uses the O(n) path recursion.
OptResult global_qmle(const Series& s, const ModelSpec& model, const FitOptions& fo = {},
                      const std::optional<VectorXd>& start = std::nullopt);

/// Moment-based starting value for global_qmle.
VectorXd initial_guess(const Series& s, const ModelSpec& model);

struct DebiasedCurve {
    std::vector<double> grid;
    std::vector<VectorXd> theta;
    std::vector<char> valid;  ///< both input fits converged
};

/// 2 theta_{b/sqrt2}(t) - theta_b(t). Throws on grid mismatch.
DebiasedCurve jackknife_debias(const CurveFit& fit_b, const CurveFit& fit_b_sqrt2);

}  // namespace tvscb
