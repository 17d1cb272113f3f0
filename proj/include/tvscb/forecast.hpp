#pragma once

#include <optional>
#include <vector>

#include "tvscb/bands.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/model.hpp"

namespace tvscb {

/// Iterated forecasts sigma^2_{t+j|t}, j = 1..h, from history ending at t.
/// Future y are replaced by their forecasts. `sigma2_hist` is only read for
/// GARCH and must be aligned with `y_hist`.
std::vector<double> forecast_sigma2(const ModelSpec& model, const VectorXd& params,
                                    const std::vector<double>& y_hist,
                                    const std::vector<double>& sigma2_hist, int h);

enum class ForecastMethod { TimeConstant, TimeVarying };

struct AmseOptions {
    std::vector<int> m_grid{100, 200, 300, 400, 500};
    int stride = 10;
    FitOptions fit;
};

struct AmseResult {
    double amse = 0.0;
    int best_m = 0;                             ///< TV only
    std::vector<std::pair<int, double>> per_m;  ///< TV only
    int points = 0;                             ///< forecast origins used
};

/// Mean over t = s+1, s+1+stride, ..., <= n-h of (mean_j sigma^2_{t+j|t} - mean_j y_{t+j})^2.
/// TC fits a constant QMLE on y_1..t, TV on the last m points (min over m_grid).
AmseResult amse_h(const Series& s, const ModelSpec& model, std::size_t start, int h, ForecastMethod method,
                  const AmseOptions& opt = {});

/// (1/n) sum (y_i - sigma2_i)^2.
double amse1(const Series& s, const std::vector<double>& fitted_sigma2);

/// sigma^2 at each i from the constant parameter.
std::vector<double> fitted_sigma2_constant(const Series& s, const ModelSpec& model, const VectorXd& theta);

/// sigma^2 at each i from theta(i/n), linearly interpolated from the grid.
std::vector<double> fitted_sigma2_curve(const Series& s, const ModelSpec& model, const std::vector<double>& grid,
                                        const std::vector<VectorXd>& theta);

struct SemiTvResult {
    std::vector<int> constant_components;  ///< empty: fully time-varying
    std::vector<double> constants;
    double amse1 = 0.0;
};

/// Holds every component whose band admits a horizontal line at a constant
/// chosen by a 21-point grid search inside [max lower, min upper], keeping
/// the others at theta(t). Returns nullopt when no band admits a line.
std::optional<SemiTvResult> semi_tv_search(const Series& s, const ModelSpec& model, const std::vector<double>& grid,
                                           const std::vector<VectorXd>& theta, const std::vector<Band>& bands);

}  // namespace tvscb
