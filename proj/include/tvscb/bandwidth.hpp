#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tvscb/fit.hpp"
#include "tvscb/kernel.hpp"
#include "tvscb/model.hpp"

namespace tvscb {

struct CvOptions {
    double gamma0 = 0.1;
    int stride = 5;  ///< evaluate every stride-th i; 1 is the literal criterion
    FitOptions fit;
};

/// CV(b) = n^-1 sum_i l(Z_i^c, theta_{b,-i}(i/n)) 1{gamma0 <= i/n <= 1-gamma0}.
/// With stride > 1 the sum runs over every stride-th i and is scaled by stride.
double cv_objective(const Series& s, double b, const ModelSpec& model, const Kernel& k,
                    const CvOptions& opt = {});

struct BandwidthSelection {
    double b_cv = 0.0;
    std::vector<std::pair<double, double>> table;  ///< (b, CV(b)) sorted by b
};

/// Argmin of CV over b_grid, ties to the smaller b.
BandwidthSelection select_bandwidth(const Series& s, const ModelSpec& model, const std::vector<double>& b_grid,
                                    const Kernel& k, const CvOptions& opt = {});

/// 14 geometric points from 0.05 to 0.7.
std::vector<double> default_bandwidth_grid();

struct StationaryMoments {
    MatrixXd V;
    MatrixXd I;
};

/// E grad^2 l and E grad l grad l^T at theta for the stationary model with
/// frozen parameter theta, by a long simulation.
StationaryMoments stationary_moments(const ModelSpec& model, const VectorXd& theta, std::size_t draws,
                                     std::uint64_t seed);

struct OracleOptions {
    std::size_t mc_draws = 100000;
    int points = 201;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

/// n^{-1/5} (sigma^2_{K,0} int tr(V^-1 I V^-1) / (mu_{K,2}^2 int |theta''|^2))^{1/5}.
/// Throws std::domain_error when theta'' vanishes identically.
double oracle_bandwidth(const ParamCurves& truth, std::size_t n, const Kernel& k,
                        const OracleOptions& opt = {});

}  // namespace tvscb
