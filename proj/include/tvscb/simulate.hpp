#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "tvscb/model.hpp"

namespace tvscb {

/// Draws one unit-variance innovation. Defaults to standard normal.
using InnovationFn = std::function<double(std::mt19937_64&)>;

struct SimulatedPath {
    Series series;
    std::vector<double> sigma2;  ///< true conditional variance (AR: beta_0(i/n))
};

SimulatedPath simulate_tvarch(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                              const InnovationFn& innov = {});
SimulatedPath simulate_tvgarch(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                               const InnovationFn& innov = {});
SimulatedPath simulate_tvar(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                            const InnovationFn& innov = {});
/// Dispatches on curves.model.family.
SimulatedPath simulate(const ParamCurves& curves, std::size_t n, std::uint64_t seed,
                       const InnovationFn& innov = {});

struct MomentCheck {
    bool ok;
    double worst_t;
    double value;
};

/// beta_1^2 + 2 alpha_1 beta_1 + 3 alpha_1^2 < 1 on a 1001-point grid
/// (Gaussian fourth moment region of GARCH(1,1)).
MomentCheck garch4_moment_check(const ParamCurves& curves);

/// Named simulation designs used by the harness and the CLI.
ParamCurves design_arch_a();        ///< alpha_0 = 0.8 + 0.3 cos(pi t), alpha_1 = 0.45 + 0.1 cos(pi t)
ParamCurves design_garch_b();       ///< 2.4 + 0.02 cos, 0.4 + 0.1 cos, 0.5 - 0.1 cos
ParamCurves design_garch_boot();    ///< 1 + 0.2 sin(2 pi t), 0.45 + 0.1 sin(pi t), 0.1 + 0.1 sin(pi t)
ParamCurves design_by_name(const std::string& name);

}  // namespace tvscb
