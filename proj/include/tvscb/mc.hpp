#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvscb/bands.hpp"
#include "tvscb/covar.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/model.hpp"

namespace tvscb {

/// Fits at b and b/sqrt2, the jackknife curve and V, I from the b fit.
struct Pipeline {
    CurveFit fit_b;
    CurveFit fit_b2;
    DebiasedCurve debiased;
    SigmaField field;  ///< V and I only; use with_contrast for Sigma_C
};

Pipeline run_pipeline(const Series& s, const ModelSpec& model, double b, const std::vector<double>& grid,
                      const Kernel& k, const FitOptions& fo);

struct McOptions {
    int boot_reps = 500;
    bool widen_boundary = true;
    /// Gaussian designs have V = I, so the harness uses C^T I^-1 C.
    SigmaForm sigma_form = SigmaForm::InverseI;
    int threads = 1;
    int grid_points = 101;
    FitOptions fit;
};

struct CoverageReport {
    std::string design;
    std::size_t n = 0;
    double b = 0.0;
    double alpha = 0.0;
    BandMethod method = BandMethod::BootstrapDebias;
    int reps = 0;
    int effective = 0;
    int discarded = 0;
    std::vector<std::string> labels;  ///< component names then "joint"
    std::vector<double> coverage;
    std::vector<double> se;
    double wall_seconds = 0.0;        ///< not part of any serialized output
};

/// One report per (b, alpha, method). Replicate r simulates from the seed
/// stream ("replicate", r); replicates are shared across b, alpha and method.
std::vector<CoverageReport> coverage_experiment(const ParamCurves& design, const std::string& design_name,
                                                std::size_t n, const std::vector<double>& b_list,
                                                const std::vector<double>& alpha_list, int reps,
                                                const std::vector<BandMethod>& methods, std::uint64_t seed,
                                                const McOptions& opt = {});

struct PairedReport {
    CoverageReport bootstrap;
    CoverageReport gumbel;
};

PairedReport compare_gumbel_bootstrap(const ParamCurves& design, const std::string& design_name, std::size_t n,
                                      double b, double alpha, int reps, std::uint64_t seed,
                                      const McOptions& opt = {});

struct ConstancyReport {
    int reps = 0;
    int effective = 0;
    int rejected = 0;
    double rate = 0.0;
};

/// Fraction of replicates whose componentwise bootstrap band for `component`
/// rejects constancy.
ConstancyReport constancy_experiment(const ParamCurves& design, std::size_t n, double b, double alpha, int reps,
                                     int component, std::uint64_t seed, const McOptions& opt = {});

}  // namespace tvscb
