#include "tvscb/mc.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "tvscb/parallel.hpp"
#include "tvscb/simulate.hpp"

namespace tvscb {

Pipeline run_pipeline(const Series& s, const ModelSpec& model, double b, const std::vector<double>& grid,
                      const Kernel& k, const FitOptions& fo) {
    Pipeline p;
    p.fit_b = fit_curve(s, b, grid, model, k, fo);
    p.fit_b2 = fit_curve(s, b / std::sqrt(2.0), grid, model, k, fo);
    p.debiased = jackknife_debias(p.fit_b, p.fit_b2);
    const std::size_t G = grid.size();
    p.field.grid = grid;
    p.field.V.resize(G);
    p.field.I.resize(G);
    parallel_for(G, fo.threads, [&](std::size_t g) {
        const VIPair vi = estimate_VI(s, model, p.fit_b.fits[g], b, k);
        p.field.V[g] = vi.V;
        p.field.I[g] = vi.I;
    });
    return p;
}

namespace {

// Per replicate and b: one indicator per (alpha, method, contrast), or
// nullopt when the replicate is discarded.
using Indicators = std::vector<char>;

std::size_t slot(std::size_t a, std::size_t m, std::size_t c, std::size_t nm, std::size_t nc) {
    return (a * nm + m) * nc + c;
}

std::optional<Indicators> run_replicate(const ParamCurves& design, std::size_t n, double b,
                                        const std::vector<double>& alphas, const std::vector<BandMethod>& methods,
                                        std::uint64_t rep_seed, const McOptions& opt) {
    const ModelSpec& model = design.model;
    const int d = model.dim();
    const Kernel k = Kernel::epanechnikov();
    const Series s = simulate(design, n, stream_seed(rep_seed, "simulate-path")).series;
    const std::vector<double> grid = default_grid(b, opt.grid_points);
    FitOptions fo = opt.fit;
    fo.threads = 1;
    fo.seed = rep_seed;

    Pipeline p;
    try {
        p = run_pipeline(s, model, b, grid, k, fo);
    } catch (const ConvergenceError&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    if (p.fit_b.discarded > 0 || p.fit_b2.discarded > 0) return std::nullopt;

    // contrasts: e_0 .. e_{d-1}, then the identity
    const std::size_t nc = static_cast<std::size_t>(d) + 1;
    std::vector<SigmaField> fields(nc);
    try {
        for (int j = 0; j < d; ++j) fields[static_cast<std::size_t>(j)] = with_contrast(p.field, unit_contrast(d, j), opt.sigma_form);
        fields[static_cast<std::size_t>(d)] = with_contrast(p.field, joint_contrast(d), opt.sigma_form);
    } catch (const SingularMatrixError&) {
        return std::nullopt;
    }

    std::vector<VectorXd> truth(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) truth[g] = design.at(grid[g]);

    const std::size_t nm = methods.size();
    Indicators out(alphas.size() * nm * nc, 0);
    std::optional<BootstrapQuantile> boot1, bootd;
    for (std::size_t m = 0; m < nm; ++m) {
        if (methods[m] == BandMethod::BootstrapDebias && !boot1) {
            // the largest alpha is irrelevant here; only the sorted draws are kept
            boot1 = bootstrap_sup_quantile(n, b, k, 1, opt.boot_reps, 0.5, stream_seed(rep_seed, "boot-s1"), grid, 1);
            bootd = bootstrap_sup_quantile(n, b, k, d, opt.boot_reps, 0.5, stream_seed(rep_seed, "boot-joint"), grid, 1);
        }
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (std::size_t m = 0; m < nm; ++m) {
            for (std::size_t c = 0; c < nc; ++c) {
                const SigmaField& f = fields[c];
                Band band;
                if (methods[m] == BandMethod::BootstrapDebias) {
                    const auto& draws = c + 1 == nc ? bootd->draws : boot1->draws;
                    band = build_scb_bootstrap(p.debiased, f, empirical_quantile(draws, alphas[a]), b, k,
                                               opt.widen_boundary, alphas[a]);
                } else if (methods[m] == BandMethod::Gumbel) {
                    band = gumbel_scb(p.debiased, f, n, b, alphas[a], k);
                } else {
                    band = pointwise_band(p.debiased.theta, f, n, b, alphas[a], Kernel::jackknife(k));
                }
                std::vector<VectorXd> tc(grid.size());
                for (std::size_t g = 0; g < grid.size(); ++g) tc[g] = f.C.transpose() * truth[g];
                out[slot(a, m, c, nm, nc)] = band.covers(tc) ? 1 : 0;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<CoverageReport> coverage_experiment(const ParamCurves& design, const std::string& design_name,
                                                std::size_t n, const std::vector<double>& b_list,
                                                const std::vector<double>& alpha_list, int reps,
                                                const std::vector<BandMethod>& methods, std::uint64_t seed,
                                                const McOptions& opt) {
    if (reps < 1) throw std::invalid_argument("coverage: reps must be >= 1");
    if (b_list.empty() || alpha_list.empty() || methods.empty()) {
        throw std::invalid_argument("coverage: need at least one bandwidth, alpha and method");
    }
    for (double a : alpha_list) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    }
    design.validate();
    const int d = design.model.dim();
    const std::size_t nc = static_cast<std::size_t>(d) + 1;
    const std::size_t nm = methods.size();
    std::vector<std::string> labels = design.model.param_names();
    labels.push_back("joint");

    std::vector<CoverageReport> reports;
    for (double b : b_list) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::optional<Indicators>> res(static_cast<std::size_t>(reps));
        parallel_for(static_cast<std::size_t>(reps), opt.threads, [&](std::size_t r) {
            res[r] = run_replicate(design, n, b, alpha_list, methods, stream_seed(seed, "replicate", r), opt);
        });
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        int eff = 0;
        for (const auto& r : res) eff += r ? 1 : 0;
        const int disc = reps - eff;
        if (2 * disc > reps) {
            throw ConvergenceError("coverage: " + std::to_string(disc) + " of " + std::to_string(reps) +
                                   " replicates discarded at b=" + std::to_string(b));
        }
        for (std::size_t a = 0; a < alpha_list.size(); ++a) {
            for (std::size_t m = 0; m < nm; ++m) {
                CoverageReport rep;
                rep.design = design_name;
                rep.n = n;
                rep.b = b;
                rep.alpha = alpha_list[a];
                rep.method = methods[m];
                rep.reps = reps;
                rep.effective = eff;
                rep.discarded = disc;
                rep.labels = labels;
                rep.wall_seconds = wall;
                for (std::size_t c = 0; c < nc; ++c) {
                    int hits = 0;
                    for (const auto& r : res) {
                        if (r) hits += (*r)[slot(a, m, c, nm, nc)];
                    }
                    const double p = eff > 0 ? static_cast<double>(hits) / eff : 0.0;
                    rep.coverage.push_back(p);
                    rep.se.push_back(eff > 0 ? std::sqrt(p * (1.0 - p) / eff) : 0.0);
                }
                reports.push_back(std::move(rep));
            }
        }
    }
    return reports;
}

PairedReport compare_gumbel_bootstrap(const ParamCurves& design, const std::string& design_name, std::size_t n,
                                      double b, double alpha, int reps, std::uint64_t seed, const McOptions& opt) {
    const auto r = coverage_experiment(design, design_name, n, {b}, {alpha}, reps,
                                       {BandMethod::BootstrapDebias, BandMethod::Gumbel}, seed, opt);
    return {r[0], r[1]};
}

ConstancyReport constancy_experiment(const ParamCurves& design, std::size_t n, double b, double alpha, int reps,
                                     int component, std::uint64_t seed, const McOptions& opt) {
    const ModelSpec& model = design.model;
    const int d = model.dim();
    if (component < 0 || component >= d) throw std::invalid_argument("constancy: component out of range");
    design.validate();
    std::vector<int> verdict(static_cast<std::size_t>(reps), -1);
    parallel_for(static_cast<std::size_t>(reps), opt.threads, [&](std::size_t r) {
        const std::uint64_t rs = stream_seed(seed, "replicate", r);
        const Kernel k = Kernel::epanechnikov();
        const Series s = simulate(design, n, stream_seed(rs, "simulate-path")).series;
        const std::vector<double> grid = default_grid(b, opt.grid_points);
        FitOptions fo = opt.fit;
        fo.threads = 1;
        fo.seed = rs;
        try {
            const Pipeline p = run_pipeline(s, model, b, grid, k, fo);
            if (p.fit_b.discarded > 0 || p.fit_b2.discarded > 0) return;
            const SigmaField f = with_contrast(p.field, unit_contrast(d, component), opt.sigma_form);
            const BootstrapQuantile q =
                bootstrap_sup_quantile(n, b, k, 1, opt.boot_reps, alpha, stream_seed(rs, "boot-s1"), grid, 1);
            const Band band = build_scb_bootstrap(p.debiased, f, q.u, b, k, opt.widen_boundary, alpha);
            verdict[r] = band_rejects_constancy(band) ? 1 : 0;
        } catch (const ConvergenceError&) {
        } catch (const SingularMatrixError&) {
        }
    });
    ConstancyReport out;
    out.reps = reps;
    for (int v : verdict) {
        if (v < 0) continue;
        ++out.effective;
        out.rejected += v;
    }
    out.rate = out.effective > 0 ? static_cast<double>(out.rejected) / out.effective : 0.0;
    return out;
}

}  // namespace tvscb
