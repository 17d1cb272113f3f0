#include "tvscb/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvscb/bands.hpp"
#include "tvscb/bandwidth.hpp"
#include "tvscb/covar.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/forecast.hpp"
#include "tvscb/io.hpp"
#include "tvscb/mc.hpp"
#include "tvscb/parallel.hpp"
#include "tvscb/simulate.hpp"

namespace tvscb {

using nlohmann::ordered_json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TVSCB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("TVSCB_SEED must be a non-negative integer");
        }
    }
    return kDefaultSeed;
}

namespace {

struct Common {
    std::string input;
    std::string column;
    bool log_returns = false;
    double scale = 1.0;
    std::string model = "garch";
    std::string orders = "1,1";
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    int grid_size = 101;
    int chunks = 8;
};

ModelSpec make_model(const std::string& family, const std::string& orders) {
    const std::vector<int> o = parse_int_list(orders);
    if (family == "ar") {
        if (o.size() != 1) throw std::invalid_argument("--orders for ar takes one value p");
        return ModelSpec::ar(o[0]);
    }
    if (family == "arch") {
        if (o.size() != 1) throw std::invalid_argument("--orders for arch takes one value q");
        return ModelSpec::arch(o[0]);
    }
    if (family == "garch") {
        if (o.size() != 2) throw std::invalid_argument("--orders for garch takes two values m,l");
        return ModelSpec::garch(o[0], o[1]);
    }
    throw std::invalid_argument("unknown model '" + family + "' (expected ar, arch or garch)");
}

Series load_series(const Common& c) {
    Series s = ingest_csv(c.input, c.log_returns, c.column);
    if (c.scale != 1.0) {
        for (double& x : s.x) x *= c.scale;
        s = Series(std::move(s.x));
    }
    return s;
}

std::uint64_t seed_of(const Common& c) { return c.seed ? *c.seed : default_seed(); }
int threads_of(const Common& c) { return c.threads ? std::max(1, *c.threads) : default_thread_count(); }

FitOptions fit_options(const Common& c) {
    FitOptions fo;
    fo.seed = seed_of(c);
    fo.threads = threads_of(c);
    fo.chunks = c.chunks;
    return fo;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_text(path, content);
    }
}

ordered_json to_json(const VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

ordered_json to_json(const MatrixXd& m) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        a.push_back(row);
    }
    return a;
}

ordered_json model_json(const ModelSpec& m) {
    ordered_json j;
    j["family"] = to_string(m.family);
    j["orders"] = m.family == Family::TvGARCH ? ordered_json::array({m.p, m.l}) : ordered_json::array({m.p});
    j["params"] = m.param_names();
    j["slope_radius"] = m.slope_radius;
    return j;
}

void add_common_io(CLI::App* sub, Common& c, bool needs_model) {
    sub->add_option("--input", c.input, "CSV file with one numeric column (or a header naming --column)")->required();
    sub->add_option("--column", c.column, "column name when the file has several (default x)");
    sub->add_flag("--log-returns", c.log_returns, "treat input as prices and use log returns");
    sub->add_option("--scale", c.scale, "multiply returns by this factor");
    if (needs_model) {
        sub->add_option("--model", c.model, "ar | arch | garch")->check(CLI::IsMember({"ar", "arch", "garch"}));
        sub->add_option("--orders", c.orders, "p (ar), q (arch) or m,l (garch)");
    }
}

// GARCH(1,1) curves outside the Gaussian fourth-moment region still run,
// but I(t) is then not consistently estimated.
void moment_warning(const ParamCurves& curves, std::ostream& err) {
    const ModelSpec& m = curves.model;
    if (m.family != Family::TvGARCH || m.p != 1 || m.l != 1) return;
    const MomentCheck mc = garch4_moment_check(curves);
    if (mc.ok) return;
    err << ordered_json{{"warning", "fourth moment condition violated"}, {"worst_t", mc.worst_t},
                        {"value", mc.value}}
                .dump()
        << '\n';
}

// ---------------------------------------------------------------- simulate
int cmd_simulate(const Common& c, const std::string& design, std::size_t n, std::ostream& out, std::ostream& err) {
    const ParamCurves curves = design_by_name(design);
    moment_warning(curves, err);
    const SimulatedPath p = simulate(curves, n, seed_of(c));
    std::ostringstream os;
    os << "i,t,x,sigma2_true";
    for (const auto& name : curves.model.param_names()) os << ',' << name;
    os << '\n';
    const double nd = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / nd;
        os << i << ',' << format_double(t) << ',' << format_double(p.series.x[i - 1]) << ','
           << format_double(p.sigma2[i - 1]);
        const VectorXd th = curves.at(t);
        for (Eigen::Index j = 0; j < th.size(); ++j) os << ',' << format_double(th(j));
        os << '\n';
    }
    emit(c.output, os.str(), out);
    return 0;
}

// ---------------------------------------------------------------- fit
int cmd_fit(const Common& c, double b, std::ostream& out) {
    const Series s = load_series(c);
    const ModelSpec model = make_model(c.model, c.orders);
    const Kernel k = Kernel::epanechnikov();
    const FitOptions fo = fit_options(c);
    const std::vector<double> grid = default_grid(b, c.grid_size);
    const CurveFit cf = fit_curve(s, b, grid, model, k, fo);
    const SigmaField field = estimate_sigma_field(s, cf, k, joint_contrast(model.dim()), SigmaForm::Sandwich, fo.threads);

    ordered_json j;
    j["schema"] = "tvscb.fit/1";
    j["model"] = model_json(model);
    j["n"] = s.size();
    j["bandwidth"] = b;
    j["kernel"] = k.name();
    j["grid"] = cf.grid;
    ordered_json th = ordered_json::array(), tp = ordered_json::array(), conv = ordered_json::array(),
                 obj = ordered_json::array(), V = ordered_json::array(), I = ordered_json::array(),
                 S = ordered_json::array();
    for (std::size_t g = 0; g < cf.fits.size(); ++g) {
        th.push_back(to_json(cf.fits[g].theta));
        tp.push_back(to_json(cf.fits[g].theta_prime));
        conv.push_back(cf.fits[g].converged);
        obj.push_back(cf.fits[g].objective);
        V.push_back(to_json(field.V[g]));
        I.push_back(to_json(field.I[g]));
        S.push_back(to_json(field.SigmaC[g]));
    }
    j["theta"] = th;
    j["theta_prime"] = tp;
    j["converged"] = conv;
    j["objective"] = obj;
    j["discarded"] = cf.discarded;
    j["covariance"] = {{"V", V}, {"I", I}, {"sigma_joint", S}};
    emit(c.output, j.dump(2) + "\n", out);
    return 0;
}

// ---------------------------------------------------------------- cv
int cmd_cv(const Common& c, const std::string& grid_s, double gamma0, int stride, std::ostream& out,
           std::ostream& err) {
    const Series s = load_series(c);
    const ModelSpec model = make_model(c.model, c.orders);
    CvOptions opt;
    opt.gamma0 = gamma0;
    opt.stride = stride;
    opt.fit = fit_options(c);
    const std::vector<double> grid = grid_s.empty() ? default_bandwidth_grid() : parse_double_list(grid_s);
    const BandwidthSelection sel = select_bandwidth(s, model, grid, Kernel::epanechnikov(), opt);
    std::ostringstream os;
    os << "b,cv\n";
    for (const auto& [b, v] : sel.table) os << format_double(b) << ',' << format_double(v) << '\n';
    emit(c.output, os.str(), out);
    err << "{\"b_cv\": " << format_double(sel.b_cv) << "}\n";
    return 0;
}

// ---------------------------------------------------------------- band
struct BandArgs {
    std::optional<double> bandwidth;
    double alpha = 0.05;
    int boot_reps = 2000;
    std::string method = "boot";
    std::string contrast = "each";
    bool widen = true;
    std::string csv;
};

int cmd_band(const Common& c, const BandArgs& a, std::ostream& out, std::ostream& err) {
    if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw std::invalid_argument("--alpha must lie in (0,1)");
    const Series s = load_series(c);
    const ModelSpec model = make_model(c.model, c.orders);
    const int d = model.dim();
    const Kernel k = Kernel::epanechnikov();
    const FitOptions fo = fit_options(c);
    double b;
    if (a.bandwidth) {
        b = *a.bandwidth;
    } else {
        CvOptions cv;
        cv.fit = fo;
        b = select_bandwidth(s, model, default_bandwidth_grid(), k, cv).b_cv;
        err << "{\"b_cv\": " << format_double(b) << "}\n";
    }
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("--bandwidth must lie in (0,1)");
    const std::vector<double> grid = default_grid(b, c.grid_size);
    const Pipeline p = run_pipeline(s, model, b, grid, k, fo);

    std::vector<std::pair<std::string, MatrixXd>> contrasts;
    const auto names = model.param_names();
    if (a.contrast == "each") {
        for (int j = 0; j < d; ++j) contrasts.emplace_back(names[static_cast<std::size_t>(j)], unit_contrast(d, j));
    } else if (a.contrast == "joint") {
        contrasts.emplace_back("joint", joint_contrast(d));
    } else {
        const auto idx = parse_int_list(a.contrast);
        if (idx.size() != 1) throw std::invalid_argument("--contrast takes each, joint or one index");
        if (idx[0] < 0 || idx[0] >= d) throw std::invalid_argument("--contrast index out of range");
        contrasts.emplace_back(names[static_cast<std::size_t>(idx[0])], unit_contrast(d, idx[0]));
    }

    std::optional<BootstrapQuantile> q1, qd;
    ordered_json bands = ordered_json::array();
    std::ostringstream csv;
    csv << "t,contrast,component,center,lower,upper\n";
    for (const auto& [label, C] : contrasts) {
        const SigmaField f = with_contrast(p.field, C, SigmaForm::Sandwich);
        const int rank = static_cast<int>(C.cols());
        Band band;
        if (a.method == "boot") {
            auto& q = rank == 1 ? q1 : qd;
            if (!q) {
                q = bootstrap_sup_quantile(s.size(), b, k, rank, a.boot_reps, a.alpha,
                                           stream_seed(seed_of(c), rank == 1 ? "band-s1" : "band-joint"), grid,
                                           fo.threads);
            }
            band = build_scb_bootstrap(p.debiased, f, q->u, b, k, a.widen, a.alpha);
        } else if (a.method == "gumbel") {
            band = gumbel_scb(p.debiased, f, s.size(), b, a.alpha, k);
        } else {
            band = pointwise_band(p.debiased.theta, f, s.size(), b, a.alpha, Kernel::jackknife(k));
        }
        ordered_json bj;
        bj["contrast"] = label;
        bj["C"] = to_json(C);
        bj["u"] = band.u;
        ordered_json center = ordered_json::array(), sig = ordered_json::array();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            center.push_back(to_json(band.center[g]));
            sig.push_back(to_json(band.sigma[g]));
        }
        bj["center"] = center;
        bj["radius"] = band.radius;
        bj["scale"] = band.scale;
        bj["active"] = std::vector<bool>(band.active.begin(), band.active.end());
        bj["sigma"] = sig;
        if (rank == 1) {
            std::vector<double> lo(grid.size()), hi(grid.size());
            for (std::size_t g = 0; g < grid.size(); ++g) {
                lo[g] = band.lower(g);
                hi[g] = band.upper(g);
            }
            bj["lower"] = lo;
            bj["upper"] = hi;
            bj["rejects_constancy"] = band_rejects_constancy(band);
        }
        bands.push_back(bj);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (!band.active[g]) continue;
            for (int r = 0; r < rank; ++r) {
                const std::string comp = rank == 1 ? label : names[static_cast<std::size_t>(r)];
                const double cen = band.center[g](r);
                csv << format_double(grid[g]) << ',' << label << ',' << comp << ',' << format_double(cen) << ','
                    << format_double(cen - band.radius[g]) << ',' << format_double(cen + band.radius[g]) << '\n';
            }
        }
    }
    ordered_json j;
    j["schema"] = "tvscb.band/1";
    j["model"] = model_json(model);
    j["n"] = s.size();
    j["bandwidth"] = b;
    j["method"] = to_string(a.method == "boot" ? BandMethod::BootstrapDebias
                            : a.method == "gumbel" ? BandMethod::Gumbel
                                                   : BandMethod::Pointwise);
    j["alpha"] = a.alpha;
    j["boot_reps"] = a.method == "boot" ? a.boot_reps : 0;
    j["widen_boundary"] = a.method == "boot" && a.widen;
    j["grid"] = grid;
    j["bands"] = bands;
    emit(c.output, j.dump(2) + "\n", out);
    if (!a.csv.empty()) write_text(a.csv, csv.str());
    return 0;
}

// ---------------------------------------------------------------- coverage
struct CoverageArgs {
    std::string design = "arch-a";
    std::size_t n = 500;
    std::string bandwidths = "0.5";
    std::string alphas = "0.05";
    int reps = 200;
    int boot_reps = 500;
    std::string method = "boot";
    std::string sigma = "info";
    bool widen = true;
};

int cmd_coverage(const Common& c, const CoverageArgs& a, std::ostream& out, std::ostream& err) {
    const ParamCurves design = design_by_name(a.design);
    moment_warning(design, err);
    std::vector<BandMethod> methods;
    if (a.method == "boot") methods = {BandMethod::BootstrapDebias};
    else if (a.method == "gumbel") methods = {BandMethod::Gumbel};
    else if (a.method == "pointwise") methods = {BandMethod::Pointwise};
    else methods = {BandMethod::BootstrapDebias, BandMethod::Gumbel};
    McOptions mo;
    mo.boot_reps = a.boot_reps;
    mo.widen_boundary = a.widen;
    mo.sigma_form = a.sigma == "info" ? SigmaForm::InverseI : SigmaForm::Sandwich;
    mo.threads = threads_of(c);
    mo.grid_points = c.grid_size;
    mo.fit.seed = seed_of(c);
    const auto reports = coverage_experiment(design, a.design, a.n, parse_double_list(a.bandwidths),
                                             parse_double_list(a.alphas), a.reps, methods, seed_of(c), mo);
    std::ostringstream os;
    os << "design,n,b,alpha,method,reps,effective,discarded";
    for (const auto& l : reports.front().labels) os << ",cov_" << l;
    for (const auto& l : reports.front().labels) os << ",se_" << l;
    os << '\n';
    for (const auto& r : reports) {
        os << r.design << ',' << r.n << ',' << format_double(r.b) << ',' << format_double(r.alpha) << ','
           << to_string(r.method) << ',' << r.reps << ',' << r.effective << ',' << r.discarded;
        for (double v : r.coverage) os << ',' << format_double(v);
        for (double v : r.se) os << ',' << format_double(v);
        os << '\n';
    }
    emit(c.output, os.str(), out);
    return 0;
}

// ---------------------------------------------------------------- forecast
struct ForecastArgs {
    std::size_t start = 500;
    std::string horizons = "25,50";
    std::string m_grid = "100,200,300,400,500";
    int stride = 10;
    std::optional<double> bandwidth;
    double alpha = 0.05;
    int boot_reps = 1000;
    std::string json;
};

int cmd_forecast(const Common& c, const ForecastArgs& a, std::ostream& out) {
    const Series s = load_series(c);
    const ModelSpec model = make_model(c.model, c.orders);
    if (model.family == Family::TvAR) throw std::invalid_argument("forecast supports arch and garch models only");
    AmseOptions opt;
    opt.m_grid = parse_int_list(a.m_grid);
    opt.stride = a.stride;
    opt.fit = fit_options(c);
    std::ostringstream os;
    os << "horizon,amse_tc,amse_tv,best_m,origins\n";
    ordered_json rows = ordered_json::array();
    for (int h : parse_int_list(a.horizons)) {
        const AmseResult tc = amse_h(s, model, a.start, h, ForecastMethod::TimeConstant, opt);
        const AmseResult tv = amse_h(s, model, a.start, h, ForecastMethod::TimeVarying, opt);
        os << h << ',' << format_double(tc.amse) << ',' << format_double(tv.amse) << ',' << tv.best_m << ','
           << tc.points << '\n';
        ordered_json per_m = ordered_json::array();
        for (const auto& [m, v] : tv.per_m) per_m.push_back({{"m", m}, {"amse", v}});
        rows.push_back({{"horizon", h}, {"amse_tc", tc.amse}, {"amse_tv", tv.amse}, {"best_m", tv.best_m},
                        {"origins", tc.points}, {"per_m", per_m}});
    }
    emit(c.output, os.str(), out);
    if (a.json.empty()) return 0;

    ordered_json j;
    j["schema"] = "tvscb.forecast/1";
    j["model"] = model_json(model);
    j["n"] = s.size();
    j["start"] = a.start;
    j["stride"] = a.stride;
    j["amse"] = rows;
    if (a.bandwidth) {
        const double b = *a.bandwidth;
        const Kernel k = Kernel::epanechnikov();
        const FitOptions fo = fit_options(c);
        const std::vector<double> grid = default_grid(b, c.grid_size);
        const Pipeline p = run_pipeline(s, model, b, grid, k, fo);
        const VectorXd tc = global_qmle(s, model, fo).x;
        std::vector<VectorXd> tv(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) tv[g] = p.fit_b.fits[g].theta;
        const double a1_tc = amse1(s, fitted_sigma2_constant(s, model, tc));
        const double a1_tv = amse1(s, fitted_sigma2_curve(s, model, grid, tv));
        const BootstrapQuantile q =
            bootstrap_sup_quantile(s.size(), b, k, 1, a.boot_reps, a.alpha, stream_seed(seed_of(c), "band-s1"), grid,
                                   fo.threads);
        std::vector<Band> bands;
        for (int jc = 0; jc < model.dim(); ++jc) {
            const SigmaField f = with_contrast(p.field, unit_contrast(model.dim(), jc), SigmaForm::Sandwich);
            bands.push_back(build_scb_bootstrap(p.debiased, f, q.u, b, k, true, a.alpha));
        }
        const auto semi = semi_tv_search(s, model, grid, tv, bands);
        ordered_json one;
        one["bandwidth"] = b;
        one["alpha"] = a.alpha;
        one["tc"] = a1_tc;
        one["tv"] = a1_tv;
        if (semi) {
            std::vector<std::string> names;
            for (int idx : semi->constant_components) names.push_back(model.param_names()[static_cast<std::size_t>(idx)]);
            one["semi_tv"] = {{"constant", names}, {"values", semi->constants}, {"amse1", semi->amse1}};
        } else {
            one["semi_tv"] = nullptr;
        }
        j["amse1"] = one;
    }
    write_text(a.json, j.dump(2) + "\n");
    return 0;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& msg) {
    ordered_json e;
    e["error"] = kind;
    e["message"] = msg;
    err << e.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-varying ARCH/GARCH/AR estimation with simultaneous confidence bands", "tvscb"};
    app.require_subcommand(1);
    Common c;
    std::uint64_t seed_v = 0;
    int threads_v = 0;
    auto add_global = [&](CLI::App* sub) {
        sub->add_option("--output,-o", c.output, "output file (default stdout)");
        sub->add_option("--seed", seed_v, "random seed (default $TVSCB_SEED or 20240611)");
        sub->add_option("--threads", threads_v, "worker threads (default $TVSCB_THREADS or all cores)");
        sub->add_option("--grid-size", c.grid_size, "minimum number of grid points");
    };

    auto* sim = app.add_subcommand("simulate", "simulate a named design to CSV");
    std::string design = "arch-a";
    std::size_t n_sim = 1000;
    sim->add_option("--design", design, "arch-a | garch-b | garch-boot | arch-const | arch-tv");
    sim->add_option("--n", n_sim, "sample size")->check(CLI::PositiveNumber);
    add_global(sim);

    auto* fit = app.add_subcommand("fit", "local linear fit on a grid");
    double b_fit = 0.3;
    add_common_io(fit, c, true);
    fit->add_option("--bandwidth", b_fit, "bandwidth b in (0,1]")->required();
    add_global(fit);

    auto* cv = app.add_subcommand("cv", "cross-validation bandwidth selection");
    std::string cv_grid;
    double gamma0 = 0.1;
    int stride = 5;
    add_common_io(cv, c, true);
    cv->add_option("--grid", cv_grid, "comma-separated bandwidths (default 14 geometric points in [0.05, 0.7])");
    cv->add_option("--gamma0", gamma0, "boundary trim");
    cv->add_option("--stride", stride, "evaluate every stride-th point (1 = literal)");
    add_global(cv);

    auto* band = app.add_subcommand("band", "simultaneous or pointwise confidence bands");
    BandArgs ba;
    double b_band = 0.0;
    add_common_io(band, c, true);
    band->add_option("--bandwidth", b_band, "bandwidth (default: cross-validated)");
    band->add_option("--alpha", ba.alpha, "significance level");
    band->add_option("--boot-reps", ba.boot_reps, "bootstrap replicates")->check(CLI::Range(100, 1000000));
    band->add_option("--method", ba.method, "boot | gumbel | pointwise")->check(CLI::IsMember({"boot", "gumbel", "pointwise"}));
    band->add_option("--contrast", ba.contrast, "each | joint | component index");
    band->add_flag("--widen-boundary,!--no-widen-boundary", ba.widen, "divide radii by the boundary factor");
    band->add_option("--csv", ba.csv, "tidy CSV for plotting");
    add_global(band);

    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the bands");
    CoverageArgs ca;
    cov->add_option("--design", ca.design, "arch-a | garch-b | garch-boot | arch-const | arch-tv");
    cov->add_option("--n", ca.n, "sample size")->check(CLI::PositiveNumber);
    cov->add_option("--bandwidths", ca.bandwidths, "comma-separated bandwidths");
    cov->add_option("--alphas", ca.alphas, "comma-separated significance levels");
    cov->add_option("--reps", ca.reps, "Monte Carlo replicates")->check(CLI::PositiveNumber);
    cov->add_option("--boot-reps", ca.boot_reps, "bootstrap replicates per replicate")->check(CLI::Range(100, 1000000));
    cov->add_option("--method", ca.method, "boot | gumbel | pointwise | both")
        ->check(CLI::IsMember({"boot", "gumbel", "pointwise", "both"}));
    cov->add_option("--sigma", ca.sigma, "info (C^T I^-1 C) | sandwich")->check(CLI::IsMember({"info", "sandwich"}));
    cov->add_flag("--widen-boundary,!--no-widen-boundary", ca.widen, "divide radii by the boundary factor");
    add_global(cov);

    auto* fc = app.add_subcommand("forecast", "volatility forecast evaluation");
    ForecastArgs fa;
    double b_fc = 0.0;
    add_common_io(fc, c, true);
    fc->add_option("--start", fa.start, "first forecast origin s");
    fc->add_option("--horizons", fa.horizons, "comma-separated horizons");
    fc->add_option("--m-grid", fa.m_grid, "comma-separated trailing window lengths");
    fc->add_option("--stride", fa.stride, "refit every stride-th origin (1 = literal)");
    fc->add_option("--bandwidth", b_fc, "also report AMSE1 for TC, TV and semi-TV fits");
    fc->add_option("--alpha", fa.alpha, "significance level of the semi-TV bands");
    fc->add_option("--boot-reps", fa.boot_reps, "bootstrap replicates for the semi-TV bands");
    fc->add_option("--json", fa.json, "JSON report path");
    add_global(fc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", e.what());
        err << app.help();
        return 2;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            if (sub->count("--seed") > 0) c.seed = seed_v;
            if (sub->count("--threads") > 0) c.threads = threads_v;
        }
        if (app.got_subcommand(sim)) return cmd_simulate(c, design, n_sim, out, err);
        if (app.got_subcommand(fit)) return cmd_fit(c, b_fit, out);
        if (app.got_subcommand(cv)) return cmd_cv(c, cv_grid, gamma0, stride, out, err);
        if (app.got_subcommand(band)) {
            if (band->count("--bandwidth") > 0) ba.bandwidth = b_band;
            return cmd_band(c, ba, out, err);
        }
        if (app.got_subcommand(cov)) return cmd_coverage(c, ca, out, err);
        if (app.got_subcommand(fc)) {
            if (fc->count("--bandwidth") > 0) fa.bandwidth = b_fc;
            return cmd_forecast(c, fa, out);
        }
    } catch (const std::invalid_argument& e) {
        error_line(err, "usage", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        error_line(err, "usage", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_line(err, "numeric", e.what());
        return 1;
    }
    error_line(err, "usage", "no subcommand");
    return 2;
}

}  // namespace tvscb
