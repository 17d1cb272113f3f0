#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tvscb/bands.hpp"
#include "tvscb/bandwidth.hpp"
#include "tvscb/covar.hpp"
#include "tvscb/fit.hpp"
#include "tvscb/forecast.hpp"
#include "tvscb/io.hpp"
#include "tvscb/kernel.hpp"
#include "tvscb/simulate.hpp"

namespace py = pybind11;
using namespace tvscb;

namespace {

ModelSpec make_model(const std::string& family, const std::vector<int>& orders) {
    auto order = [&](std::size_t i, int dflt) { return i < orders.size() ? orders[i] : dflt; };
    if (family == "ar") return ModelSpec::ar(order(0, 1));
    if (family == "arch") return ModelSpec::arch(order(0, 1));
    if (family == "garch") return ModelSpec::garch(order(0, 1), order(1, 1));
    throw std::invalid_argument("model must be ar, arch or garch");
}

Eigen::MatrixXd stack(const std::vector<VectorXd>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
    for (std::size_t g = 0; g < rows.size(); ++g) m.row(static_cast<Eigen::Index>(g)) = rows[g].transpose();
    return m;
}

FitOptions fit_options(int threads, std::uint64_t seed) {
    FitOptions fo;
    fo.threads = threads;
    fo.chunks = 8;
    fo.seed = seed;
    return fo;
}

py::dict py_simulate(const std::string& design, std::size_t n, std::uint64_t seed) {
    const ParamCurves c = design_by_name(design);
    SimulatedPath p;
    {
        py::gil_scoped_release nogil;
        p = simulate(c, n, seed);
    }
    std::vector<VectorXd> truth;
    for (std::size_t i = 1; i <= n; ++i) truth.push_back(c.at(static_cast<double>(i) / static_cast<double>(n)));
    py::dict out;
    out["x"] = p.series.x;
    out["sigma2"] = p.sigma2;
    out["theta"] = stack(truth);
    out["names"] = c.model.param_names();
    return out;
}

py::dict py_fit(const std::vector<double>& x, double bandwidth, const std::string& model,
                const std::vector<int>& orders, int grid_size, int threads, std::uint64_t seed) {
    const ModelSpec m = make_model(model, orders);
    const Series s(x);
    CurveFit f;
    {
        py::gil_scoped_release nogil;
        f = fit_curve(s, bandwidth, default_grid(bandwidth, grid_size), m, Kernel::epanechnikov(),
                      fit_options(threads, seed));
    }
    std::vector<VectorXd> th, tp;
    std::vector<bool> conv;
    for (const auto& lf : f.fits) {
        th.push_back(lf.theta);
        tp.push_back(lf.theta_prime);
        conv.push_back(lf.converged);
    }
    py::dict out;
    out["grid"] = f.grid;
    out["theta"] = stack(th);
    out["theta_prime"] = stack(tp);
    out["converged"] = conv;
    out["discarded"] = f.discarded;
    out["names"] = m.param_names();
    return out;
}

py::list py_bands(const std::vector<double>& x, double bandwidth, const std::string& model,
                  const std::vector<int>& orders, double alpha, int boot_reps, const std::string& method,
                  int grid_size, int threads, std::uint64_t seed) {
    const ModelSpec m = make_model(model, orders);
    const Series s(x);
    const Kernel k = Kernel::epanechnikov();
    const auto grid = default_grid(bandwidth, grid_size);
    std::vector<Band> bands;
    {
        py::gil_scoped_release nogil;
        const FitOptions fo = fit_options(threads, seed);
        const CurveFit fb = fit_curve(s, bandwidth, grid, m, k, fo);
        const CurveFit fb2 = fit_curve(s, bandwidth / std::sqrt(2.0), grid, m, k, fo);
        const DebiasedCurve d = jackknife_debias(fb, fb2);
        const SigmaField field = estimate_sigma_field(s, fb, k, joint_contrast(m.dim()), SigmaForm::Sandwich, threads);
        double u = 0.0;
        if (method == "boot") {
            u = bootstrap_sup_quantile(s.size(), bandwidth, k, 1, boot_reps, alpha, seed, grid, threads).u;
        } else if (method != "gumbel" && method != "pointwise") {
            throw std::invalid_argument("method must be boot, gumbel or pointwise");
        }
        for (int j = 0; j < m.dim(); ++j) {
            const SigmaField f = with_contrast(field, unit_contrast(m.dim(), j));
            if (method == "boot") {
                bands.push_back(build_scb_bootstrap(d, f, u, bandwidth, k, true, alpha));
            } else if (method == "gumbel") {
                bands.push_back(gumbel_scb(d, f, s.size(), bandwidth, alpha, k));
            } else {
                bands.push_back(pointwise_band(d.theta, f, s.size(), bandwidth, alpha, Kernel::jackknife(k)));
            }
        }
    }
    const auto names = m.param_names();
    py::list out;
    for (std::size_t j = 0; j < bands.size(); ++j) {
        const Band& b = bands[j];
        std::vector<double> center, lower, upper;
        std::vector<bool> active;
        for (std::size_t g = 0; g < b.grid.size(); ++g) {
            center.push_back(b.center[g](0));
            lower.push_back(b.lower(g));
            upper.push_back(b.upper(g));
            active.push_back(b.active[g] != 0);
        }
        py::dict e;
        e["component"] = names[j];
        e["grid"] = b.grid;
        e["center"] = center;
        e["lower"] = lower;
        e["upper"] = upper;
        e["active"] = active;
        e["u"] = b.u;
        e["rejects_constancy"] = band_rejects_constancy(b);
        out.append(e);
    }
    return out;
}

py::dict py_select_bandwidth(const std::vector<double>& x, const std::string& model, const std::vector<int>& orders,
                             std::vector<double> grid, int stride, int threads) {
    if (grid.empty()) grid = default_bandwidth_grid();
    CvOptions opt;
    opt.stride = stride;
    opt.fit = fit_options(threads, kDefaultSeed);
    BandwidthSelection sel;
    {
        py::gil_scoped_release nogil;
        sel = select_bandwidth(Series(x), make_model(model, orders), grid, Kernel::epanechnikov(), opt);
    }
    py::dict out;
    out["b_cv"] = sel.b_cv;
    out["table"] = sel.table;
    return out;
}

}  // namespace

PYBIND11_MODULE(_tvscb, m) {
    m.doc() = "Local linear QMLE for time-varying AR/ARCH/GARCH with simultaneous confidence bands";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_RuntimeError);

    m.attr("DEFAULT_SEED") = kDefaultSeed;

    m.def("simulate", &py_simulate, py::arg("design"), py::arg("n"), py::arg("seed") = kDefaultSeed,
          "Simulate a named design; returns x, the true sigma^2 and theta(i/n).");
    m.def("fit_curve", &py_fit, py::arg("x"), py::arg("bandwidth"), py::arg("model") = "garch",
          py::arg("orders") = std::vector<int>{1, 1}, py::arg("grid_size") = 101, py::arg("threads") = 1,
          py::arg("seed") = kDefaultSeed);
    m.def("bands", &py_bands, py::arg("x"), py::arg("bandwidth"), py::arg("model") = "garch",
          py::arg("orders") = std::vector<int>{1, 1}, py::arg("alpha") = 0.05, py::arg("boot_reps") = 2000,
          py::arg("method") = "boot", py::arg("grid_size") = 101, py::arg("threads") = 1,
          py::arg("seed") = kDefaultSeed,
          "Componentwise simultaneous bands for the jackknife estimate.");
    m.def("select_bandwidth", &py_select_bandwidth, py::arg("x"), py::arg("model") = "garch",
          py::arg("orders") = std::vector<int>{1, 1}, py::arg("grid") = std::vector<double>{},
          py::arg("stride") = 5, py::arg("threads") = 1);
    m.def("forecast_sigma2",
          [](const std::string& model, const std::vector<int>& orders, const VectorXd& params,
             const std::vector<double>& y, const std::vector<double>& sigma2, int h) {
              return forecast_sigma2(make_model(model, orders), params, y, sigma2, h);
          },
          py::arg("model"), py::arg("orders"), py::arg("params"), py::arg("y"),
          py::arg("sigma2") = std::vector<double>{}, py::arg("h") = 1);
    m.def("parse_csv", [](const std::string& text, bool log_returns, const std::string& column) {
        return parse_csv(text, log_returns, column).x;
    }, py::arg("text"), py::arg("log_returns") = false, py::arg("column") = "");
    m.def("gumbel_quantile", &gumbel_quantile, py::arg("alpha"));
    m.def("kernel_moment",
          [](const std::string& kernel, int l, bool squared) {
              const Kernel k = kernel == "jackknife" ? Kernel::jackknife() : Kernel::epanechnikov();
              return kernel_moment(k, l, squared);
          },
          py::arg("kernel") = "epanechnikov", py::arg("l") = 0, py::arg("squared") = false);
}
