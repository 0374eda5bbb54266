#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hb/analysis.hpp"
#include "hb/kernels.hpp"
#include "hb/noise.hpp"
#include "hb/solver.hpp"
#include "hb/stats.hpp"
#include "hb/stochint.hpp"
#include "hb/version.hpp"

namespace py = pybind11;
using namespace hb;

namespace {

py::array_t<double> field_array(const FieldSample& f) {
    std::vector<py::ssize_t> shape;
    shape.push_back(f.grid.n_t + (f.kind == FieldKind::WhiteNoise ? 0 : 1));
    const py::ssize_t nx = f.kind == FieldKind::Sheet ? f.grid.n_x + 1 : f.grid.n_x;
    for (int i = 0; i < f.grid.d; ++i) shape.push_back(nx);
    py::array_t<double> out(shape);
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hermite-sheet noise sampling, stochastic integration and the "
              "mild-form Burgers solver";
    m.attr("__version__") = kToolVersion;

    py::class_<HermiteParams>(m, "HermiteParams")
        .def(py::init([](int q, std::vector<double> H, int d, double nu) {
                 return HermiteParams{q, std::move(H), d, nu};
             }),
             py::arg("q"), py::arg("H"), py::arg("d") = 1, py::arg("nu") = 1.0)
        .def_readwrite("q", &HermiteParams::q)
        .def_readwrite("H", &HermiteParams::H)
        .def_readwrite("d", &HermiteParams::d)
        .def_readwrite("nu", &HermiteParams::nu);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("valid", &ValidationReport::valid)
        .def_readonly("lhs", &ValidationReport::lhs)
        .def_readonly("rhs", &ValidationReport::rhs)
        .def_readonly("violations", &ValidationReport::violations)
        .def("__bool__", [](const ValidationReport& r) { return r.valid; });

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double t_max, int n_t, double L, int n_x, int d) {
                 return GridSpec{t_max, n_t, L, n_x, d};
             }),
             py::arg("t_max"), py::arg("n_t"), py::arg("L"), py::arg("n_x"), py::arg("d") = 1)
        .def_readwrite("t_max", &GridSpec::t_max)
        .def_readwrite("n_t", &GridSpec::n_t)
        .def_readwrite("L", &GridSpec::L)
        .def_readwrite("n_x", &GridSpec::n_x)
        .def_readwrite("d", &GridSpec::d)
        .def("dt", &GridSpec::dt)
        .def("dx", &GridSpec::dx);

    py::class_<SeedSpec>(m, "SeedSpec")
        .def(py::init([](std::uint64_t master, std::uint64_t stream) {
                 return SeedSpec{master, stream};
             }),
             py::arg("master_seed") = 0, py::arg("stream_index") = 0)
        .def_readwrite("master_seed", &SeedSpec::master_seed)
        .def_readwrite("stream_index", &SeedSpec::stream_index);

    py::enum_<FieldKind>(m, "FieldKind")
        .value("Sheet", FieldKind::Sheet)
        .value("WhiteNoise", FieldKind::WhiteNoise)
        .value("Solution", FieldKind::Solution);

    py::class_<FieldSample>(m, "FieldSample")
        .def_readonly("grid", &FieldSample::grid)
        .def_readonly("seed", &FieldSample::seed)
        .def_readonly("kind", &FieldSample::kind)
        .def_property_readonly("values",
                               [](const FieldSample& f) {
                                   return py::array_t<double>(
                                       static_cast<py::ssize_t>(f.values.size()),
                                       f.values.data());
                               })
        .def("array", &field_array,
             "Field values shaped (time, space...) following the kind's lattice");

    py::class_<StepFunction>(m, "StepFunction")
        .def_static("zero", &StepFunction::zero)
        .def_static("box_indicator", &StepFunction::box_indicator, py::arg("grid"),
                    py::arg("t_hi"), py::arg("x_hi"))
        .def_readwrite("grid", &StepFunction::grid)
        .def_readwrite("coefficients", &StepFunction::coefficients);

    py::class_<SigmaSpec>(m, "SigmaSpec")
        .def_static("zero", &SigmaSpec::zero)
        .def_static("constant", &SigmaSpec::constant, py::arg("c"))
        .def_static("affine", &SigmaSpec::affine, py::arg("a"), py::arg("b"))
        .def_static("tabulated", &SigmaSpec::tabulated, py::arg("knots"))
        .def_readonly("lipschitz_bound", &SigmaSpec::lipschitz_bound)
        .def_readonly("growth_bound", &SigmaSpec::growth_bound)
        .def("__call__", &SigmaSpec::operator(), py::arg("t"), py::arg("x"), py::arg("u"));

    py::class_<TruncationSpec>(m, "TruncationSpec")
        .def(py::init<>())
        .def_readwrite("s_refine", &TruncationSpec::s_refine)
        .def_readwrite("cost_budget", &TruncationSpec::cost_budget);

    m.def("validate_params", &validate_params, py::arg("params"));
    m.def("kernel_exponent", &kernel_exponent, py::arg("H_i"), py::arg("q"));
    m.def(
        "heat_kernel",
        [](double t, const std::vector<double>& x, double nu) {
            return heat_kernel(t, x, nu);
        },
        py::arg("t"), py::arg("x"), py::arg("nu"));
    m.def(
        "heat_kernel_gradient",
        [](double t, const std::vector<double>& x, double nu) {
            return heat_kernel_gradient(t, x, nu);
        },
        py::arg("t"), py::arg("x"), py::arg("nu"));
    m.def(
        "sheet_covariance",
        [](const std::vector<double>& t, const std::vector<double>& s,
           const std::vector<double>& H) { return sheet_covariance(t, s, H); },
        py::arg("t"), py::arg("s"), py::arg("H"));

    m.def("hermite_poly", &hermite_poly, py::arg("q"), py::arg("x"));
    m.def("sample_white_noise", &sample_white_noise, py::arg("grid"), py::arg("seed"));
    m.def("sample_fbm_sheet_exact", &sample_fbm_sheet_exact, py::arg("params"), py::arg("grid"),
          py::arg("seed"));
    m.def("sample_hermite_sheet_kernel", &sample_hermite_sheet_kernel, py::arg("params"),
          py::arg("grid"), py::arg("trunc"), py::arg("seed"));
    m.def("sample_hermite_sheet_ncl", &sample_hermite_sheet_ncl, py::arg("params"),
          py::arg("grid"), py::arg("m"), py::arg("seed"));

    py::class_<FbmSheetSampler>(m, "FbmSheetSampler")
        .def(py::init<const HermiteParams&, const GridSpec&>())
        .def("sample", &FbmSheetSampler::sample, py::arg("seed"));
    py::class_<HermiteKernelSampler>(m, "HermiteKernelSampler")
        .def(py::init<const HermiteParams&, const GridSpec&, const TruncationSpec&>(),
             py::arg("params"), py::arg("grid"), py::arg("trunc") = TruncationSpec{})
        .def("sample", &HermiteKernelSampler::sample, py::arg("seed"))
        .def("discrete_covariance",
             [](const HermiteKernelSampler& s, const std::vector<int>& a,
                const std::vector<int>& b) { return s.discrete_covariance(a, b); })
        .def_property_readonly("calibration_scale", &HermiteKernelSampler::calibration_scale);
    py::class_<HermiteNclSampler>(m, "HermiteNclSampler")
        .def(py::init<const HermiteParams&, const GridSpec&, int>(), py::arg("params"),
             py::arg("grid"), py::arg("m"))
        .def("sample", &HermiteNclSampler::sample, py::arg("seed"))
        .def("discrete_covariance",
             [](const HermiteNclSampler& s, const std::vector<int>& a,
                const std::vector<int>& b) { return s.discrete_covariance(a, b); });

    py::class_<HNormResult>(m, "HNormResult")
        .def_readonly("value", &HNormResult::value)
        .def_readonly("quadrature_error_estimate", &HNormResult::quadrature_error_estimate);
    m.def(
        "h_inner_product",
        [](const StepFunction& a, const StepFunction& b, const std::vector<double>& H) {
            return h_inner_product(a, b, H);
        },
        py::arg("phi"), py::arg("psi"), py::arg("H"));
    m.def("integrate_step", &integrate_step, py::arg("phi"), py::arg("sheet"));

    py::class_<IsometryReport>(m, "IsometryReport")
        .def_readonly("empirical_second_moment", &IsometryReport::empirical_second_moment)
        .def_readonly("h_norm", &IsometryReport::h_norm)
        .def_readonly("z_score", &IsometryReport::z_score)
        .def_readonly("standard_error", &IsometryReport::standard_error);
    m.def("isometry_report", &isometry_report, py::arg("phi"), py::arg("params"),
          py::arg("n_samples"), py::arg("seed"), py::arg("trunc") = TruncationSpec{});

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("initial_panels", &QuadratureSpec::initial_panels)
        .def_readwrite("max_doublings", &QuadratureSpec::max_doublings)
        .def_readwrite("rel_tol", &QuadratureSpec::rel_tol);
    py::class_<CapitalIResult>(m, "CapitalIResult")
        .def_readonly("value", &CapitalIResult::value)
        .def_readonly("refinement_converged", &CapitalIResult::refinement_converged)
        .def_readonly("divergence_flag", &CapitalIResult::divergence_flag)
        .def_readonly("last_rel_change", &CapitalIResult::last_rel_change);
    m.def("capital_I", &capital_I, py::arg("t"), py::arg("params"),
          py::arg("quad") = QuadratureSpec{});

    py::class_<SolverConfig> sc(m, "SolverConfig");
    py::enum_<SolverConfig::Scheme>(sc, "Scheme")
        .value("Picard", SolverConfig::Scheme::Picard)
        .value("Step", SolverConfig::Scheme::Step);
    sc.def(py::init<>())
        .def_readwrite("picard_tol", &SolverConfig::picard_tol)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("scheme", &SolverConfig::scheme)
        .def_readwrite("dealias", &SolverConfig::dealias)
        .def_readwrite("domain", &SolverConfig::domain);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("field", &SolveResult::field)
        .def_readonly("iter_distances", &SolveResult::iter_distances)
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("warnings", &SolveResult::warnings);

    m.def("zero_sheet", &zero_sheet, py::arg("grid"));
    m.def(
        "heat_semigroup_apply",
        [](const std::vector<double>& u, double dt, double nu, double L) {
            return heat_semigroup_apply(u, dt, nu, L);
        },
        py::arg("u"), py::arg("dt"), py::arg("nu"), py::arg("L"));
    m.def(
        "picard_solve",
        [](const HermiteParams& p, const SigmaSpec& s, const std::vector<double>& u0,
           const FieldSample& sheet, const SolverConfig& c) {
            return picard_solve(p, s, u0, sheet, c);
        },
        py::arg("params"), py::arg("sigma"), py::arg("u0"), py::arg("sheet"), py::arg("config"));
    m.def(
        "step_solve",
        [](const HermiteParams& p, const SigmaSpec& s, const std::vector<double>& u0,
           const FieldSample& sheet, const SolverConfig& c) {
            return step_solve(p, s, u0, sheet, c);
        },
        py::arg("params"), py::arg("sigma"), py::arg("u0"), py::arg("sheet"), py::arg("config"));
    m.def(
        "cole_hopf_exact",
        [](const std::vector<double>& u0, double t, double nu, double L, int n_modes) {
            return cole_hopf_exact(u0, t, nu, L, n_modes);
        },
        py::arg("u0"), py::arg("t"), py::arg("nu"), py::arg("L"), py::arg("n_modes") = 128);

    py::class_<HolderFit> hf(m, "HolderFit");
    py::enum_<HolderFit::Direction>(hf, "Direction")
        .value("Time", HolderFit::Direction::Time)
        .value("Space", HolderFit::Direction::Space);
    hf.def_readonly("slope", &HolderFit::slope)
        .def_readonly("r2", &HolderFit::r2)
        .def_readonly("exponent", &HolderFit::exponent)
        .def_readonly("exponent_se", &HolderFit::exponent_se)
        .def_readonly("degenerate", &HolderFit::degenerate);
    m.def("estimate_holder", &estimate_holder, py::arg("ensemble"), py::arg("direction"),
          py::arg("p"), py::arg("lags"));

    py::class_<KsResult>(m, "KsResult")
        .def_readonly("statistic", &KsResult::statistic)
        .def_readonly("p_value", &KsResult::p_value);
    m.def("ks_two_sample", &ks_two_sample, py::arg("a"), py::arg("b"));
}
