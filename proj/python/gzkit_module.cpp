// Python bindings for the toolkit core.
//
// The module mirrors the C++ surface one-to-one where that is convenient
// from Python (classes with readonly fields, free functions), and wraps the
// option-struct entry points (solver, flow, suite) as keyword arguments.
// Boolean report fields named `pass` in C++ are exposed as `passed` because
// `pass` is a Python keyword.

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gzkit/algebra.hpp"
#include "gzkit/flow.hpp"
#include "gzkit/geometry.hpp"
#include "gzkit/harness.hpp"
#include "gzkit/novikov.hpp"
#include "gzkit/rational.hpp"
#include "gzkit/rng.hpp"
#include "gzkit/spectral.hpp"
#include "gzkit/superpotential.hpp"

namespace py = pybind11;
using namespace gzkit;

namespace {

std::vector<CVec> sample_cloud(int n, int count, std::uint64_t seed,
                               const std::string& cls) {
  Rng rng(seed);
  std::vector<CVec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (cls == "torus")
      out.push_back(sample_monotone_torus(n, rng));
    else if (cls == "sphere")
      out.push_back(sample_vanishing_sphere(n, rng));
    else
      out.push_back(random_quadric_point(n, rng));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_gzkit, m) {
  m.doc() =
      "Native core of the quadric verification toolkit: exact Novikov-field "
      "scalars, quantum multiplication tables and their idempotents, the "
      "Laurent potential solver, the torus fibration with its distinguished "
      "Lagrangians, the degeneration flow, separation certificates, and the "
      "end-to-end suite runner.";

  // ---------------------------------------------------------------- scalars
  py::class_<Rational>(m, "Rational",
                       "Exact rational exponent (64-bit, overflow-checked).")
      .def(py::init<long long, long long>(), py::arg("num"),
           py::arg("den") = 1)
      .def_property_readonly("num", &Rational::num)
      .def_property_readonly("den", &Rational::den)
      .def("is_zero", &Rational::is_zero)
      .def("is_integer", &Rational::is_integer)
      .def("in_lattice", &Rational::in_lattice, py::arg("m"))
      .def("to_double", &Rational::to_double)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def(py::self > py::self)
      .def(py::self >= py::self)
      .def("__str__", &Rational::str)
      .def("__repr__",
           [](const Rational& r) { return "Rational(" + r.str() + ")"; })
      .def("__hash__",
           [](const Rational& r) {
             return py::hash(py::make_tuple(r.num(), r.den()));
           })
      .def_static("parse", &Rational::parse, py::arg("text"));
  py::implicitly_convertible<py::int_, Rational>();

  py::class_<NovikovScalar>(
      m, "Scalar",
      "Finite formal sum of complex coefficients times exact rational powers "
      "of the energy variable T (T^1 means one line energy; the classical "
      "deformation parameter is T^{-1}).")
      .def(py::init<>())
      .def(py::init<double>(), py::arg("value"))
      .def(py::init<const Complex&>(), py::arg("value"))
      .def_static("monomial", &NovikovScalar::monomial, py::arg("coeff"),
                  py::arg("exp"))
      .def_static("one", &NovikovScalar::one)
      .def_static("parse", &NovikovScalar::parse, py::arg("text"))
      .def_property_readonly("terms",
                             [](const NovikovScalar& s) {
                               py::list out;
                               for (const auto& t : s.terms())
                                 out.append(py::make_tuple(t.coeff, t.exp));
                               return out;
                             },
                             "List of (coeff, exp) pairs, exponents "
                             "strictly increasing.")
      .def("is_zero", &NovikovScalar::is_zero)
      .def("__len__", &NovikovScalar::size)
      .def("valuation", &NovikovScalar::valuation,
           "Least exponent; raises ValueError on zero.")
      .def("leading_coeff", &NovikovScalar::leading_coeff)
      .def("inverse", &NovikovScalar::inverse,
           py::arg("cutoff") = Rational(10),
           "Truncated series inverse: (a * a.inverse(c) - 1) is zero or has "
           "valuation > c.")
      .def("rescaled", &NovikovScalar::rescaled, py::arg("factor"))
      .def("is_laurent", &NovikovScalar::is_laurent)
      .def("eval", &NovikovScalar::eval, py::arg("x"),
           "Substitute T^{lambda0} -> x (x > 0).")
      .def("cleaned", &NovikovScalar::cleaned, py::arg("eps"))
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__rmul__",
           [](const NovikovScalar& a, const Complex& c) { return c * a; })
      .def("__str__", &NovikovScalar::str)
      .def("__repr__",
           [](const NovikovScalar& s) { return "Scalar(\"" + s.str() + "\")"; });

  // ----------------------------------------------------------------- tables
  py::class_<GradedBasis>(m, "GradedBasis")
      .def_readonly("labels", &GradedBasis::labels)
      .def_readonly("degrees", &GradedBasis::degrees)
      .def_readonly("unit_index", &GradedBasis::unit_index)
      .def("dim", &GradedBasis::dim);

  py::class_<AlgebraTable>(
      m, "AlgebraTable",
      "Multiplication table of a graded commutative algebra over the Novikov "
      "scalars; elements are lists of Scalar, one coordinate per basis class.")
      .def_readonly("name", &AlgebraTable::name)
      .def_readonly("n", &AlgebraTable::n)
      .def_readonly("lambda0", &AlgebraTable::lambda0)
      .def_readonly("deg_T", &AlgebraTable::deg_T)
      .def_readonly("basis", &AlgebraTable::basis)
      .def_readonly("c1", &AlgebraTable::c1)
      .def("dim", &AlgebraTable::dim)
      .def("zero_element", &AlgebraTable::zero_element)
      .def("unit_element", &AlgebraTable::unit_element)
      .def("index_of", &AlgebraTable::index_of, py::arg("label"))
      .def("__repr__", [](const AlgebraTable& t) {
        return "AlgebraTable(name=\"" + t.name +
               "\", dim=" + std::to_string(t.dim()) + ")";
      });

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_readonly("kind", &ValidationIssue::kind)
      .def_readonly("i", &ValidationIssue::i)
      .def_readonly("j", &ValidationIssue::j)
      .def_readonly("k", &ValidationIssue::k)
      .def_readonly("detail", &ValidationIssue::detail)
      .def("__repr__", [](const ValidationIssue& v) {
        return "ValidationIssue(" + v.kind + ": " + v.detail + ")";
      });

  m.def("builtin_quadric_table", &builtin_quadric_table, py::arg("n"),
        "Built-in quantum multiplication table of the n-dimensional quadric, "
        "1 <= n <= 6.");
  m.def("load_table", &load_table, py::arg("path"),
        "Parse a .qht table file (no validation).");
  m.def(
      "ingest_table",
      [](const std::string& path) {
        ValidationReport warnings;
        AlgebraTable t = ingest_table(path, &warnings);
        return py::make_tuple(t, warnings.issues);
      },
      py::arg("path"),
      "Parse and validate an external table; returns (table, issues). Parse "
      "errors raise, validation failures come back as issues.");
  m.def(
      "validate_table",
      [](const AlgebraTable& t) { return validate_table(t).issues; },
      py::arg("table"),
      "Exact shape/unit/commutativity/associativity/grading/positivity "
      "check; returns the list of issues (empty = valid).");
  m.def("table_to_string", &table_to_string, py::arg("table"),
        "Canonical text serialization (exact round-trip with load_table).");
  m.def("multiply", &multiply, py::arg("table"), py::arg("a"), py::arg("b"),
        "Bilinear product of coordinate vectors through the table.");
  m.def("c1_spectrum", &c1_spectrum, py::arg("table"), py::arg("T") = 1.0,
        "Eigenvalues of quantum multiplication by c1 after T^{lambda0} -> T.");
  m.def("coarse_idempotent", &coarse_idempotent, py::arg("table"),
        py::arg("sign"), "(1 +/- p T^{-1}) / 2 for tables with p*p = T^2.");
  m.def("fine_minus_idempotent", &fine_minus_idempotent, py::arg("table"),
        py::arg("sign"),
        "(1 +/- s T^{-1/2} - p T^{-1}) / 4, splitting the coarse negative "
        "idempotent of even-dimensional quadrics.");

  py::class_<IdempotentDecomposition>(
      m, "IdempotentDecomposition",
      "Primitive idempotents with their eigenvalues, exact exponent lattices "
      "and the fitted lattice diagnostics.")
      .def_readonly("idempotents", &IdempotentDecomposition::idempotents)
      .def_readonly("labels", &IdempotentDecomposition::labels)
      .def_readonly("c1_eigenvalues", &IdempotentDecomposition::c1_eigenvalues)
      .def_readonly("exponent_denominators",
                    &IdempotentDecomposition::exponent_denominators)
      .def_readonly("fit_residuals", &IdempotentDecomposition::fit_residuals)
      .def_readonly("grid", &IdempotentDecomposition::grid)
      .def_readonly("exact", &IdempotentDecomposition::exact)
      .def_readonly("semisimple", &IdempotentDecomposition::semisimple)
      .def_readonly("notes", &IdempotentDecomposition::notes);

  m.def("primitive_idempotents", &primitive_idempotents, py::arg("table"),
        py::arg("seed") = 1,
        "Numeric primitive idempotents lifted to exact monomials; reports "
        "non-semisimplicity instead of inventing idempotents.");
  m.def("exponent_denominator", &exponent_denominator, py::arg("element"),
        py::arg("table"),
        "Minimal m with every exponent of the element in (1/m)Z.");
  m.def(
      "fitted_exponent_denominator",
      [](const IdempotentDecomposition& d, int which, const AlgebraTable& t) {
        double residual = 0;
        int mm = fitted_exponent_denominator(d, which, t, &residual);
        return py::make_tuple(mm, residual);
      },
      py::arg("decomposition"), py::arg("which"), py::arg("table"),
      "Log-slope lattice fit for one idempotent; returns (m, residual).");
  m.def("coarse_grouping", &coarse_grouping, py::arg("decomposition"),
        py::arg("table"),
        "Maps each fine idempotent label to its coarse class.");

  // -------------------------------------------------------------- potential
  m.def("superpotential_value", &superpotential_value, py::arg("n"),
        py::arg("z"));
  m.def("superpotential_gradient", &superpotential_gradient, py::arg("n"),
        py::arg("z"));
  m.def("closed_form_critical_point", &closed_form_critical_point,
        py::arg("n"), py::arg("branch"));
  m.def("closed_form_critical_value", &closed_form_critical_value,
        py::arg("n"), py::arg("branch"));

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("z", &CriticalPoint::z)
      .def_readonly("value", &CriticalPoint::value)
      .def_readonly("grad_norm", &CriticalPoint::grad_norm)
      .def_readonly("min_abs_coord", &CriticalPoint::min_abs_coord)
      .def_readonly("hessian_min_singular",
                    &CriticalPoint::hessian_min_singular)
      .def_readonly("nondegenerate", &CriticalPoint::nondegenerate)
      .def("__repr__", [](const CriticalPoint& p) {
        std::ostringstream os;
        os << "CriticalPoint(value=" << p.value.real();
        if (p.value.imag() != 0) os << (p.value.imag() < 0 ? "" : "+")
                                    << p.value.imag() << "j";
        os << ")";
        return os.str();
      });

  py::class_<SolveStats>(m, "SolveStats")
      .def_readonly("starts", &SolveStats::starts)
      .def_readonly("converged", &SolveStats::converged)
      .def_readonly("filtered_small", &SolveStats::filtered_small)
      .def_readonly("deflected", &SolveStats::deflected);

  m.def(
      "find_critical_points",
      [](int n, int starts, std::uint64_t seed) {
        SolveOptions opt;
        opt.starts = starts;
        opt.seed = seed;
        SolveStats stats;
        auto pts = find_critical_points(n, opt, &stats);
        // plain C++ pair: the tuple conversion must wait for the GIL,
        // which the call guard reacquires only after this lambda returns
        return std::make_pair(std::move(pts), stats);
      },
      py::arg("n"), py::arg("starts") = 200, py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>(),
      "Multistart Newton solve of the potential's critical system; returns "
      "(points, stats) with points sorted by critical value.");
  m.def("spectrum_match_distance", &spectrum_match_distance, py::arg("points"),
        py::arg("reference"),
        "Largest multiset-match distance between critical values and a "
        "reference spectrum; +inf on cardinality mismatch.");

  // --------------------------------------------------------------- geometry
  m.def(
      "quadric_residuals",
      [](const CVec& z) {
        auto r = quadric_residuals(z);
        return py::make_tuple(r.norm, r.quadric);
      },
      py::arg("z"),
      "(| |z|^2 - 2 |, | sum z_j^2 |) for the ambient constraints.");
  m.def(
      "gz_closed", [](const CVec& z) { return gz_closed({}, z); },
      py::arg("z"),
      "Fibration values through the closed form (any nonzero z).");
  m.def(
      "gz_matrix", [](const CVec& z) { return gz_matrix({}, z); },
      py::arg("z"),
      "Fibration values through dense eigenvalue computations (oracle "
      "route).");
  m.def("biran_lift", &biran_lift, py::arg("w"), py::arg("zeta"),
        "Disc-bundle lift from the (n-1)-quadric; scales shared values by "
        "(1 - |zeta|^2/2) and appends the new top value.");
  m.def(
      "monotone_fiber", [](int n) { return monotone_fiber(n); }, py::arg("n"),
      "Fibration values of the monotone torus fibre: (0, 2/n, ..., "
      "2(n-1)/n).");
  m.def(
      "random_points",
      [](int n, int count, std::uint64_t seed) {
        return sample_cloud(n, count, seed, "generic");
      },
      py::arg("n"), py::arg("count") = 1, py::arg("seed") = 1,
      "Random points of the n-quadric (both constraints to roundoff).");
  m.def(
      "sample_torus",
      [](int n, int count, std::uint64_t seed) {
        return sample_cloud(n, count, seed, "torus");
      },
      py::arg("n"), py::arg("count") = 1, py::arg("seed") = 1,
      "Random points on the monotone fibre torus.");
  m.def(
      "sample_sphere",
      [](int n, int count, std::uint64_t seed) {
        return sample_cloud(n, count, seed, "sphere");
      },
      py::arg("n"), py::arg("count") = 1, py::arg("seed") = 1,
      "Random points on the real-locus Lagrangian sphere.");

  py::class_<DisjointnessReport>(m, "DisjointnessReport")
      .def_readonly("n", &DisjointnessReport::n)
      .def_readonly("samples", &DisjointnessReport::samples)
      .def_readonly("min_gap", &DisjointnessReport::min_gap)
      .def_readonly("threshold", &DisjointnessReport::threshold)
      .def_readonly("max_sphere_value", &DisjointnessReport::max_sphere_value)
      .def_readonly("passed", &DisjointnessReport::pass);

  m.def(
      "disjointness_gap",
      [](int n, int samples, std::uint64_t seed) {
        Rng rng(seed);
        return disjointness_gap(n, samples, rng);
      },
      py::arg("n"), py::arg("samples") = 200, py::arg("seed") = 1,
      "Certifies the level gap between the sphere and the monotone fibre.");

  // ------------------------------------------------------------------- flow
  py::class_<FlowSample>(m, "FlowSample")
      .def_readonly("s", &FlowSample::s)
      .def_readonly("t", &FlowSample::t)
      .def_readonly("t_dev", &FlowSample::t_dev)
      .def_readonly("norm_residual", &FlowSample::norm_residual)
      .def_readonly("family_residual", &FlowSample::family_residual)
      .def_readonly("involution_residual", &FlowSample::involution_residual)
      .def_readonly("singular_distance", &FlowSample::singular_distance)
      .def_readonly("gz_drift", &FlowSample::gz_drift)
      .def_readonly("head_drift", &FlowSample::head_drift);

  py::class_<FlowTrace>(m, "FlowTrace")
      .def_readonly("n", &FlowTrace::n)
      .def_readonly("cls", &FlowTrace::cls)
      .def_readonly("z0", &FlowTrace::z0)
      .def_readonly("z_end", &FlowTrace::z_end)
      .def_readonly("t_end", &FlowTrace::t_end)
      .def_readonly("samples", &FlowTrace::samples)
      .def_readonly("steps_accepted", &FlowTrace::steps_accepted)
      .def_readonly("steps_rejected", &FlowTrace::steps_rejected);

  py::class_<FlowClassSummary>(m, "FlowClassSummary")
      .def_readonly("count", &FlowClassSummary::count)
      .def_readonly("max_t_dev", &FlowClassSummary::max_t_dev)
      .def_readonly("max_norm_residual", &FlowClassSummary::max_norm_residual)
      .def_readonly("max_family_residual",
                    &FlowClassSummary::max_family_residual)
      .def_readonly("max_involution_residual",
                    &FlowClassSummary::max_involution_residual)
      .def_readonly("mean_final_distance",
                    &FlowClassSummary::mean_final_distance)
      .def_readonly("min_distance", &FlowClassSummary::min_distance)
      .def_readonly("max_gz_drift", &FlowClassSummary::max_gz_drift)
      .def_readonly("max_head_drift", &FlowClassSummary::max_head_drift)
      .def_readonly("max_toric_spread", &FlowClassSummary::max_toric_spread)
      .def_readonly("final_distance_spread",
                    &FlowClassSummary::final_distance_spread)
      .def_readonly("monotone_shrink", &FlowClassSummary::monotone_shrink);

  py::class_<FlowReport>(m, "FlowReport")
      .def_readonly("n", &FlowReport::n)
      .def_readonly("sphere", &FlowReport::sphere)
      .def_readonly("torus", &FlowReport::torus)
      .def_readonly("sphere_collapses", &FlowReport::sphere_collapses)
      .def_readonly("torus_stays_far", &FlowReport::torus_stays_far)
      .def_readonly("torus_toric_limit", &FlowReport::torus_toric_limit)
      .def_readonly("head_transported", &FlowReport::head_transported)
      .def_readonly("transport_exact", &FlowReport::transport_exact)
      .def_readonly("constraints_held", &FlowReport::constraints_held)
      .def_readonly("sphere_stays_real", &FlowReport::sphere_stays_real)
      .def_readonly("passed", &FlowReport::pass)
      .def_readonly("failures", &FlowReport::failures);

  m.def(
      "run_flow",
      [](const CVec& z0, const std::string& cls, double s_end,
         int max_samples) {
        FlowConfig fc;
        fc.s_end = s_end;
        fc.max_samples = max_samples;
        return run_flow(z0, cls, fc);
      },
      py::arg("z0"), py::arg("cls"), py::arg("s_end") = 0.99,
      py::arg("max_samples") = 400,
      py::call_guard<py::gil_scoped_release>(),
      "Transport one point of the t = 1 fibre down the degeneration "
      "(t = 1 - s) with per-step diagnostics.");
  m.def("analyze_traces", &analyze_traces, py::arg("traces"),
        "Aggregate torus/sphere trajectories into the pass/fail report.");
  m.def("family_value", &family_value, py::arg("z"), py::arg("t"));
  m.def("involution_residual", &involution_residual, py::arg("z"));
  m.def("singular_distance", &singular_distance, py::arg("z"));

  // ----------------------------------------------------------- certificates
  py::class_<SuperheavyRegistry>(m, "SuperheavyRegistry",
                                 "Registered regions with their evidence.")
      .def_readonly("space", &SuperheavyRegistry::space)
      .def("labels", &SuperheavyRegistry::labels);

  py::class_<PairVerdict>(m, "PairVerdict")
      .def_readonly("i", &PairVerdict::i)
      .def_readonly("j", &PairVerdict::j)
      .def_readonly("gap", &PairVerdict::gap)
      .def_readonly("delta", &PairVerdict::delta)
      .def_readonly("mu", &PairVerdict::mu)
      .def_readonly("distinct", &PairVerdict::distinct);

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("space", &Certificate::space)
      .def_readonly("labels", &Certificate::labels)
      .def_readonly("gap", &Certificate::gap)
      .def_readonly("delta", &Certificate::delta)
      .def_property_readonly(
          "zeta", [](const Certificate& c) { return c.zeta.values; })
      .def_readonly("unit_value", &Certificate::unit_value)
      .def_readonly("norm_value", &Certificate::norm_value)
      .def_readonly("pairs", &Certificate::pairs)
      .def_readonly("separated", &Certificate::separated)
      .def_readonly("dependency_hashes", &Certificate::dependency_hashes)
      .def_readonly("notes", &Certificate::notes);

  m.def("read_registry_json", &read_registry_json, py::arg("path"),
        "Load a region registry; evidence is validated on load.");
  m.def("separation_certificate", &separation_certificate, py::arg("registry"),
        py::arg("dependencies") = std::map<std::string, std::string>{},
        "Staircase bump + per-pair bumps over the registered regions; throws "
        "when regions overlap.");
  m.def("certificate_to_json", &certificate_to_json, py::arg("certificate"));
  m.def(
      "quadric_certificate",
      [](int n, int points, std::uint64_t seed) {
        Rng rng(seed);
        Rng torus_rng = rng.stream(1);
        Rng sphere_rng = rng.stream(2);
        PointCloud torus{n, "torus", {}};
        PointCloud sphere{n, "sphere", {}};
        for (int i = 0; i < points; ++i) {
          torus.points.push_back(sample_monotone_torus(n, torus_rng));
          sphere.points.push_back(sample_vanishing_sphere(n, sphere_rng));
        }
        GeometryConfig cfg;
        Region torus_region = region_from_cloud(cfg, torus, "torus");
        Region sphere_region = region_from_cloud(cfg, sphere, "sphere");
        SuperheavyRegistry reg =
            quadric_registry(n, torus_region, sphere_region, seed);
        std::map<std::string, std::string> deps{
            {"table", table_to_string(builtin_quadric_table(n))}};
        return separation_certificate(reg, deps);
      },
      py::arg("n"), py::arg("points") = 12, py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>(),
      "End-to-end quadric certificate: sampled torus/sphere regions, the "
      "default registry (critical-point evidence for the positive factors), "
      "and the separation verdicts.");

  // ------------------------------------------------------------------ suite
  py::class_<RunConfig>(m, "RunConfig",
                        "Configuration of the end-to-end suite runner.")
      .def(py::init<>())
      .def_readwrite("n_min", &RunConfig::n_min)
      .def_readwrite("n_max", &RunConfig::n_max)
      .def_readwrite("newton_starts", &RunConfig::newton_starts)
      .def_readwrite("gz_points", &RunConfig::gz_points)
      .def_readwrite("biran_pairs", &RunConfig::biran_pairs)
      .def_readwrite("flow_n_max", &RunConfig::flow_n_max)
      .def_readwrite("flow_count", &RunConfig::flow_count)
      .def_readwrite("flow_s_end", &RunConfig::flow_s_end)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("scalar_checks", &RunConfig::scalar_checks)
      .def_readwrite("out_dir", &RunConfig::out_dir)
      .def_readwrite("table_dir", &RunConfig::table_dir)
      .def_readwrite("table_override_qn", &RunConfig::table_override_qn);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("reference", &CheckResult::reference)
      .def_readonly("status", &CheckResult::status)
      .def_readonly("measured", &CheckResult::measured)
      .def_readonly("threshold", &CheckResult::threshold)
      .def_readonly("notes", &CheckResult::notes)
      .def("__repr__", [](const CheckResult& c) {
        return "CheckResult(" + c.name + ": " + c.status + ")";
      });

  py::class_<SuiteReport>(m, "SuiteReport")
      .def_readonly("config", &SuiteReport::config)
      .def_readonly("checks", &SuiteReport::checks)
      .def_readonly("failures", &SuiteReport::failures)
      .def_readonly("skips", &SuiteReport::skips)
      .def_readonly("passed", &SuiteReport::pass)
      .def_readonly("body_hash", &SuiteReport::body_hash);

  m.def(
      "parse_run_config",
      [](const std::string& text, const std::string& origin) {
        std::istringstream in(text);
        return parse_run_config(in, origin);
      },
      py::arg("text"), py::arg("origin") = "<string>",
      "Parse flat 'key = value' config text.");
  m.def("load_run_config", &load_run_config, py::arg("path"));
  m.def("run_suite", &run_suite, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run every module's checks; deterministic for a fixed config.");
  m.def("suite_to_json", &suite_to_json, py::arg("report"));
  m.def("suite_exit_code", &suite_exit_code, py::arg("report"));
}
