// Python bindings for the label-function library. Heavy solver entry points
// release the GIL; callback-driven ones (weighted_birkhoff) keep it.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maplabel/boundary.hpp"
#include "maplabel/detail/io.hpp"
#include "maplabel/errors.hpp"
#include "maplabel/geometry.hpp"
#include "maplabel/kernels.hpp"
#include "maplabel/maps.hpp"
#include "maplabel/model.hpp"
#include "maplabel/sampling.hpp"
#include "maplabel/solver_bvp.hpp"
#include "maplabel/solver_evp.hpp"
#include "maplabel/validation.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace maplabel;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Smooth, approximately invariant label functions of 2D symplectic maps";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<Topology>(m, "Topology")
        .value("plane", Topology::plane)
        .value("cylinder", Topology::cylinder);

    py::class_<State>(m, "State")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &State::x)
        .def_readwrite("y", &State::y)
        .def("__repr__", [](const State& s) {
            return "State(" + detail::format_double(s.x) + ", " +
                   detail::format_double(s.y) + ")";
        });

    py::class_<Domain>(m, "Domain")
        .def(py::init([](Topology topology, double x_lo, double x_hi, double y_lo,
                         double y_hi) {
                 const Domain d{topology, x_lo, x_hi, y_lo, y_hi};
                 d.validate();
                 return d;
             }),
             py::arg("topology"), py::arg("x_lo"), py::arg("x_hi"), py::arg("y_lo"),
             py::arg("y_hi"))
        .def_readonly("topology", &Domain::topology)
        .def_readonly("x_lo", &Domain::x_lo)
        .def_readonly("x_hi", &Domain::x_hi)
        .def_readonly("y_lo", &Domain::y_lo)
        .def_readonly("y_hi", &Domain::y_hi)
        .def("contains", [](const Domain& d, const State& s) { return in_domain(s, d); },
             py::arg("state"));

    py::class_<Region>(m, "Region")
        .def_static("lower_strip", &Region::lower_strip, py::arg("y_max"))
        .def_static("upper_strip", &Region::upper_strip, py::arg("y_min"))
        .def_static("rect_complement", &Region::rect_complement, py::arg("x_lo"),
                    py::arg("x_hi"), py::arg("y_lo"), py::arg("y_hi"))
        .def_static("union_of", &Region::union_of, py::arg("parts"))
        .def("contains", &Region::contains, py::arg("state"))
        .def("indicator", &Region::indicator, py::arg("state"));

    py::class_<MapSpec>(m, "MapSpec")
        .def_static("standard", &MapSpec::standard, py::arg("k"))
        .def_static("pendulum", &MapSpec::pendulum)
        .def_static("perturbed_pendulum", &MapSpec::perturbed_pendulum)
        .def("apply", &MapSpec::apply, py::arg("state"))
        .def_property_readonly("type", &MapSpec::type)
        .def_property_readonly("k", &MapSpec::k)
        .def_property_readonly("topology", &MapSpec::topology);

    m.def("iterate", &iterate, py::arg("map"), py::arg("state"), py::arg("steps"),
          py::call_guard<py::gil_scoped_release>(),
          "Iterate a map; returns the seed plus `steps` images.");
    m.def("sobol_sample", &sobol_sample, py::arg("domain"), py::arg("n"),
          py::arg("skip") = 1, "Low-discrepancy states inside a domain.");

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init([](const std::string& family, double sigma) {
                 const KernelSpec k{family, sigma};
                 k.validate();
                 return k;
             }),
             py::arg("family"), py::arg("sigma"))
        .def_readonly("family", &KernelSpec::family)
        .def_readonly("sigma", &KernelSpec::sigma);

    m.def("sigma_from_density", &sigma_from_density, py::arg("sigma0"), py::arg("N"),
          "Kernel width that shrinks with sample count: sigma0 / sqrt(N).");
    m.def("eval_kernel", &eval_kernel, py::arg("kernel"), py::arg("p"), py::arg("q"),
          py::arg("topology"));
    m.def("kernel_matrix", &kernel_matrix, py::arg("kernel"), py::arg("points"),
          py::arg("topology"), py::call_guard<py::gil_scoped_release>());

    py::class_<BoundarySpec>(m, "BoundarySpec")
        .def_static("indicator_strips", &BoundarySpec::indicator_strips, py::arg("a"),
                    py::arg("b"), py::arg("beta"), py::arg("h_a") = -1.0,
                    py::arg("h_b") = 1.0)
        .def_static("smoothed_strips", &BoundarySpec::smoothed_strips, py::arg("a"),
                    py::arg("b"), py::arg("alpha"), py::arg("beta"), py::arg("h_a") = -1.0,
                    py::arg("h_b") = 1.0)
        .def_static("zero_region", &BoundarySpec::zero_region, py::arg("region"))
        .def_readonly("type", &BoundarySpec::type);

    m.def("eval_boundary",
          [](const BoundarySpec& spec, const State& p) {
              const BoundaryValue v = eval_boundary(spec, p);
              return std::make_pair(v.h_bd, v.w_bd);
          },
          py::arg("boundary"), py::arg("state"),
          "Boundary target and weight (h_bd, w_bd) at a state.");

    py::class_<SampleSet>(m, "SampleSet")
        .def_readonly("z", &SampleSet::z)
        .def_readonly("N", &SampleSet::N)
        .def_readonly("domain", &SampleSet::domain)
        .def_readonly("sobol_skip", &SampleSet::sobol_skip)
        .def_readonly("map_type", &SampleSet::map_type)
        .def_readonly("map_k", &SampleSet::map_k)
        .def("point", &SampleSet::point, py::arg("n"))
        .def("image", &SampleSet::image, py::arg("n"));

    m.def("build_samples", &build_samples, py::arg("map"), py::arg("domain"), py::arg("N"),
          py::arg("skip") = 1, py::call_guard<py::gil_scoped_release>(),
          "Sample N states and their images: z[n] is the state, z[N+n] its image.");

    py::class_<ResidualReport>(m, "ResidualReport")
        .def_readonly("R", &ResidualReport::R)
        .def_readonly("E_inv", &ResidualReport::E_inv)
        .def_readonly("E_bd", &ResidualReport::E_bd)
        .def_readonly("E_K", &ResidualReport::E_K)
        .def_readonly("epsilon", &ResidualReport::epsilon)
        .def("__repr__", [](const ResidualReport& r) {
            return "ResidualReport(R=" + detail::format_double(r.R) +
                   ", E_inv=" + detail::format_double(r.E_inv) +
                   ", E_bd=" + detail::format_double(r.E_bd) +
                   ", E_K=" + detail::format_double(r.E_K) + ")";
        });

    py::class_<LabelModel>(m, "LabelModel")
        .def(py::init<>())
        .def_readwrite("kernel", &LabelModel::kernel)
        .def_readwrite("topology", &LabelModel::topology)
        .def_readwrite("centers", &LabelModel::centers)
        .def_readwrite("coefficients", &LabelModel::coefficients)
        .def_readwrite("normalization", &LabelModel::normalization);

    m.def("solve_bvp", &solve_bvp, py::arg("samples"), py::arg("kernel"),
          py::arg("boundary"), py::arg("epsilon"),
          py::call_guard<py::gil_scoped_release>(),
          "Fit a label to boundary data; returns (model, report).");
    m.def("residual_components", &residual_components, py::arg("model"),
          py::arg("samples"), py::arg("boundary"), py::arg("epsilon"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<EvpPair>(m, "EvpPair")
        .def_readonly("eigenvalue", &EvpPair::lambda)
        .def_readonly("h", &EvpPair::h)
        .def_readonly("c", &EvpPair::c);

    py::class_<EigenResult>(m, "EigenResult")
        .def_readonly("pairs", &EigenResult::pairs)
        .def_readonly("shift_delta", &EigenResult::shift_delta)
        .def_readonly("epsilon", &EigenResult::epsilon)
        .def_readonly("iterations", &EigenResult::iterations)
        .def_readonly("s_jitter", &EigenResult::s_jitter)
        .def_property_readonly("eigenvalues", [](const EigenResult& r) {
            std::vector<double> out;
            out.reserve(r.pairs.size());
            for (const EvpPair& p : r.pairs) out.push_back(p.lambda);
            return out;
        });

    m.def("solve_evp", &solve_evp, py::arg("samples"), py::arg("kernel"),
          py::arg("boundary"), py::arg("epsilon"), py::arg("delta") = 1e-8,
          py::arg("n_eigs") = 1, py::arg("kernel_jitter") = 0.0,
          py::call_guard<py::gil_scoped_release>(),
          "Smallest Rayleigh-quotient eigenpairs; pairs are ascending in eigenvalue.");
    m.def("rayleigh_quotient", &rayleigh_quotient, py::arg("c"), py::arg("K"),
          py::arg("w_bd"), py::arg("epsilon"));

    m.def("eval_label", &eval_label, py::arg("model"), py::arg("state"));
    m.def("normalize_maxabs", &normalize_maxabs, py::arg("model"), py::arg("domain"),
          py::arg("nx") = 200, py::arg("ny") = 200,
          py::call_guard<py::gil_scoped_release>(),
          "Rescale so the max |label| over a probe grid is 1.");

    py::class_<LabelGrid>(m, "LabelGrid")
        .def_readonly("nx", &LabelGrid::nx)
        .def_readonly("ny", &LabelGrid::ny)
        .def_readonly("x", &LabelGrid::x)
        .def_readonly("y", &LabelGrid::y)
        .def_readonly("values", &LabelGrid::values);

    m.def("eval_grid", &eval_grid, py::arg("model"), py::arg("domain"), py::arg("nx"),
          py::arg("ny"), py::call_guard<py::gil_scoped_release>(),
          "Cell-center evaluation; values[j * nx + i] pairs with (x[i], y[j]).");
    m.def("save_grid_csv", &save_grid_csv, py::arg("grid"), py::arg("path"));

    py::class_<ModelProvenance>(m, "ModelProvenance")
        .def(py::init([](std::string map, const Domain& domain, std::size_t N,
                         double epsilon, std::uint64_t sobol_skip) {
                 ModelProvenance p;
                 p.map = std::move(map);
                 p.domain = domain;
                 p.N = N;
                 p.epsilon = epsilon;
                 p.sobol_skip = sobol_skip;
                 return p;
             }),
             py::arg("map"), py::arg("domain"), py::arg("N"), py::arg("epsilon"),
             py::arg("sobol_skip"))
        .def_readonly("map", &ModelProvenance::map)
        .def_readonly("domain", &ModelProvenance::domain)
        .def_readonly("N", &ModelProvenance::N)
        .def_readonly("epsilon", &ModelProvenance::epsilon)
        .def_readonly("sobol_skip", &ModelProvenance::sobol_skip);

    m.def("save_model", &save_model, py::arg("model"), py::arg("provenance"),
          py::arg("path"));
    m.def("load_model",
          [](const std::string& path) {
              ModelProvenance prov;
              LabelModel model = load_model(path, &prov);
              return std::make_pair(std::move(model), std::move(prov));
          },
          py::arg("path"), "Load a saved model; returns (model, provenance).");

    m.def("birkhoff_weights", &birkhoff_weights, py::arg("T"),
          "Exponential-bump trajectory weights; they sum to 1.");
    m.def("weighted_birkhoff",
          [](const MapSpec& map, const Observable& f, const State& x0, std::size_t T) {
              return weighted_birkhoff(map, f, x0, BirkhoffConfig{.T = T});
          },
          py::arg("map"), py::arg("f"), py::arg("x0"), py::arg("T") = 100,
          "Weighted average of f along a trajectory of length T.");

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("S", &ValidationReport::S)
        .def_readonly("pairs", &ValidationReport::pairs)
        .def_readonly("J", &ValidationReport::J)
        .def_readonly("T", &ValidationReport::T);

    m.def("validation_score",
          [](const LabelModel& model, const MapSpec& map, const Domain& domain,
             std::size_t J, std::size_t T, std::uint64_t skip) {
              return validation_score(model, map, domain, J, BirkhoffConfig{.T = T}, skip);
          },
          py::arg("model"), py::arg("map"), py::arg("domain"), py::arg("J"),
          py::arg("T") = 100, py::arg("skip") = 65537,
          py::call_guard<py::gil_scoped_release>(),
          "Invariance score S on held-out points: 0 is invariant, 1 is uninformative.");
    m.def("score_from_pairs", &score_from_pairs, py::arg("pairs"));
}
