#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shieldsim/bands.hpp"
#include "shieldsim/config.hpp"
#include "shieldsim/errors.hpp"
#include "shieldsim/experiments.hpp"
#include "shieldsim/observables.hpp"
#include "shieldsim/perturbation.hpp"
#include "shieldsim/zeno.hpp"

namespace py = pybind11;
using namespace shieldsim;

namespace {

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "z") return Axis::Z;
  throw py::value_error("basis must be 'x' or 'z'");
}

PropagatorChoice parse_choice(const std::string& s) {
  if (s == "auto") return PropagatorChoice::Auto;
  if (s == "dense") return PropagatorChoice::Dense;
  if (s == "cheby") return PropagatorChoice::Chebyshev;
  throw py::value_error("propagator must be 'auto', 'dense' or 'cheby'");
}

int sites_of(std::size_t dim) {
  int sites = 0;
  while ((std::size_t{1} << sites) < dim) ++sites;
  if ((std::size_t{1} << sites) != dim) throw py::value_error("state length must be a power of two");
  return sites;
}

StateVector to_state(const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a, Axis axis) {
  if (a.ndim() != 1) throw py::value_error("state must be one-dimensional");
  std::vector<cplx> amps(a.data(), a.data() + a.size());
  const int sites = sites_of(amps.size());
  return StateVector(sites, axis, std::move(amps));
}

py::array_t<cplx> to_array(const StateVector& psi) {
  py::array_t<cplx> out(psi.dimension());
  std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), out.mutable_data());
  return out;
}

DisorderRealization realization_from(const ModelParams& p, const std::vector<double>& fields) {
  if (fields.empty()) return clean_realization(p.sites);
  DisorderRealization h;
  h.fields = fields;
  if (static_cast<int>(fields.size()) != p.sites) throw py::value_error("fields length differs from L");
  return h;
}

py::dict table_dict(const Table& t) {
  py::dict d;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact dynamics of long-range spin-1/2 chains";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<NoCrossingError>(m, "NoCrossingError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int L, double B, double W, double J, double Jz, double alpha) {
             ModelParams p{L, B, W, J, Jz, alpha};
             p.validate();
             return p;
           }),
           py::arg("L"), py::arg("B") = 0.0, py::arg("W") = 0.0, py::arg("J") = 1.0, py::arg("Jz") = 0.0,
           py::arg("alpha") = 0.0)
      .def_readwrite("L", &ModelParams::sites)
      .def_readwrite("B", &ModelParams::field)
      .def_readwrite("W", &ModelParams::disorder_width)
      .def_readwrite("J", &ModelParams::coupling)
      .def_readwrite("Jz", &ModelParams::zz_coupling)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s << "ModelParams(L=" << p.sites << ", B=" << p.field << ", W=" << p.disorder_width << ", J=" << p.coupling
          << ", Jz=" << p.zz_coupling << ", alpha=" << p.alpha << ")";
        return s.str();
      });

  m.def("band_energy", &band_energy, py::arg("L"), py::arg("J"), py::arg("b"));
  m.def("band_dimension", [](int L, int b) { return enumerate_band(L, b).size(); }, py::arg("L"), py::arg("b"));
  m.def("sample_disorder",
        [](const ModelParams& p, std::uint64_t seed, std::uint64_t index) {
          return sample_disorder(p, seed, index).fields;
        },
        py::arg("params"), py::arg("seed"), py::arg("index"));

  m.def("hamiltonian_dense",
        [](const ModelParams& p, const std::vector<double>& fields, const std::string& basis) {
          const auto h = realization_from(p, fields);
          return dense_matrix(parse_axis(basis) == Axis::X ? build_terms_x(p, h) : build_terms(p, h));
        },
        py::arg("params"), py::arg("fields") = std::vector<double>{}, py::arg("basis") = "x");
  m.def("zeno_dense",
        [](const ModelParams& p, const std::vector<double>& fields) {
          const BandTable table(p.sites, p.coupling, p.alpha);
          return build_zeno(p, realization_from(p, fields), table).op().to_dense();
        },
        py::arg("params"), py::arg("fields") = std::vector<double>{});

  m.def("basis_rotate",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& psi, const std::string& from,
           const std::string& to) { return to_array(basis_rotate(to_state(psi, parse_axis(from)), parse_axis(to))); },
        py::arg("psi"), py::arg("source"), py::arg("target"));

  m.def("random_band_state",
        [](int L, int b, std::uint64_t seed, bool include_mirror) {
          const BandTable table(L, 1.0, 0.0);
          return to_array(random_band_state(table, b, seed, include_mirror));
        },
        py::arg("L"), py::arg("b"), py::arg("seed"), py::arg("include_mirror") = true);

  m.def("band_weights",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& psi) {
          const StateVector s = to_state(psi, Axis::X);
          return band_weights(BandTable(s.sites(), 1.0, 0.0), s);
        },
        py::arg("psi"));

  m.def("sigma_x_profile",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& psi, const std::string& basis) {
          return sigma_x_profile(to_state(psi, parse_axis(basis)));
        },
        py::arg("psi"), py::arg("basis") = "x");

  m.def("evolve",
        [](const ModelParams& p, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& psi0,
           const std::vector<double>& times, const std::vector<double>& fields, const std::string& propagator,
           double tol, bool zeno) {
          const auto h = realization_from(p, fields);
          const StateVector s0 = to_state(psi0, Axis::X);
          if (s0.sites() != p.sites) throw py::value_error("state length differs from 2^L");
          const TimeGrid grid(times);
          py::array_t<cplx> out({grid.size(), s0.dimension()});
          cplx* dst = out.mutable_data();
          auto store = [&](std::size_t k, double, const StateVector& psi) {
            std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), dst + k * psi.dimension());
          };
          py::gil_scoped_release release;
          if (zeno) {
            const BandTable table(p.sites, p.coupling, p.alpha);
            evolve_zeno(build_zeno(p, h, table), s0, grid, store, parse_choice(propagator), tol);
          } else {
            auto op = std::make_shared<const SparseOperator>(build_terms_x(p, h));
            make_propagator(op, parse_choice(propagator), tol)->evolve(s0, grid, store);
          }
          return out;
        },
        py::arg("params"), py::arg("psi0"), py::arg("times"), py::arg("fields") = std::vector<double>{},
        py::arg("propagator") = "auto", py::arg("tol") = 1e-12, py::arg("zeno") = false,
        "Evolves an x-basis state; returns one row per time.");

  m.def("t_half", [](const std::vector<double>& t, const std::vector<double>& f) { return t_half(t, f); });
  m.def("reversal_time",
        [](const std::vector<double>& t, const std::vector<double>& s) { return reversal_time(t, s); });

  m.def("coupling_eps", &coupling_eps, py::arg("W"));
  m.def("band_gap", &band_gap, py::arg("L"), py::arg("J"), py::arg("b"), py::arg("b2"));
  m.def("pleak_field_estimate", &pleak_field_estimate, py::arg("L"), py::arg("J"), py::arg("W"), py::arg("b"));
  m.def("pleak_nn_estimate", &pleak_nn_estimate, py::arg("L"), py::arg("J"), py::arg("Jz"));
  m.def("deltaE_estimate", &deltaE_estimate, py::arg("L"), py::arg("J"), py::arg("W"), py::arg("b"));
  m.def("t_half_estimate", &t_half_estimate, py::arg("L"), py::arg("J"), py::arg("W"), py::arg("b"),
        py::arg("c1"));
  m.def("build_C_matrix",
        [](const std::vector<double>& fields, int L, double J) {
          DisorderRealization h;
          h.fields = fields;
          return build_C_matrix(h, L, J);
        },
        py::arg("fields"), py::arg("L"), py::arg("J") = 1.0);

  m.def("run_experiment_text",
        [](const std::string& text, int threads) {
          std::istringstream in(text);
          const ExperimentConfig cfg = parse_config(in);
          RunOptions opts;
          opts.threads = threads;
          ExperimentOutput out;
          {
            py::gil_scoped_release release;
            out = run_experiment(cfg, opts);
          }
          py::dict tables;
          for (const auto& [suffix, t] : out.tables) tables[py::str(suffix)] = table_dict(t);
          py::dict result;
          result["name"] = out.name;
          result["summary_json"] = out.summary.dump();
          result["tables"] = tables;
          result["warnings"] = out.warnings;
          return result;
        },
        py::arg("text"), py::arg("threads") = 1);

  m.attr("__version__") = version_string();
  m.attr("RNG_ALGORITHM") = std::string(CounterRng::kAlgorithm);
}
