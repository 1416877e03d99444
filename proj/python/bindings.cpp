#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swapschur/cli.hpp"
#include "swapschur/markov.hpp"
#include "swapschur/purify.hpp"
#include "swapschur/rep.hpp"
#include "swapschur/sim.hpp"

namespace py = pybind11;
using namespace swapschur;

namespace {

HalfSpin spin(int two_j) { return HalfSpin::from_twice(two_j); }

/// Arbitrary-size integers cross the boundary through their decimal text.
py::int_ to_py(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

py::tuple to_py(const Rational& r) {
  return py::make_tuple(to_py(numerator(r)), to_py(denominator(r)));
}

int qubits_of(const Matrix& m) {
  int k = 0;
  while ((Eigen::Index{1} << k) < m.rows()) ++k;
  if ((Eigen::Index{1} << k) != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("expected a square 2^k x 2^k matrix");
  }
  return k;
}

DensityOperator as_state(const Matrix& m) { return DensityOperator(qubits_of(m), m); }

}  // namespace

PYBIND11_MODULE(_swapschur, m) {
  m.doc() = "Random SWAP-test purification: exact chain, bounds and small-n simulation";
  m.attr("__version__") = SWAPSCHUR_VERSION;

  // repcore
  m.def("sectors", [](int n) {
    py::list rows;
    for (const auto& r : sectors(n).rows) {
      rows.append(py::make_tuple(r.j.twice(), r.irrep_dim, to_py(r.multiplicity)));
    }
    return rows;
  }, py::arg("n"), "List of (two_j, 2j+1, multiplicity) for n qubits, j ascending.");
  m.def("multiplicity", [](int n, int two_j) { return to_py(multiplicity(n, spin(two_j))); },
        py::arg("n"), py::arg("two_j"));
  m.def("log_multiplicity", [](int n, int two_j) { return log_multiplicity(n, spin(two_j)); },
        py::arg("n"), py::arg("two_j"));
  m.def("detect_prob_exact", [](int two_jp, int two_j) { return to_py(detect_prob_exact(spin(two_jp), spin(two_j))); },
        py::arg("two_j_prime"), py::arg("two_j"), "(numerator, denominator) of e_{j'}(j).");

  // markov
  m.def("prob_error", [](int n, int two_j, std::int64_t steps) {
    return markov::prob_error({n, spin(two_j)}, steps);
  }, py::arg("n"), py::arg("two_j"), py::arg("steps"));
  m.def("prob_error_curve", [](int n, int two_j, std::int64_t tmax) {
    return markov::prob_error_curve({n, spin(two_j)}, tmax);
  }, py::arg("n"), py::arg("two_j"), py::arg("tmax"));
  m.def("distribution", [](int n, int two_j, std::int64_t steps) {
    markov::ChainEvolver ev({n, spin(two_j)});
    ev.advance(steps);
    return ev.probs();
  }, py::arg("n"), py::arg("two_j"), py::arg("steps"), "Pr(j' = j + i | j, T) for i = 0, 1, ...");
  m.def("max_prob_error_curve", &markov::max_prob_error_curve, py::arg("n"), py::arg("tmax"));
  m.def("t_star", [](int n, int two_j) {
    const auto t = markov::t_star({n, spin(two_j)});
    return py::dict(py::arg("value") = t.value, py::arg("upper") = t.upper, py::arg("lower") = t.lower);
  }, py::arg("n"), py::arg("two_j"));
  m.def("p_star_exact", [](int n, int two_j) { return to_py(markov::p_star(n, spin(two_j))); },
        py::arg("n"), py::arg("two_j"));
  m.def("chernoff_tail", [](int n, int two_j, std::int64_t steps) {
    const auto b = markov::chernoff_tail({n, spin(two_j)}, steps);
    return py::make_tuple(b.value, b.in_regime);
  }, py::arg("n"), py::arg("two_j"), py::arg("steps"));
  m.def("required_T", &markov::required_T, py::arg("n"), py::arg("eps"));
  m.def("final_bound", [](int n, double steps) {
    const auto b = markov::final_bound(n, steps);
    return py::make_tuple(b.value, b.in_regime);
  }, py::arg("n"), py::arg("steps"));
  m.def("max_t_star_bound", &markov::max_t_star_bound, py::arg("n"));
  m.def("sample_chain", [](int n, int two_j, std::int64_t steps, std::int64_t trials, std::uint64_t seed) {
    Rng rng(seed);
    return markov::sample_chain({n, spin(two_j)}, steps, trials, rng).probs;
  }, py::arg("n"), py::arg("two_j"), py::arg("steps"), py::arg("trials"), py::arg("seed"));

  // purify
  m.def("sector_stats", [](int n, double p) {
    py::list rows;
    for (const auto& r : purify::sector_stats(n, purify::NoiseModel(p)).rows) {
      rows.append(py::dict(py::arg("two_j") = r.j.twice(), py::arg("weight") = r.weight,
                           py::arg("log_weight") = r.log_weight, py::arg("fidelity") = r.fidelity));
    }
    return rows;
  }, py::arg("n"), py::arg("p"));
  m.def("f_opt", [](int n, double p) { return purify::f_opt(n, purify::NoiseModel(p)); },
        py::arg("n"), py::arg("p"));
  m.def("f_opt_asymptotic", [](int n, double p) { return purify::f_opt_asymptotic(n, purify::NoiseModel(p)); },
        py::arg("n"), py::arg("p"));
  m.def("fidelity_curve", [](int n, double p, std::int64_t tmax) {
    const auto c = purify::fidelity_curve(n, purify::NoiseModel(p), tmax);
    std::vector<double> f, eps, exp_gap;
    for (const auto& r : c.rows) {
      f.push_back(r.fidelity);
      eps.push_back(r.eps);
      exp_gap.push_back(r.exp_gap.value);
    }
    return py::dict(py::arg("f") = f, py::arg("eps") = eps, py::arg("exp_gap") = exp_gap,
                    py::arg("f_opt") = c.f_opt, py::arg("marker") = c.marker);
  }, py::arg("n"), py::arg("p"), py::arg("tmax"));
  m.def("childs_comparison", [](double p, double eps) {
    const auto r = purify::childs_comparison(purify::NoiseModel(p), eps);
    return py::dict(py::arg("p") = r.p, py::arg("eps") = r.eps, py::arg("n_ours") = r.n_ours,
                    py::arg("swap_tests") = r.swap_tests, py::arg("n_baseline") = r.n_baseline);
  }, py::arg("p"), py::arg("eps"));
  m.def("mc_fidelity", [](int n, double p, std::int64_t steps, std::int64_t trials, std::uint64_t seed) {
    Rng rng(seed);
    const auto e = purify::mc_fidelity(n, purify::NoiseModel(p), steps, trials, rng);
    return py::make_tuple(e.mean, e.std_error);
  }, py::arg("n"), py::arg("p"), py::arg("steps"), py::arg("trials"), py::arg("seed"));

  // dense simulation
  m.def("twirl", [](const Matrix& rho) { return sim::twirl(as_state(rho)).matrix(); }, py::arg("rho"));
  m.def("run_protocol", [](const Matrix& rho, int steps) {
    std::vector<Matrix> out;
    for (const auto& b : sim::run_protocol(as_state(rho), steps).branches) out.push_back(b.matrix());
    return out;
  }, py::arg("rho"), py::arg("steps"), "Unnormalized branches indexed by detected singlets.");
  m.def("schur_channel", [](const Matrix& rho) {
    std::vector<std::pair<int, Matrix>> out;
    for (const auto& s : sim::schur_channel(as_state(rho)).sectors) out.emplace_back(s.j.twice(), s.block.matrix());
    return out;
  }, py::arg("rho"), "(two_j, unnormalized block on 2j qubits) for every sector.");
  m.def("depolarized_product", [](int n, double p) { return sim::depolarized_product(n, p).matrix(); },
        py::arg("n"), py::arg("p"));

  // cli
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs one command line; returns (exit_code, stdout, stderr).");

  py::register_exception<sim::NotPermutationInvariant>(m, "NotPermutationInvariant", PyExc_ValueError);
}
