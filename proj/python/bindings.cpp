#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kronpair/cli.hpp"
#include "kronpair/io.hpp"
#include "kronpair/kronecker.hpp"

namespace py = pybind11;
using namespace kronpair;

namespace {

// Everything crosses the boundary as canonical JSON text; the Python side
// decodes it. Rationals are "num/den" strings both ways.

std::pair<int, std::string> wrap(const CommandOutcome& o) { return {o.exit_code, dump_canonical(o.document)}; }

std::vector<BigInt> integers(const std::vector<std::string>& xs) {
  std::vector<BigInt> out;
  for (const auto& x : xs) out.push_back(integer_from_json(Json(x)));
  return out;
}

std::vector<BigRational> rationals(const std::vector<std::string>& xs) {
  std::vector<BigRational> out;
  for (const auto& x : xs) out.push_back(BigRational::parse(x));
  return out;
}

std::vector<UnitAngle> angles(const std::vector<std::string>& xs) {
  std::vector<UnitAngle> out;
  for (const auto& x : xs) out.push_back(UnitAngle::parse(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "KronpairError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object code = py::str(std::string(to_string(e.code())));
      PyErr_SetObject(error.ptr(), py::make_tuple(code, py::str(e.what())).ptr());
    }
  });

  m.def("construct", [](const std::string& config, std::optional<std::uint64_t> seed) {
    return wrap(cmd_construct(parse_json_text(config), seed));
  }, py::arg("config"), py::arg("seed") = py::none());

  m.def("verify", [](const std::string& doc) { return wrap(cmd_verify(parse_json_text(doc))); }, py::arg("document"));

  m.def("witness",
        [](const std::string& result, std::size_t mm, std::uint64_t seed, std::optional<std::size_t> budget,
           bool trivial, bool allow_extend) {
          WitnessOptions o;
          o.m = mm;
          o.seed = seed;
          o.budget = budget;
          o.trivial = trivial;
          o.allow_extend = allow_extend;
          return wrap(cmd_witness(parse_json_text(result), o));
        },
        py::arg("result"), py::arg("m"), py::arg("seed") = 1, py::arg("budget") = py::none(),
        py::arg("trivial") = false, py::arg("allow_extend") = true);

  m.def("oracle",
        [](const std::string& result, std::optional<std::uint64_t> grid, std::optional<std::uint64_t> cap) {
          return wrap(cmd_oracle(parse_json_text(result), OracleOptions{grid, cap}));
        },
        py::arg("result"), py::arg("grid") = py::none(), py::arg("cap") = py::none());

  m.def("hadamard_interpolate",
        [](const std::vector<std::string>& freqs, const std::vector<std::string>& targets, const std::string& q) {
          return dump_canonical(certificate_to_json(
              hadamard_interpolate(integers(freqs), angles(targets), BigRational::parse(q))));
        },
        py::arg("frequencies"), py::arg("targets"), py::arg("q"));

  m.def("ladder_interpolate",
        [](const std::vector<std::string>& lambdas, const std::vector<std::string>& shifts,
           const std::vector<std::string>& targets, const std::string& q) {
          const auto li = ladder_interpolate(rationals(lambdas), rationals(shifts), angles(targets),
                                             integer_from_json(Json(q)));
          return dump_canonical(Json{{"shifted", certificate_to_json(li.shifted.certificate)},
                                     {"unshifted", certificate_to_json(li.unshifted.certificate)}});
        },
        py::arg("lambdas"), py::arg("shifts"), py::arg("targets"), py::arg("q"));

  m.def("minimax_torus_grid",
        [](const std::vector<std::string>& freqs, const std::vector<std::string>& targets, std::uint64_t resolution) {
          const auto r = minimax_torus_grid(integers(freqs), angles(targets), resolution);
          return dump_canonical(Json{{"witness", witness_to_json(r.witness)},
                                     {"max_error", rational_to_json(r.max_error)},
                                     {"candidates", r.candidates}});
        },
        py::arg("frequencies"), py::arg("targets"), py::arg("resolution"));

  m.def("epsilon_q", [](const std::string& q) { return epsilon_q(integer_from_json(Json(q))).to_string(); });
  m.def("epsilon_q_chord", [](const std::string& q) { return epsilon_q_chord(integer_from_json(Json(q))); });
  m.def("circular_distance", [](const std::string& a, const std::string& b) {
    return circular_distance(UnitAngle::parse(a), UnitAngle::parse(b)).to_string();
  });
  m.def("chord_approx", [](const std::string& d) { return chord_approx(BigRational::parse(d)); });
}
