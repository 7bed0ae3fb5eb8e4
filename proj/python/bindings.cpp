#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reflbound/bounds.hpp"
#include "reflbound/campaign.hpp"
#include "reflbound/gram.hpp"
#include "reflbound/numthy.hpp"
#include "reflbound/report.hpp"

namespace py = pybind11;
using namespace reflbound;

namespace {

bounds::CaseParams params(const std::string& a1, const std::string& a2, const std::string& b1,
                          const std::string& b2, std::int64_t s0) {
  return {parse_rational(a1), parse_rational(a2), parse_rational(b1), parse_rational(b2), s0};
}

template <class Point>
report::Json extrema_json(const gram::ExtremaResult<Point>& r, std::vector<double> amin, std::vector<double> amax) {
  report::Json j;
  j["min"] = r.min_value;
  j["max"] = r.max_value;
  j["argmin"] = amin;
  j["argmax"] = amax;
  j["residual_tol"] = r.residual_tol;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  return j;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Degree bounds for ground fields of arithmetic reflection groups";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InapplicableError>(m, "InapplicableError", PyExc_RuntimeError);
  py::register_exception<PrecisionFailure>(m, "PrecisionFailure", PyExc_ArithmeticError);

  m.def("euler_phi", [](std::uint64_t n) { return numthy::euler_phi(n); }, py::arg("n"));
  m.def("gamma", &numthy::gamma, py::arg("l"));
  m.def("gamma_tilde", &numthy::gamma_tilde, py::arg("l"));
  m.def("rho", &numthy::rho, py::arg("k"), py::arg("s"));
  m.def("degree_Fks", &numthy::degree_Fks, py::arg("k"), py::arg("s"));
  m.def("ln_disc_cyclotomic", [](std::int64_t l) { return numthy::ln_disc_cyclotomic(l).value; }, py::arg("l"));
  m.def("ln_disc_Fl", [](std::int64_t l) { return numthy::ln_disc_Fl(l).value; }, py::arg("l"));
  m.def("ln_disc_Fks", [](std::int64_t k, std::int64_t s) { return numthy::ln_disc_Fks(k, s).value; },
        py::arg("k"), py::arg("s"));
  m.def("disc_Fl_is_square", &numthy::disc_Fl_is_square, py::arg("l"));

  m.def(
      "verdict_json",
      [](const std::string& method, std::int64_t k, std::int64_t s, const std::string& a1, const std::string& a2,
         const std::string& b1, const std::string& b2, std::int64_t s0, int precision) {
        auto p = params(a1, a2, b1, b2, s0);
        NumericPolicy pol(precision);
        bool single = s == 0;
        bounds::CandidateVerdict v;
        if (method == "B") {
          v = single ? bounds::case1_methodB(k, p, pol) : bounds::case2_methodB(k, s, p, pol);
        } else if (method == "A") {
          v = single ? bounds::case1_methodA(k, p, pol) : bounds::case2_methodA(k, s, p, pol);
        } else {
          throw DomainError("method must be 'A' or 'B'");
        }
        return report::to_json(v).dump();
      },
      py::arg("method"), py::arg("k"), py::arg("s"), py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"),
      py::arg("s0") = 3, py::arg("precision") = 53);

  m.def("fekete_min_n0",
        [](std::int64_t M, double lnB, double lnInvR, double lnS) {
          return bounds::fekete_min_n0({M, {lnB, 53}, lnInvR, lnS});
        },
        py::arg("M"), py::arg("lnB"), py::arg("lnInvR"), py::arg("lnS"));

  m.def(
      "quad_extrema_json",
      [](int grid, int refine, std::uint64_t seed) {
        py::gil_scoped_release nogil;
        auto r = gram::quad_extrema(grid, refine, seed);
        return extrema_json(r, {r.argmin.b13, r.argmin.b14, r.argmin.b23, r.argmin.b24},
                            {r.argmax.b13, r.argmax.b14, r.argmax.b23, r.argmax.b24})
            .dump();
      },
      py::arg("grid") = gram::kDefaultGrid, py::arg("refine") = gram::kDefaultRefine,
      py::arg("seed") = gram::kDefaultSeed);
  m.def(
      "pent_extrema_json",
      [](int grid, int refine, std::uint64_t seed) {
        py::gil_scoped_release nogil;
        auto r = gram::pent_extrema(grid, refine, seed);
        auto c = [](const gram::GramPentPoint& p) { return std::vector<double>{p.c, p.b13, p.b14, p.b24, p.b25, p.b35}; };
        return extrema_json(r, c(r.argmin), c(r.argmax)).dump();
      },
      py::arg("grid") = gram::kDefaultGrid, py::arg("refine") = gram::kDefaultRefine,
      py::arg("seed") = gram::kDefaultSeed);
  m.def("quad_det4", [](double b13, double b14, double b23, double b24) {
    return gram::quad_det4({b13, b14, b23, b24});
  });

  m.def(
      "campaign_json",
      [](const std::string& name, int workers, int precision, std::optional<std::int64_t> target, bool timing) {
        campaign::RunOptions opt;
        opt.workers = workers > 0 ? workers : campaign::default_workers();
        opt.policy = NumericPolicy(precision);
        opt.target_override = target;
        py::gil_scoped_release nogil;
        return report::to_json(campaign::run(name, opt), timing).dump();
      },
      py::arg("name"), py::arg("workers") = 0, py::arg("precision") = 53, py::arg("target") = py::none(),
      py::arg("timing") = true);
}
