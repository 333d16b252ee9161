#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdsgd/bounds.hpp"
#include "hdsgd/inequalities.hpp"
#include "hdsgd/norms.hpp"
#include "hdsgd/problems.hpp"
#include "hdsgd/sgd.hpp"
#include "hdsgd/verify.hpp"

namespace py = pybind11;

namespace hdsgd {
namespace {

// The randomized sweep drivers are exported as sweep_* so the names do not
// collide with pytest's test discovery when imported into a test module.
void bind_property(py::module_& m) {
  py::class_<PropertyResult>(m, "PropertyResult")
      .def_readonly("trials", &PropertyResult::trials)
      .def_readonly("violations", &PropertyResult::violations)
      .def_readonly("worst_margin", &PropertyResult::worst_margin)
      .def_property_readonly("ok", &PropertyResult::pass)
      .def("__repr__", [](const PropertyResult& r) {
        return "PropertyResult(trials=" + std::to_string(r.trials) +
               ", violations=" + std::to_string(r.violations) + ")";
      });

  m.def("check_taylor_remainder", &check_taylor_remainder, py::arg("x"),
        py::arg("z"), py::arg("alpha"), py::arg("s"), py::arg("q"));
  m.def("sweep_taylor_remainder", &test_taylor_remainder, py::arg("trials"),
        py::arg("seed"));
  m.def("sweep_rio", &test_rio, py::arg("instances"), py::arg("seed"));
  m.def("sweep_maximal", &test_maximal, py::arg("instances"), py::arg("seed"));
  m.def("sweep_norm_equivalence", &test_norm_equivalence,
        py::arg("trials_per_dim"), py::arg("dims"), py::arg("seed"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Closed-form rate/bound layer and chain drivers for constant-rate SGD "
      "and its running average";

  m.def("choose_s_d", &choose_s_d, py::arg("d"),
        "Smallest even s with s > ln(d)");
  m.def("max_norm", &max_norm, py::arg("x"));
  m.def("ls_norm", &ls_norm, py::arg("x"), py::arg("s"));
  m.def("lp_norm", &lp_norm, py::arg("x"), py::arg("p"));
  m.def("gershgorin_gap", &gershgorin_gap, py::arg("sigma"));

  m.def("alpha_max", &alpha_max, py::arg("mu"), py::arg("L"), py::arg("s"),
        py::arg("q"));
  m.def("contraction_rate", &contraction_rate, py::arg("mu"), py::arg("L"),
        py::arg("s"), py::arg("q"), py::arg("alpha"));
  m.def("norm_contraction_rate", &norm_contraction_rate, py::arg("mu"),
        py::arg("L"), py::arg("s"), py::arg("q"), py::arg("alpha"));
  m.def("tilde_contraction_rate", &tilde_contraction_rate, py::arg("mu"),
        py::arg("L"), py::arg("s"), py::arg("q"), py::arg("alpha"));
  m.def("alpha_root", &alpha_root, py::arg("mu"), py::arg("L"), py::arg("s"),
        py::arg("q"));
  m.def("fuk_nagaev_bound", &fuk_nagaev_bound, py::arg("z"), py::arg("k"),
        py::arg("alpha"), py::arg("d"), py::arg("q"), py::arg("M"),
        py::arg("delta0"), py::arg("fitted_constant"));
  m.def("high_prob_radius", &high_prob_radius, py::arg("delta"), py::arg("k"),
        py::arg("alpha"), py::arg("d"), py::arg("q"), py::arg("M"),
        py::arg("delta0"));
  m.def("burn_in_steps", &burn_in_steps, py::arg("r_hat"), py::arg("D0"),
        py::arg("tol"));

  py::class_<AsgdBoundTerms>(m, "AsgdBoundTerms")
      .def_readonly("variance_term", &AsgdBoundTerms::variance_term)
      .def_readonly("init_term", &AsgdBoundTerms::init_term)
      .def_readonly("bias_term", &AsgdBoundTerms::bias_term)
      .def_readonly("total", &AsgdBoundTerms::total)
      .def_readonly("up_to_constants", &AsgdBoundTerms::up_to_constants);
  m.def("asgd_bound_terms", &asgd_bound_terms, py::arg("M"), py::arg("L"),
        py::arg("mu"), py::arg("d"), py::arg("q"), py::arg("s"),
        py::arg("alpha"), py::arg("k"), py::arg("delta0"));

  py::class_<ComplexityRecipe>(m, "ComplexityRecipe")
      .def_readonly("s_d", &ComplexityRecipe::s_d)
      .def_readonly("V", &ComplexityRecipe::V)
      .def_readonly("B", &ComplexityRecipe::B)
      .def_readonly("alpha_rec", &ComplexityRecipe::alpha_rec)
      .def_readonly("k_rec", &ComplexityRecipe::k_rec)
      .def_readonly("up_to_constants", &ComplexityRecipe::up_to_constants);
  m.def("complexity", &complexity, py::arg("epsilon"), py::arg("M"),
        py::arg("L"), py::arg("mu"), py::arg("d"), py::arg("q"),
        py::arg("delta0"));

  py::enum_<CovariateLaw>(m, "CovariateLaw")
      .value("gaussian", CovariateLaw::kGaussian)
      .value("sub_exponential", CovariateLaw::kSubExponential)
      .value("student_t", CovariateLaw::kStudentT)
      .value("constant", CovariateLaw::kConstant);
  py::enum_<NoiseLaw>(m, "NoiseLaw")
      .value("gaussian", NoiseLaw::kGaussian)
      .value("student_t", NoiseLaw::kStudentT);
  py::enum_<Provenance>(m, "Provenance")
      .value("analytic", Provenance::kAnalytic)
      .value("gershgorin", Provenance::kGershgorin)
      .value("monte_carlo", Provenance::kMonteCarlo);

  py::class_<ConstantEstimate>(m, "ConstantEstimate")
      .def_readonly("value", &ConstantEstimate::value)
      .def_readonly("se", &ConstantEstimate::se)
      .def_readonly("replications", &ConstantEstimate::replications)
      .def_readonly("provenance", &ConstantEstimate::provenance)
      .def("__repr__", [](const ConstantEstimate& c) {
        return "ConstantEstimate(value=" + std::to_string(c.value) +
               ", se=" + std::to_string(c.se) + ")";
      });

  py::class_<Problem, std::shared_ptr<Problem>>(m, "Problem")
      .def("dim", &Problem::dim)
      .def("name", &Problem::name)
      .def(
          "beta_star", [](const Problem& p) -> Vector { return p.beta_star(); })
      .def("population_gradient",
           [](const Problem& p, const Vector& beta) -> Vector {
             return p.population_gradient(beta);
           },
           py::arg("beta"))
      .def("analytic_mu", &Problem::analytic_mu)
      .def("estimate_L", &Problem::estimate_L, py::arg("s"), py::arg("q"),
           py::arg("replications"), py::arg("seed"))
      .def("estimate_M", &Problem::estimate_M, py::arg("s"), py::arg("q"),
           py::arg("replications"), py::arg("seed"));

  py::class_<LinearRegression, Problem, std::shared_ptr<LinearRegression>>(
      m, "LinearRegression")
      .def(py::init<Matrix, Vector, CovariateLaw, int, NoiseLaw, double, int>(),
           py::arg("sigma"), py::arg("beta_star"),
           py::arg("covariate_law") = CovariateLaw::kGaussian,
           py::arg("covariate_nu") = 0,
           py::arg("noise_law") = NoiseLaw::kGaussian,
           py::arg("noise_scale") = 1.0, py::arg("noise_nu") = 0)
      .def("covariance",
           [](const LinearRegression& p) -> Matrix { return p.covariance(); });

  py::class_<TanhProblem, Problem, std::shared_ptr<TanhProblem>>(m,
                                                                 "TanhProblem")
      .def(py::init<long, double, double, NoiseLaw, double, int>(),
           py::arg("d"), py::arg("rho"), py::arg("shift") = 0.0,
           py::arg("noise_law") = NoiseLaw::kGaussian,
           py::arg("noise_scale") = 1.0, py::arg("noise_nu") = 0)
      .def("rho", &TanhProblem::rho)
      .def("shift", &TanhProblem::shift);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("ks", &Trajectory::ks)
      .def_readonly("beta", &Trajectory::beta)
      .def_readonly("mean", &Trajectory::mean);
  m.def("run_chain", &run_chain, py::arg("problem"), py::arg("alpha"),
        py::arg("beta0"), py::arg("k_max"), py::arg("seed"),
        py::arg("checkpoints"),
        "Constant-rate chain; records iterate and running average at each "
        "checkpoint");

  py::class_<CoupledRun>(m, "CoupledRun")
      .def_readonly("iterate_distance", &CoupledRun::iterate_distance)
      .def_readonly("checkpoint_ks", &CoupledRun::checkpoint_ks)
      .def_readonly("mean_gap", &CoupledRun::mean_gap);
  m.def("run_coupled_pair", &run_coupled_pair, py::arg("problem"),
        py::arg("alpha"), py::arg("beta0_a"), py::arg("beta0_b"),
        py::arg("k_max"), py::arg("seed"), py::arg("s"), py::arg("checkpoints"),
        "Two chains on one sample path; distances in the l^s norm");

  m.def("default_init", &default_init, py::arg("problem"), py::arg("seed"));

  py::class_<RunConstants>(m, "RunConstants")
      .def_readonly("mu", &RunConstants::mu)
      .def_readonly("L", &RunConstants::L)
      .def_readonly("M", &RunConstants::M)
      .def_readonly("s", &RunConstants::s)
      .def_readonly("q", &RunConstants::q)
      .def_readonly("alpha_max", &RunConstants::alpha_max);
  m.def("estimate_constants", &estimate_constants, py::arg("problem"),
        py::arg("s"), py::arg("q"), py::arg("replications"), py::arg("seed"));

  bind_property(m);
}

}  // namespace hdsgd
