#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "collapselab/analytic.hpp"
#include "collapselab/config.hpp"
#include "collapselab/csv.hpp"
#include "collapselab/mc_categorical.hpp"
#include "collapselab/model_zoo.hpp"
#include "collapselab/runner.hpp"
#include "collapselab/schedules.hpp"
#include "collapselab/stats.hpp"

namespace py = pybind11;
using namespace collapselab;

namespace {

AlphaSchedule alpha_from_kwargs(const std::string& kind, py::kwargs kwargs) {
  auto get = [&](const char* key) { return kwargs[key].cast<double>(); };
  if (kind == "constant") return AlphaSchedule::constant(get("a0"));
  if (kind == "power-decay") return AlphaSchedule::power_decay(get("a0"), get("p"));
  if (kind == "log-decay") return AlphaSchedule::log_decay(get("a0"));
  if (kind == "adaptive") {
    const std::string form = kwargs["form"].cast<std::string>();
    return AlphaSchedule::adaptive(get("lambda_"), form == "exponential"
                                                       ? AdaptiveForm::Exponential
                                                       : AdaptiveForm::Reciprocal);
  }
  if (kind == "explicit") {
    return AlphaSchedule::explicit_values(kwargs["values"].cast<std::vector<double>>());
  }
  if (kind == "zero") return AlphaSchedule::zero();
  throw std::invalid_argument("unknown alpha kind '" + kind + "'");
}

SampleSizeSchedule size_from_kwargs(const std::string& kind, py::kwargs kwargs) {
  if (kind == "constant") return SampleSizeSchedule::constant(kwargs["n"].cast<long long>());
  if (kind == "polynomial") {
    return SampleSizeSchedule::polynomial(kwargs["n0"].cast<long long>(),
                                          kwargs["d"].cast<double>());
  }
  if (kind == "improvement-recursive") {
    return SampleSizeSchedule::improvement_recursive(kwargs["n0"].cast<long long>());
  }
  if (kind == "explicit") {
    return SampleSizeSchedule::explicit_values(kwargs["values"].cast<std::vector<long long>>());
  }
  throw std::invalid_argument("unknown size kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Iterative-training risk laboratory: exact recurrences, Monte Carlo "
            "engines and schedule planning";

  py::class_<SimplexVector>(m, "SimplexVector")
      .def(py::init<std::vector<double>>())
      .def_static("uniform", &SimplexVector::uniform)
      .def_static("one_hot", &SimplexVector::one_hot)
      .def("__len__", &SimplexVector::size)
      .def("__getitem__",
           [](const SimplexVector& v, std::size_t k) {
             if (k >= v.size()) throw py::index_error();
             return v[k];
           })
      .def("probs", &SimplexVector::probs)
      .def("sum_squares", &SimplexVector::sum_squares);

  py::class_<AlphaSchedule>(m, "AlphaSchedule")
      .def_static("make", &alpha_from_kwargs, py::arg("kind"))
      .def("describe", &AlphaSchedule::describe);
  py::class_<SampleSizeSchedule>(m, "SampleSizeSchedule")
      .def_static("make", &size_from_kwargs, py::arg("kind"))
      .def("describe", &SampleSizeSchedule::describe);

  m.def("alpha_at", &alpha_at, py::arg("schedule"), py::arg("t"),
        py::arg("r_prev") = std::nullopt);
  m.def("n_at", &n_at, py::arg("schedule"), py::arg("t"), py::arg("n_prev") = std::nullopt,
        py::arg("alpha_t") = std::nullopt);
  m.def("improvement_min_sample", &improvement_min_sample);
  m.def("consistency_diagnostic", [](const AlphaSchedule& a, const SampleSizeSchedule& n,
                                     long long horizon) {
    const ConsistencyReport r = consistency_diagnostic(a, n, horizon);
    py::dict d;
    d["partial_sum_alpha"] = r.partial_sum_alpha;
    d["partial_sum_inv_n"] = r.partial_sum_inv_n;
    d["verdict"] = r.condition_met_so_far ? "consistency-condition-met-so-far" : "inconclusive";
    d["note"] = r.note;
    return d;
  });

  py::class_<AnalyticTrajectory>(m, "AnalyticTrajectory")
      .def_readonly("r0", &AnalyticTrajectory::r0)
      .def_readonly("values", &AnalyticTrajectory::values)
      .def_readonly("converged", &AnalyticTrajectory::converged);

  m.def("initial_risk", &initial_risk);
  m.def("risk_step", &risk_step);
  m.def("risk_trajectory", &risk_trajectory);
  m.def("limit_fixed", &limit_fixed);
  m.def("synthetic_only_bounds", &synthetic_only_bounds);
  m.def("accumulation_limit_bounds", &accumulation_limit_bounds);
  m.def("accumulation_step",
        [](double r_prev, double r0, long long n0, const std::vector<long long>& sizes,
           const std::string& variant) {
          return accumulation_step(r_prev, r0, n0, sizes,
                                   variant == "stated-form" ? AccumulationVariant::StatedForm
                                                            : AccumulationVariant::ProofForm);
        });
  m.def("filtered_params", [](double alpha, double e1, double e2) {
    const FilteredParams fp = filtered_params(alpha, e1, e2);
    return py::make_tuple(fp.alpha_tilde, fp.q);
  });
  m.def("oracle_type2", &oracle_type2);
  m.def("tv_categorical", &tv_categorical);
  m.def("truncated_inverse_moment", &truncated_inverse_moment);
  m.def("mean_field_inverse_moment", &mean_field_inverse_moment);
  m.def("filtered_risk_step", &filtered_risk_step);
  m.def("adaptive_risk_bound", &adaptive_risk_bound, py::arg("lambda_"),
        py::arg("n") = std::nullopt, py::arg("r0") = 0.0);
  m.def("population_gaussian_update", &population_gaussian_update);
  m.def("corrected_estimate", &corrected_estimate);
  m.def("project_to_simplex", &project_to_simplex);

  py::class_<RiskTrajectory>(m, "RiskTrajectory")
      .def_readonly("mean", &RiskTrajectory::mean)
      .def_readonly("stderr", &RiskTrajectory::stderr_of_mean)
      .def_readonly("ci_lo", &RiskTrajectory::ci_lo)
      .def_readonly("ci_hi", &RiskTrajectory::ci_hi)
      .def_readonly("reps", &RiskTrajectory::reps)
      .def_readonly("analytic", &RiskTrajectory::analytic)
      .def_readonly("meta", &RiskTrajectory::meta);

  m.def("aggregate",
        [](const std::vector<std::vector<double>>& replications) { return aggregate(replications); });
  m.def("compare_to_analytic",
        [](const RiskTrajectory& traj, const std::vector<double>& oracle, double z) {
          const ComparisonReport r = compare_to_analytic(traj, oracle, z);
          py::dict d;
          d["per_t_z"] = r.per_t_z;
          d["worst_z"] = r.worst_z;
          d["pass"] = r.pass;
          d["coverage_fraction"] = r.coverage_fraction;
          return d;
        });
  m.def("mann_kendall", [](const std::vector<double>& values) {
    const TrendTest t = mann_kendall(values);
    py::dict d;
    d["s"] = t.s_statistic;
    d["z"] = t.z;
    d["p_two_sided"] = t.p_two_sided;
    return d;
  });

  m.def("parse_config", &parse_config);
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("horizon", &ExperimentConfig::horizon)
      .def_readonly("reps", &ExperimentConfig::reps)
      .def_readonly("n0", &ExperimentConfig::n0)
      .def_readonly("seed", &ExperimentConfig::seed);

  m.def(
      "run_experiment_config",
      [](const std::string& config_text, int workers) {
        const ExperimentConfig config = parse_config(config_text);
        return config.family == Family::Categorical ? run_experiment(config, workers)
                                                    : run_family_experiment(config, workers);
      },
      py::arg("config_text"), py::arg("workers") = 0,
      "Parse a config document, run it, and return the aggregated trajectory "
      "(without touching the filesystem)");
  m.def(
      "analytic_trajectory_config",
      [](const std::string& config_text) {
        return analytic_for_config(parse_config(config_text));
      },
      py::arg("config_text"));

  m.def("plan_schedule", [](long long n0, const AlphaSchedule& alpha, long long horizon) {
    py::list rows;
    for (const PlanRow& row : plan_schedule(n0, alpha, horizon)) {
      py::dict d;
      d["t"] = row.t;
      d["alpha"] = row.alpha;
      d["n_min"] = row.n_min;
      d["risk"] = row.risk;
      d["infeasible"] = row.infeasible;
      rows.append(d);
    }
    return rows;
  });

  m.def("gaussian_w2sq", [](double mu_a, double s2_a, double mu_b, double s2_b) {
    return gaussian_w2sq({mu_a, s2_a}, {mu_b, s2_b});
  });
  m.def("mixing_w1",
        [](const std::vector<double>& mu_a, const std::vector<double>& sigma_a,
           const std::vector<double>& w_a, const std::vector<double>& mu_b,
           const std::vector<double>& sigma_b, const std::vector<double>& w_b) {
          auto build = [](const std::vector<double>& mu, const std::vector<double>& sigma,
                          const std::vector<double>& w) {
            std::vector<GaussAtom> atoms;
            for (std::size_t i = 0; i < mu.size(); ++i) atoms.push_back({mu[i], sigma[i]});
            return MixingMeasure(std::move(atoms), w);
          };
          return mixing_w1(build(mu_a, sigma_a, w_a), build(mu_b, sigma_b, w_b));
        });
  m.def("transport_cost", &transport_cost);
}
