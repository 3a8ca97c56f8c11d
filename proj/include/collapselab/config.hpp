#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "collapselab/analytic.hpp"
#include "collapselab/schedules.hpp"
#include "collapselab/simplex.hpp"
#include "collapselab/stats.hpp"

namespace collapselab {

enum class Family { Categorical, Gaussian, Gmm, Logistic };
enum class RunMode { Standard, Accumulate, SyntheticOnly, Filtered };

// Real-vs-synthetic filter. Fixed rates, the random coin (e1 = e2 = 1/2), or
// an oracle that attains e2 = max(0, 1 - e1 - TV(theta*, theta_hat_t)) each
// round against the current replication's estimate.
struct ClassifierSpec {
  enum class Mode { Fixed, Random, Oracle };
  Mode mode = Mode::Fixed;
  double e1 = 0.0;
  double e2 = 0.0;
};

struct GaussianParams {
  double mu = 0.0;
  double sigma2 = 1.0;
};

struct GaussAtom {
  double mu = 0.0;
  double sigma = 1.0;
};

// Discrete mixing measure of a univariate Gaussian mixture: weighted atoms
// at (mu_k, sigma_k). Atoms closer than 1e-9 in (mu, sigma) are merged.
struct MixingMeasure {
  std::vector<GaussAtom> atoms;
  std::vector<double> weights;

  MixingMeasure() = default;
  MixingMeasure(std::vector<GaussAtom> atoms_in, std::vector<double> weights_in);
  std::size_t size() const { return atoms.size(); }
};

struct LogisticParams {
  // Intercept plus two slopes.
  double theta[3] = {0.0, 0.0, 0.0};
};

struct OutputSpec {
  std::string csv_path;
  std::string svg_path;        // empty = no plot
  bool record_analytic = false;
  bool log_y = false;
};

// One complete iterative-training experiment.
struct ExperimentConfig {
  Family family = Family::Categorical;
  RunMode mode = RunMode::Standard;

  // Family-specific truth.
  std::optional<SimplexVector> theta_star;       // categorical
  std::optional<GaussianParams> gaussian_truth;  // gaussian
  std::optional<MixingMeasure> gmm_truth;        // gmm
  std::optional<LogisticParams> logistic_truth;  // logistic

  long long horizon = 0;  // rounds 0..horizon
  long long reps = 0;
  long long n0 = 0;
  AlphaSchedule alpha = AlphaSchedule::zero();
  SampleSizeSchedule n = SampleSizeSchedule::constant(1);
  std::optional<ClassifierSpec> classifier;
  std::uint64_t seed = 0;
  OutputSpec outputs;

  // Tuning knobs, all defaulted.
  bool record_estimates = false;
  AccumulationVariant accumulation_variant = AccumulationVariant::ProofForm;
  long long exact_moment_crossover = 100000;
  long long resample_guard = 1000000;
  CiMethod ci_method = CiMethod::Normal;
  std::string gmm_ground_metric = "sigma";  // or "sigma2"
  int gmm_components = 5;
  int em_max_iters = 200;
  double em_tol = 1e-8;
  double logistic_ridge = 1e-6;
};

// Parse error with the offending key and line number in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict parser for the flat key-value experiment format (see README):
// unknown keys, missing required keys and invariant violations are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

std::string family_name(Family family);
std::string mode_name(RunMode mode);

}  // namespace collapselab
