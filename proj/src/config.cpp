#include "collapselab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace collapselab {

MixingMeasure::MixingMeasure(std::vector<GaussAtom> atoms_in, std::vector<double> weights_in) {
  if (atoms_in.empty() || atoms_in.size() != weights_in.size()) {
    throw std::invalid_argument("mixing measure needs matching, nonempty atoms and weights");
  }
  double wsum = 0.0;
  for (double w : weights_in) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixing weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::invalid_argument("mixing weights must sum to 1");
  }
  // Merge atoms that coincide up to 1e-9 in (mu, sigma).
  for (std::size_t i = 0; i < atoms_in.size(); ++i) {
    if (!(atoms_in[i].sigma > 0.0)) {
      throw std::invalid_argument("atom sigma must be positive");
    }
    bool merged = false;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (std::abs(atoms[j].mu - atoms_in[i].mu) <= 1e-9 &&
          std::abs(atoms[j].sigma - atoms_in[i].sigma) <= 1e-9) {
        weights[j] += weights_in[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      atoms.push_back(atoms_in[i]);
      weights.push_back(weights_in[i]);
    }
  }
}

std::string family_name(Family family) {
  switch (family) {
    case Family::Categorical: return "categorical";
    case Family::Gaussian: return "gaussian";
    case Family::Gmm: return "gmm";
    case Family::Logistic: return "logistic";
  }
  return "?";
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Standard: return "standard";
    case RunMode::Accumulate: return "accumulate";
    case RunMode::SyntheticOnly: return "synthetic-only";
    case RunMode::Filtered: return "filtered";
  }
  return "?";
}

namespace {

struct Value {
  enum class Type { String, Number, Bool, Array, Table };
  Type type = Type::Number;
  std::string str;
  double number = 0.0;
  bool boolean = false;
  std::vector<double> array;
  std::map<std::string, Value> table;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

void skip_spaces(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

std::string parse_key(const std::string& s, std::size_t& pos, int line) {
  skip_spaces(s, pos);
  const std::size_t start = pos;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                            s[pos] == '-')) {
    ++pos;
  }
  if (pos == start) fail(line, "expected a key");
  return s.substr(start, pos - start);
}

double parse_number_token(const std::string& token, int line) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &consumed);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + token + "'");
  }
  if (consumed != token.size()) fail(line, "trailing characters in number '" + token + "'");
  return v;
}

Value parse_value(const std::string& s, std::size_t& pos, int line);

Value parse_array(const std::string& s, std::size_t& pos, int line) {
  Value v;
  v.type = Value::Type::Array;
  v.line = line;
  ++pos;  // consume '['
  skip_spaces(s, pos);
  if (pos < s.size() && s[pos] == ']') {
    ++pos;
    return v;
  }
  while (true) {
    skip_spaces(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != ']') ++pos;
    std::string token = s.substr(start, pos - start);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.pop_back();
    v.array.push_back(parse_number_token(token, line));
    if (pos >= s.size()) fail(line, "unterminated array");
    if (s[pos] == ']') {
      ++pos;
      break;
    }
    ++pos;  // consume ','
  }
  return v;
}

Value parse_table(const std::string& s, std::size_t& pos, int line) {
  Value v;
  v.type = Value::Type::Table;
  v.line = line;
  ++pos;  // consume '{'
  skip_spaces(s, pos);
  if (pos < s.size() && s[pos] == '}') {
    ++pos;
    return v;
  }
  while (true) {
    const std::string key = parse_key(s, pos, line);
    skip_spaces(s, pos);
    if (pos >= s.size() || s[pos] != '=') fail(line, "expected '=' after '" + key + "'");
    ++pos;
    Value inner = parse_value(s, pos, line);
    if (inner.type == Value::Type::Table) fail(line, "nested tables are not supported");
    if (!v.table.emplace(key, std::move(inner)).second) {
      fail(line, "duplicate key '" + key + "' in table");
    }
    skip_spaces(s, pos);
    if (pos >= s.size()) fail(line, "unterminated table");
    if (s[pos] == '}') {
      ++pos;
      break;
    }
    if (s[pos] != ',') fail(line, "expected ',' or '}' in table");
    ++pos;
    skip_spaces(s, pos);
  }
  return v;
}

Value parse_value(const std::string& s, std::size_t& pos, int line) {
  skip_spaces(s, pos);
  if (pos >= s.size()) fail(line, "missing value");
  Value v;
  v.line = line;
  const char c = s[pos];
  if (c == '"') {
    const std::size_t end = s.find('"', pos + 1);
    if (end == std::string::npos) fail(line, "unterminated string");
    v.type = Value::Type::String;
    v.str = s.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return v;
  }
  if (c == '[') return parse_array(s, pos, line);
  if (c == '{') return parse_table(s, pos, line);

  std::size_t start = pos;
  while (pos < s.size() && s[pos] != ',' && s[pos] != '}' && s[pos] != ']' && s[pos] != ' ' &&
         s[pos] != '\t') {
    ++pos;
  }
  std::string token = s.substr(start, pos - start);
  if (token == "true" || token == "false") {
    v.type = Value::Type::Bool;
    v.boolean = token == "true";
    return v;
  }
  v.type = Value::Type::Number;
  v.number = parse_number_token(token, line);
  return v;
}

// Raw document: top-level key -> value, duplicates rejected.
std::map<std::string, Value> parse_document(const std::string& text) {
  std::map<std::string, Value> doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // Strip comments (a '#' outside of quotes).
    std::string s;
    bool in_string = false;
    for (char c : raw) {
      if (c == '"') in_string = !in_string;
      if (c == '#' && !in_string) break;
      s.push_back(c);
    }
    std::size_t pos = 0;
    skip_spaces(s, pos);
    if (pos >= s.size() || s[pos] == '\r') continue;
    const std::string key = parse_key(s, pos, line_no);
    skip_spaces(s, pos);
    if (pos >= s.size() || s[pos] != '=') fail(line_no, "expected '=' after '" + key + "'");
    ++pos;
    Value v = parse_value(s, pos, line_no);
    skip_spaces(s, pos);
    if (pos < s.size() && s[pos] != '\r') fail(line_no, "trailing characters after value");
    if (!doc.emplace(key, std::move(v)).second) {
      fail(line_no, "duplicate key '" + key + "'");
    }
  }
  return doc;
}

class DocReader {
 public:
  explicit DocReader(std::map<std::string, Value> doc) : doc_(std::move(doc)) {}

  bool has(const std::string& key) const { return doc_.count(key) > 0; }

  const Value& require(const std::string& key) {
    auto it = doc_.find(key);
    if (it == doc_.end()) throw ConfigError("missing required key '" + key + "'");
    used_.insert(used_.end(), key);
    return it->second;
  }

  const Value* optional(const std::string& key) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        fail(value.line, "unknown key '" + key + "'");
      }
    }
  }

 private:
  std::map<std::string, Value> doc_;
  std::vector<std::string> used_;
};

std::string expect_string(const Value& v, const std::string& key) {
  if (v.type != Value::Type::String) fail(v.line, "'" + key + "' must be a string");
  return v.str;
}

double expect_number(const Value& v, const std::string& key) {
  if (v.type != Value::Type::Number) fail(v.line, "'" + key + "' must be a number");
  return v.number;
}

long long expect_integer(const Value& v, const std::string& key) {
  const double d = expect_number(v, key);
  if (d != std::floor(d) || std::abs(d) > 9.0e18) {
    fail(v.line, "'" + key + "' must be an integer");
  }
  return static_cast<long long>(d);
}

bool expect_bool(const Value& v, const std::string& key) {
  if (v.type != Value::Type::Bool) fail(v.line, "'" + key + "' must be true or false");
  return v.boolean;
}

std::vector<double> expect_array(const Value& v, const std::string& key) {
  if (v.type != Value::Type::Array) fail(v.line, "'" + key + "' must be an array");
  return v.array;
}

// Table field access with unknown-key rejection.
class TableReader {
 public:
  TableReader(const Value& v, std::string name) : name_(std::move(name)), line_(v.line) {
    if (v.type != Value::Type::Table) fail(v.line, "'" + name_ + "' must be a table {...}");
    table_ = &v.table;
  }

  const Value* optional(const std::string& key) {
    auto it = table_->find(key);
    if (it == table_->end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  const Value& require(const std::string& key) {
    const Value* v = optional(key);
    if (!v) fail(line_, "'" + name_ + "' is missing field '" + key + "'");
    return *v;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : *table_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        fail(value.line, "unknown field '" + key + "' in '" + name_ + "'");
      }
    }
  }

  int line() const { return line_; }

 private:
  const std::map<std::string, Value>* table_;
  std::string name_;
  int line_;
  std::vector<std::string> used_;
};

AlphaSchedule parse_alpha(const Value& v) {
  TableReader t(v, "alpha");
  const std::string kind = expect_string(t.require("kind"), "alpha.kind");
  try {
    if (kind == "constant") {
      const double a0 = expect_number(t.require("a0"), "alpha.a0");
      t.reject_unknown();
      return AlphaSchedule::constant(a0);
    }
    if (kind == "power-decay") {
      const double a0 = expect_number(t.require("a0"), "alpha.a0");
      const double p = expect_number(t.require("p"), "alpha.p");
      t.reject_unknown();
      return AlphaSchedule::power_decay(a0, p);
    }
    if (kind == "log-decay") {
      const double a0 = expect_number(t.require("a0"), "alpha.a0");
      t.reject_unknown();
      return AlphaSchedule::log_decay(a0);
    }
    if (kind == "adaptive") {
      const double lambda = expect_number(t.require("lambda"), "alpha.lambda");
      const std::string form = expect_string(t.require("form"), "alpha.form");
      t.reject_unknown();
      if (form != "reciprocal" && form != "exponential") {
        fail(v.line, "alpha.form must be 'reciprocal' or 'exponential'");
      }
      return AlphaSchedule::adaptive(
          lambda, form == "reciprocal" ? AdaptiveForm::Reciprocal : AdaptiveForm::Exponential);
    }
    if (kind == "explicit") {
      auto values = expect_array(t.require("values"), "alpha.values");
      t.reject_unknown();
      return AlphaSchedule::explicit_values(std::move(values));
    }
    if (kind == "zero") {
      t.reject_unknown();
      return AlphaSchedule::zero();
    }
  } catch (const std::invalid_argument& e) {
    fail(v.line, std::string("invalid alpha schedule: ") + e.what());
  }
  fail(v.line, "unknown alpha kind '" + kind + "'");
}

SampleSizeSchedule parse_size(const Value& v) {
  TableReader t(v, "n");
  const std::string kind = expect_string(t.require("kind"), "n.kind");
  try {
    if (kind == "constant") {
      const long long n = expect_integer(t.require("n"), "n.n");
      t.reject_unknown();
      return SampleSizeSchedule::constant(n);
    }
    if (kind == "polynomial") {
      const long long n0 = expect_integer(t.require("n0"), "n.n0");
      const double d = expect_number(t.require("d"), "n.d");
      t.reject_unknown();
      return SampleSizeSchedule::polynomial(n0, d);
    }
    if (kind == "improvement-recursive") {
      const long long n0 = expect_integer(t.require("n0"), "n.n0");
      t.reject_unknown();
      return SampleSizeSchedule::improvement_recursive(n0);
    }
    if (kind == "explicit") {
      auto raw = expect_array(t.require("values"), "n.values");
      t.reject_unknown();
      std::vector<long long> values;
      for (double d : raw) {
        if (d != std::floor(d)) fail(v.line, "explicit sizes must be integers");
        values.push_back(static_cast<long long>(d));
      }
      return SampleSizeSchedule::explicit_values(std::move(values));
    }
  } catch (const std::invalid_argument& e) {
    fail(v.line, std::string("invalid size schedule: ") + e.what());
  }
  fail(v.line, "unknown size kind '" + kind + "'");
}

ClassifierSpec parse_classifier(const Value& v) {
  TableReader t(v, "classifier");
  const std::string mode = expect_string(t.require("mode"), "classifier.mode");
  ClassifierSpec spec;
  if (mode == "fixed") {
    spec.mode = ClassifierSpec::Mode::Fixed;
    spec.e1 = expect_number(t.require("e1"), "classifier.e1");
    spec.e2 = expect_number(t.require("e2"), "classifier.e2");
  } else if (mode == "random") {
    spec.mode = ClassifierSpec::Mode::Random;
    spec.e1 = 0.5;
    spec.e2 = 0.5;
  } else if (mode == "oracle") {
    spec.mode = ClassifierSpec::Mode::Oracle;
    spec.e1 = expect_number(t.require("e1"), "classifier.e1");
  } else {
    fail(v.line, "classifier.mode must be 'fixed', 'random' or 'oracle'");
  }
  t.reject_unknown();
  if (!(spec.e1 >= 0.0 && spec.e1 <= 1.0) || !(spec.e2 >= 0.0 && spec.e2 <= 1.0)) {
    fail(v.line, "classifier error rates must lie in [0, 1]");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  DocReader doc(parse_document(text));
  ExperimentConfig cfg;

  const Value& family_v = doc.require("family");
  const std::string family = expect_string(family_v, "family");
  if (family == "categorical") {
    cfg.family = Family::Categorical;
  } else if (family == "gaussian") {
    cfg.family = Family::Gaussian;
  } else if (family == "gmm") {
    cfg.family = Family::Gmm;
  } else if (family == "logistic") {
    cfg.family = Family::Logistic;
  } else {
    fail(family_v.line, "unknown family '" + family + "'");
  }

  if (const Value* v = doc.optional("mode")) {
    const std::string mode = expect_string(*v, "mode");
    if (mode == "standard") {
      cfg.mode = RunMode::Standard;
    } else if (mode == "accumulate") {
      cfg.mode = RunMode::Accumulate;
    } else if (mode == "synthetic-only") {
      cfg.mode = RunMode::SyntheticOnly;
    } else if (mode == "filtered") {
      cfg.mode = RunMode::Filtered;
    } else {
      fail(v->line, "unknown mode '" + mode + "'");
    }
  }

  cfg.horizon = expect_integer(doc.require("T"), "T");
  if (cfg.horizon < 0) throw ConfigError("T must be >= 0");
  cfg.reps = expect_integer(doc.require("reps"), "reps");
  if (cfg.reps < 2) throw ConfigError("reps must be >= 2 (aggregation needs replication)");
  cfg.n0 = expect_integer(doc.require("n0"), "n0");
  if (cfg.n0 < 1) throw ConfigError("n0 must be >= 1");
  cfg.seed = static_cast<std::uint64_t>(expect_integer(doc.require("seed"), "seed"));

  // Truth parameters, per family.
  if (cfg.family == Family::Categorical) {
    const Value& ts = doc.require("theta_star");
    long long k = 0;
    if (const Value* kv = doc.optional("K")) {
      k = expect_integer(*kv, "K");
      if (k < 2) fail(kv->line, "K must be >= 2");
    }
    try {
      if (ts.type == Value::Type::String) {
        if (ts.str != "uniform") fail(ts.line, "theta_star string form must be \"uniform\"");
        if (k == 0) fail(ts.line, "theta_star = \"uniform\" needs K");
        cfg.theta_star = SimplexVector::uniform(static_cast<std::size_t>(k));
      } else if (ts.type == Value::Type::Array) {
        if (k != 0 && static_cast<long long>(ts.array.size()) != k) {
          fail(ts.line, "theta_star length does not match K");
        }
        cfg.theta_star = SimplexVector(ts.array);
      } else {
        fail(ts.line, "theta_star must be \"uniform\" or an array");
      }
    } catch (const std::invalid_argument& e) {
      fail(ts.line, std::string("invalid theta_star: ") + e.what());
    }
  } else {
    if (doc.has("K") || doc.has("theta_star")) {
      throw ConfigError("K/theta_star apply only to the categorical family");
    }
    const Value& tv = doc.require("truth");
    TableReader t(tv, "truth");
    try {
      if (cfg.family == Family::Gaussian) {
        GaussianParams g;
        g.mu = expect_number(t.require("mu"), "truth.mu");
        g.sigma2 = expect_number(t.require("sigma2"), "truth.sigma2");
        t.reject_unknown();
        if (!(g.sigma2 > 0.0)) fail(tv.line, "truth.sigma2 must be positive");
        cfg.gaussian_truth = g;
      } else if (cfg.family == Family::Gmm) {
        auto mu = expect_array(t.require("mu"), "truth.mu");
        auto sigma = expect_array(t.require("sigma"), "truth.sigma");
        auto weights = expect_array(t.require("weights"), "truth.weights");
        t.reject_unknown();
        if (mu.size() != sigma.size() || mu.size() != weights.size()) {
          fail(tv.line, "truth.mu/sigma/weights must have equal lengths");
        }
        std::vector<GaussAtom> atoms;
        for (std::size_t i = 0; i < mu.size(); ++i) atoms.push_back({mu[i], sigma[i]});
        cfg.gmm_truth = MixingMeasure(std::move(atoms), std::move(weights));
      } else {
        auto theta = expect_array(t.require("theta"), "truth.theta");
        t.reject_unknown();
        if (theta.size() != 3) fail(tv.line, "truth.theta must have 3 entries");
        LogisticParams lp;
        for (int i = 0; i < 3; ++i) lp.theta[i] = theta[i];
        cfg.logistic_truth = lp;
      }
    } catch (const std::invalid_argument& e) {
      fail(tv.line, std::string("invalid truth: ") + e.what());
    }
  }

  // Schedules.
  if (const Value* v = doc.optional("alpha")) {
    cfg.alpha = parse_alpha(*v);
    if (cfg.mode == RunMode::SyntheticOnly && !cfg.alpha.is_zero()) {
      fail(v->line, "synthetic-only runs use alpha = zero; drop the alpha key or set kind=\"zero\"");
    }
  } else {
    if (cfg.mode != RunMode::SyntheticOnly) throw ConfigError("missing required key 'alpha'");
    cfg.alpha = AlphaSchedule::zero();
  }
  cfg.n = parse_size(doc.require("n"));

  if (cfg.alpha.kind == AlphaKind::Explicit &&
      static_cast<long long>(cfg.alpha.values.size()) < cfg.horizon) {
    throw ConfigError("explicit alpha schedule is shorter than the horizon T");
  }
  if (cfg.n.kind == SizeKind::Explicit &&
      static_cast<long long>(cfg.n.values.size()) < cfg.horizon + 1) {
    throw ConfigError("explicit size schedule needs T+1 values");
  }
  if (cfg.alpha.is_adaptive() &&
      !(cfg.family == Family::Categorical &&
        (cfg.mode == RunMode::Standard || cfg.mode == RunMode::Filtered))) {
    throw ConfigError(
        "adaptive alpha needs a computable analytic risk: categorical standard or filtered runs");
  }

  // Classifier.
  if (const Value* v = doc.optional("classifier")) {
    if (cfg.mode != RunMode::Filtered) fail(v->line, "classifier requires mode = \"filtered\"");
    cfg.classifier = parse_classifier(*v);
  }
  if (cfg.mode == RunMode::Filtered) {
    if (!cfg.classifier.has_value()) {
      throw ConfigError("mode = \"filtered\" requires a classifier");
    }
    if (cfg.family != Family::Categorical) {
      throw ConfigError("filtered mode is defined for the categorical family");
    }
    if (cfg.alpha.is_adaptive() && cfg.classifier->mode == ClassifierSpec::Mode::Oracle) {
      throw ConfigError("adaptive alpha has no closed-form risk under an oracle classifier");
    }
  }

  // Outputs.
  cfg.outputs.csv_path = "trajectory.csv";
  if (const Value* v = doc.optional("csv")) cfg.outputs.csv_path = expect_string(*v, "csv");
  if (const Value* v = doc.optional("svg")) cfg.outputs.svg_path = expect_string(*v, "svg");
  if (const Value* v = doc.optional("record_analytic")) {
    cfg.outputs.record_analytic = expect_bool(*v, "record_analytic");
  }
  if (const Value* v = doc.optional("log_y")) cfg.outputs.log_y = expect_bool(*v, "log_y");

  if (cfg.outputs.record_analytic) {
    if (cfg.family != Family::Categorical) {
      throw ConfigError("record_analytic is only available for the categorical family");
    }
    if (cfg.mode == RunMode::Accumulate && !cfg.alpha.is_zero()) {
      throw ConfigError("the accumulation recurrence covers alpha = zero only");
    }
    if (cfg.mode == RunMode::Filtered &&
        cfg.classifier->mode == ClassifierSpec::Mode::Oracle) {
      throw ConfigError("no closed form for oracle-classifier runs; disable record_analytic");
    }
  }

  // Knobs.
  if (const Value* v = doc.optional("record_estimates")) {
    cfg.record_estimates = expect_bool(*v, "record_estimates");
  }
  if (const Value* v = doc.optional("accumulation_variant")) {
    const std::string s = expect_string(*v, "accumulation_variant");
    if (s == "proof-form") {
      cfg.accumulation_variant = AccumulationVariant::ProofForm;
    } else if (s == "stated-form") {
      cfg.accumulation_variant = AccumulationVariant::StatedForm;
    } else {
      fail(v->line, "accumulation_variant must be 'proof-form' or 'stated-form'");
    }
  }
  if (const Value* v = doc.optional("exact_moment_crossover")) {
    cfg.exact_moment_crossover = expect_integer(*v, "exact_moment_crossover");
  }
  if (const Value* v = doc.optional("resample_guard")) {
    cfg.resample_guard = expect_integer(*v, "resample_guard");
    if (cfg.resample_guard < 1) fail(v->line, "resample_guard must be >= 1");
  }
  if (const Value* v = doc.optional("ci")) {
    const std::string s = expect_string(*v, "ci");
    if (s == "normal") {
      cfg.ci_method = CiMethod::Normal;
    } else if (s == "bootstrap") {
      cfg.ci_method = CiMethod::Bootstrap;
    } else {
      fail(v->line, "ci must be 'normal' or 'bootstrap'");
    }
  }
  if (const Value* v = doc.optional("gmm_ground_metric")) {
    cfg.gmm_ground_metric = expect_string(*v, "gmm_ground_metric");
    if (cfg.gmm_ground_metric != "sigma" && cfg.gmm_ground_metric != "sigma2") {
      fail(v->line, "gmm_ground_metric must be 'sigma' or 'sigma2'");
    }
  }
  if (const Value* v = doc.optional("gmm_components")) {
    cfg.gmm_components = static_cast<int>(expect_integer(*v, "gmm_components"));
    if (cfg.gmm_components < 1) fail(v->line, "gmm_components must be >= 1");
  }
  if (const Value* v = doc.optional("em_max_iters")) {
    cfg.em_max_iters = static_cast<int>(expect_integer(*v, "em_max_iters"));
  }
  if (const Value* v = doc.optional("em_tol")) cfg.em_tol = expect_number(*v, "em_tol");
  if (const Value* v = doc.optional("logistic_ridge")) {
    cfg.logistic_ridge = expect_number(*v, "logistic_ridge");
    if (!(cfg.logistic_ridge >= 0.0)) fail(v->line, "logistic_ridge must be >= 0");
  }

  doc.reject_unknown();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace collapselab
