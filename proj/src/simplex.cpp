#include "collapselab/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace collapselab {

namespace {
constexpr double kSumTolerance = 1e-12;
}

SimplexVector::SimplexVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("simplex vector needs at least 2 categories, got " +
                                std::to_string(probs_.size()));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("simplex entries must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("simplex entries must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

SimplexVector SimplexVector::uniform(std::size_t k) {
  if (k < 2) throw std::invalid_argument("uniform simplex needs k >= 2");
  return SimplexVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

SimplexVector SimplexVector::one_hot(std::size_t k, std::size_t hot_index) {
  if (k < 2) throw std::invalid_argument("one-hot simplex needs k >= 2");
  if (hot_index >= k) throw std::invalid_argument("one-hot index out of range");
  std::vector<double> v(k, 0.0);
  v[hot_index] = 1.0;
  return SimplexVector(std::move(v));
}

double SimplexVector::sum_squares() const {
  double s = 0.0;
  for (double p : probs_) s += p * p;
  return s;
}

double squared_distance(const SimplexVector& a, const SimplexVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("simplex dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

SimplexVector project_to_simplex(const std::vector<double>& raw) {
  std::vector<double> clipped(raw.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    clipped[k] = std::min(1.0, std::max(0.0, raw[k]));
    sum += clipped[k];
  }
  if (sum <= 0.0) {
    throw std::domain_error("projection undefined: no positive mass after clipping");
  }
  for (double& p : clipped) p /= sum;
  return SimplexVector(std::move(clipped));
}

}  // namespace collapselab
