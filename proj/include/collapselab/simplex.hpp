#pragma once

#include <cstddef>
#include <vector>

namespace collapselab {

// A probability vector over K >= 2 categories. Entries are nonnegative and
// sum to 1 within an absolute tolerance of 1e-12; construction validates.
class SimplexVector {
 public:
  explicit SimplexVector(std::vector<double> probs);

  static SimplexVector uniform(std::size_t k);
  static SimplexVector one_hot(std::size_t k, std::size_t hot_index);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  const std::vector<double>& probs() const { return probs_; }

  // Sum of squared entries; 1 iff the vector is one-hot.
  double sum_squares() const;

  bool operator==(const SimplexVector& other) const { return probs_ == other.probs_; }

 private:
  std::vector<double> probs_;
};

double squared_distance(const SimplexVector& a, const SimplexVector& b);

// Clip to [0, 1] componentwise and renormalize. Input need not be a simplex
// vector but must have at least one positive entry after clipping.
SimplexVector project_to_simplex(const std::vector<double>& raw);

}  // namespace collapselab
