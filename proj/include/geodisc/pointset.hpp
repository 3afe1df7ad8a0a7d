#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "geodisc/spaces.hpp"

namespace geodisc {

inline constexpr double kWeightSumTolerance = 1e-12;

// N points of one space with positive weights summing to one. Vector-model
// points are stored row-major in one flat array; matrix-backed sets hold a
// shared distance table instead.
class WeightedPointSet {
 public:
  // Validates unit norms, positivity and the weight sum. An empty weight
  // vector means equal weights 1/N.
  static WeightedPointSet from_vectors(const Space& space, const std::vector<std::vector<double>>& points,
                                       std::vector<double> weights = {});
  static WeightedPointSet from_flat(const Space& space, std::vector<double> coords, std::vector<double> weights = {});
  static WeightedPointSet from_matrix(const Space& space, std::shared_ptr<const DistanceMatrix> matrix,
                                      std::vector<double> weights = {});

  const Space& space() const { return space_; }
  std::size_t size() const { return weights_.size(); }
  bool matrix_backed() const { return matrix_ != nullptr; }
  const std::shared_ptr<const DistanceMatrix>& matrix() const { return matrix_; }
  std::size_t stride() const { return stride_; }

  double weight(std::size_t j) const { return weights_[j]; }
  const std::vector<double>& weights() const { return weights_; }
  std::span<const double> point(std::size_t j) const { return {coords_.data() + j * stride_, stride_}; }
  const std::vector<double>& coords() const { return coords_; }
  PointRepr repr(std::size_t j) const;

  // cos of the geodesic distance between points j and k (no validation).
  double cos_distance(std::size_t j, std::size_t k) const {
    if (matrix_) return std::cos((*matrix_)(j, k));
    return space_.cos_distance(point(j), point(k));
  }
  double distance(std::size_t j, std::size_t k) const;

  double sum_sq_weights() const;

 private:
  WeightedPointSet(const Space& space) : space_(space) {}
  void set_weights(std::vector<double> w);

  Space space_;
  std::size_t stride_ = 0;
  std::vector<double> coords_;
  std::shared_ptr<const DistanceMatrix> matrix_;
  std::vector<double> weights_;
};

// Throws DomainError unless all weights are positive and sum to one.
void validate_weights(const std::vector<double>& w);

}  // namespace geodisc
