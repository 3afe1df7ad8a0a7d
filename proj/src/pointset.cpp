#include "geodisc/pointset.hpp"

#include <cmath>
#include <sstream>

#include "geodisc/error.hpp"

namespace geodisc {

void validate_weights(const std::vector<double>& w) {
  if (w.empty()) throw DomainError("point set is empty");
  // Neumaier summation so that equal weights 1/N pass for large N
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double v = w[j];
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("weight " + std::to_string(j) + " is not positive");
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  sum += comp;
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << ", not 1; divide each weight by " << sum << " to normalize";
    throw DomainError(os.str());
  }
}

void WeightedPointSet::set_weights(std::vector<double> w) {
  const std::size_t n = stride_ ? coords_.size() / stride_ : (matrix_ ? matrix_->size() : 0);
  if (n == 0) throw DomainError("point set is empty");
  if (w.empty()) w.assign(n, 1.0 / static_cast<double>(n));
  if (w.size() != n)
    throw DomainError("got " + std::to_string(w.size()) + " weights for " + std::to_string(n) + " points");
  validate_weights(w);
  weights_ = std::move(w);
}

WeightedPointSet WeightedPointSet::from_flat(const Space& space, std::vector<double> coords,
                                             std::vector<double> weights) {
  if (!space.has_vector_model())
    throw UnsupportedError(space.name() + " has no vector model; use a distance matrix");
  WeightedPointSet ps(space);
  ps.stride_ = space.vector_length();
  if (coords.size() % ps.stride_ != 0) throw DomainError("coordinate array length is not a multiple of the point size");
  ps.coords_ = std::move(coords);
  for (std::size_t j = 0; j < ps.coords_.size() / ps.stride_; ++j) {
    try {
      space.check_vector(ps.point(j));
    } catch (const DomainError& e) {
      throw DomainError("point " + std::to_string(j) + ": " + e.what());
    }
  }
  ps.set_weights(std::move(weights));
  return ps;
}

WeightedPointSet WeightedPointSet::from_vectors(const Space& space, const std::vector<std::vector<double>>& points,
                                                std::vector<double> weights) {
  std::vector<double> flat;
  const std::size_t len = space.vector_length();
  flat.reserve(points.size() * len);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != len)
      throw DomainError("point " + std::to_string(j) + " has " + std::to_string(points[j].size()) +
                        " components, expected " + std::to_string(len));
    flat.insert(flat.end(), points[j].begin(), points[j].end());
  }
  return from_flat(space, std::move(flat), std::move(weights));
}

WeightedPointSet WeightedPointSet::from_matrix(const Space& space, std::shared_ptr<const DistanceMatrix> matrix,
                                               std::vector<double> weights) {
  if (!matrix) throw DomainError("missing distance matrix");
  WeightedPointSet ps(space);
  ps.matrix_ = std::move(matrix);
  ps.set_weights(std::move(weights));
  return ps;
}

PointRepr WeightedPointSet::repr(std::size_t j) const {
  if (matrix_) return MatrixIndex{matrix_, j};
  auto p = point(j);
  return VectorPoint{{p.begin(), p.end()}};
}

double WeightedPointSet::distance(std::size_t j, std::size_t k) const {
  if (matrix_) return (*matrix_)(j, k);
  return space_.vector_distance(point(j), point(k));
}

double WeightedPointSet::sum_sq_weights() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return s;
}

}  // namespace geodisc
