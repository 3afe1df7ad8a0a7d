#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace geodisc {

enum class Family { Sphere, ProjReal, ProjComplex, ProjQuaternion, ProjOctonion, Abstract };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

// Which compact two-point homogeneous space. For spheres `n` is the dimension
// d of S^d, for projective families it is the projective index of P^n(F).
// Abstract spaces carry their real dimension d and field dimension d0
// explicitly and are only usable through a distance matrix.
struct SpaceKind {
  Family family = Family::Sphere;
  int n = 2;
  int abstract_d = 0;
  int abstract_d0 = 0;

  static SpaceKind sphere(int d) { return {Family::Sphere, d}; }
  static SpaceKind real(int n) { return {Family::ProjReal, n}; }
  static SpaceKind complex(int n) { return {Family::ProjComplex, n}; }
  static SpaceKind quaternion(int n) { return {Family::ProjQuaternion, n}; }
  static SpaceKind octonion() { return {Family::ProjOctonion, 2}; }
  static SpaceKind abstract(int d, int d0) { return {Family::Abstract, 0, d, d0}; }

  friend bool operator==(const SpaceKind&, const SpaceKind&) = default;
};

// Accepts "sphere2", "sphere:2", "S2", "real3", "RP3", "complex2", "CP2",
// "quaternion2", "HP2", "octonion", "OP2".
SpaceKind parse_space(const std::string& text);

// Dimensions and Jacobi parameters: a = (d-2)/2, b = (d0-2)/2 and
// c_ab = Gamma(a+b+2) / (Gamma(a+1) Gamma(b+1)).
struct SpaceParams {
  int d = 0;
  int d0 = 0;
  double a = 0.0;
  double b = 0.0;
  double c_ab = 0.0;
};

SpaceParams space_params(const SpaceKind& kind);

// A symmetric table of geodesic distances in radians, zero on the diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Throws DomainError unless the rows form a valid distance table.
  explicit DistanceMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::vector<std::vector<double>> rows() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct VectorPoint {
  std::vector<double> coords;
};

struct MatrixIndex {
  std::shared_ptr<const DistanceMatrix> matrix;
  std::size_t row = 0;
};

using PointRepr = std::variant<VectorPoint, MatrixIndex>;

// A space together with its derived parameters. Immutable; cheap to copy.
class Space {
 public:
  explicit Space(SpaceKind kind);

  const SpaceKind& kind() const { return kind_; }
  const SpaceParams& params() const { return params_; }
  Family family() const { return kind_.family; }
  int dimension() const { return params_.d; }

  // True when points can be represented by unit vectors (sphere, R, C, H).
  bool has_vector_model() const;
  // Number of real components of a point in the vector model.
  std::size_t vector_length() const;
  std::string name() const;

  // A(r) = c_ab sin^{2a+1}(r/2) cos^{2b+1}(r/2); integrates to 1 on [0, pi].
  double radial_density(double r) const;
  // mu(B_r) = I_{sin^2(r/2)}(a+1, b+1).
  double ball_volume(double r) const;
  // 1 - mu(B_r), accurate near r = pi.
  double ball_volume_complement(double r) const;

  // cos of the geodesic distance between two vector-model points. Inputs are
  // assumed to be unit vectors of length vector_length(); no validation.
  double cos_distance(std::span<const double> x, std::span<const double> y) const;

  // Geodesic distance of two vector-model points without validation; accurate
  // for nearly coincident and nearly antipodal pairs.
  double vector_distance(std::span<const double> x, std::span<const double> y) const;

  // Validated distance in [0, pi]. Throws on mixed representations, on
  // matrix indices from different tables and on non-unit vectors.
  double distance(const PointRepr& x, const PointRepr& y) const;

  // Throws DomainError unless x is a unit vector of the right length.
  void check_vector(std::span<const double> x) const;

  friend bool operator==(const Space& l, const Space& r) { return l.kind_ == r.kind_; }

 private:
  SpaceKind kind_;
  SpaceParams params_;
};

// Quaternion helpers for the P^n(H) model: q = w + xi + yj + zk.
struct Quaternion {
  double w = 0, x = 0, y = 0, z = 0;

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
  }
  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
  }
};

inline constexpr double kUnitTolerance = 1e-12;

}  // namespace geodisc
