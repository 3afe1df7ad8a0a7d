#include "geodisc/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "geodisc/error.hpp"

namespace geodisc {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

int field_dim(Family f) {
  switch (f) {
    case Family::ProjReal: return 1;
    case Family::ProjComplex: return 2;
    case Family::ProjQuaternion: return 4;
    case Family::ProjOctonion: return 8;
    default: return 0;
  }
}

void check_radius(double r) {
  if (!(r >= 0.0 && r <= std::numbers::pi))
    throw DomainError("radius must lie in [0, pi], got " + std::to_string(r));
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Sphere: return "sphere";
    case Family::ProjReal: return "real";
    case Family::ProjComplex: return "complex";
    case Family::ProjQuaternion: return "quaternion";
    case Family::ProjOctonion: return "octonion";
    case Family::Abstract: return "abstract";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  const std::string s = lower(name);
  if (s == "sphere" || s == "s") return Family::Sphere;
  if (s == "real" || s == "rp" || s == "projreal") return Family::ProjReal;
  if (s == "complex" || s == "cp" || s == "projcomplex") return Family::ProjComplex;
  if (s == "quaternion" || s == "hp" || s == "projquaternion") return Family::ProjQuaternion;
  if (s == "octonion" || s == "op" || s == "projoctonion") return Family::ProjOctonion;
  if (s == "abstract") return Family::Abstract;
  throw DomainError("unknown space family '" + name + "'");
}

SpaceKind parse_space(const std::string& text) {
  std::string s = lower(text);
  s.erase(std::remove(s.begin(), s.end(), ':'), s.end());
  std::size_t split = s.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(s[split - 1]))) --split;
  const std::string head = s.substr(0, split);
  const std::string digits = s.substr(split);
  const Family fam = family_from_string(head);
  if (fam == Family::Abstract) throw DomainError("abstract spaces need explicit d and d0");
  if (fam == Family::ProjOctonion) {
    if (!digits.empty() && digits != "2") throw DomainError("octonionic projective space exists only for n = 2");
    return SpaceKind::octonion();
  }
  if (digits.empty()) throw DomainError("missing dimension in space name '" + text + "'");
  SpaceKind k{fam, std::stoi(digits)};
  space_params(k);
  return k;
}

SpaceParams space_params(const SpaceKind& kind) {
  SpaceParams p;
  switch (kind.family) {
    case Family::Sphere:
      if (kind.n < 1) throw DomainError("sphere dimension must be >= 1");
      p.d = kind.n;
      p.d0 = kind.n;
      break;
    case Family::ProjReal:
    case Family::ProjComplex:
    case Family::ProjQuaternion:
      if (kind.n < 2) throw DomainError("projective index must be >= 2");
      p.d0 = field_dim(kind.family);
      p.d = kind.n * p.d0;
      break;
    case Family::ProjOctonion:
      if (kind.n != 2) throw DomainError("octonionic projective space exists only for n = 2");
      p.d0 = 8;
      p.d = 16;
      break;
    case Family::Abstract:
      if (kind.abstract_d < 1 || kind.abstract_d0 < 1 || kind.abstract_d0 > kind.abstract_d)
        throw DomainError("abstract space needs 1 <= d0 <= d");
      p.d = kind.abstract_d;
      p.d0 = kind.abstract_d0;
      break;
  }
  p.a = (p.d - 2) / 2.0;
  p.b = (p.d0 - 2) / 2.0;
  p.c_ab = std::exp(std::lgamma(p.a + p.b + 2) - std::lgamma(p.a + 1) - std::lgamma(p.b + 1));
  return p;
}

DistanceMatrix::DistanceMatrix(const std::vector<std::vector<double>>& rows) : n_(rows.size()) {
  if (n_ == 0) throw DomainError("distance matrix is empty");
  data_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw DomainError("distance matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = rows[i][j];
      if (!(v >= 0.0 && v <= std::numbers::pi))
        throw DomainError("distance matrix entry outside [0, pi] at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      data_[i * n_ + j] = v;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (data_[i * n_ + i] != 0.0) throw DomainError("distance matrix has a nonzero diagonal");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(data_[i * n_ + j] - data_[j * n_ + i]) > 1e-12)
        throw DomainError("distance matrix is not symmetric");
  }
}

std::vector<std::vector<double>> DistanceMatrix::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = data_[i * n_ + j];
  return out;
}

Space::Space(SpaceKind kind) : kind_(kind), params_(space_params(kind)) {}

bool Space::has_vector_model() const {
  return kind_.family != Family::ProjOctonion && kind_.family != Family::Abstract;
}

std::size_t Space::vector_length() const {
  switch (kind_.family) {
    case Family::Sphere: return kind_.n + 1;
    case Family::ProjReal:
    case Family::ProjComplex:
    case Family::ProjQuaternion: return static_cast<std::size_t>(kind_.n + 1) * field_dim(kind_.family);
    default: return 0;
  }
}

std::string Space::name() const {
  switch (kind_.family) {
    case Family::Sphere: return "sphere" + std::to_string(kind_.n);
    case Family::ProjReal: return "real" + std::to_string(kind_.n);
    case Family::ProjComplex: return "complex" + std::to_string(kind_.n);
    case Family::ProjQuaternion: return "quaternion" + std::to_string(kind_.n);
    case Family::ProjOctonion: return "octonion2";
    case Family::Abstract:
      return "abstract(d=" + std::to_string(params_.d) + ",d0=" + std::to_string(params_.d0) + ")";
  }
  return "?";
}

double Space::radial_density(double r) const {
  check_radius(r);
  const double s = std::sin(r / 2);
  const double c = std::sin((std::numbers::pi - r) / 2);
  return params_.c_ab * std::pow(s, 2 * params_.a + 1) * std::pow(c, 2 * params_.b + 1);
}

double Space::ball_volume(double r) const {
  check_radius(r);
  const double s = std::sin(r / 2);
  return boost::math::ibeta(params_.a + 1, params_.b + 1, s * s);
}

double Space::ball_volume_complement(double r) const {
  check_radius(r);
  const double s = std::sin(r / 2);
  return boost::math::ibetac(params_.a + 1, params_.b + 1, s * s);
}

double Space::cos_distance(std::span<const double> x, std::span<const double> y) const {
  const std::size_t len = x.size();
  switch (kind_.family) {
    case Family::Sphere: {
      double dot = 0;
      for (std::size_t i = 0; i < len; ++i) dot += x[i] * y[i];
      return std::clamp(dot, -1.0, 1.0);
    }
    case Family::ProjReal: {
      double dot = 0;
      for (std::size_t i = 0; i < len; ++i) dot += x[i] * y[i];
      return std::clamp(2 * dot * dot - 1, -1.0, 1.0);
    }
    case Family::ProjComplex: {
      // sum conj(x_i) y_i
      double re = 0, im = 0;
      for (std::size_t i = 0; i < len; i += 2) {
        re += x[i] * y[i] + x[i + 1] * y[i + 1];
        im += x[i] * y[i + 1] - x[i + 1] * y[i];
      }
      return std::clamp(2 * (re * re + im * im) - 1, -1.0, 1.0);
    }
    case Family::ProjQuaternion: {
      Quaternion acc;
      for (std::size_t i = 0; i < len; i += 4) {
        const Quaternion p{x[i], x[i + 1], x[i + 2], x[i + 3]};
        const Quaternion q{y[i], y[i + 1], y[i + 2], y[i + 3]};
        acc = acc + p.conj() * q;
      }
      return std::clamp(2 * acc.norm2() - 1, -1.0, 1.0);
    }
    default:
      throw UnsupportedError("no vector model for " + name());
  }
}

void Space::check_vector(std::span<const double> x) const {
  if (!has_vector_model()) throw UnsupportedError("no vector model for " + name());
  if (x.size() != vector_length())
    throw DomainError("point has " + std::to_string(x.size()) + " components, expected " +
                      std::to_string(vector_length()) + " for " + name());
  double s = 0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("point has a non-finite component");
    s += v * v;
  }
  if (std::abs(std::sqrt(s) - 1.0) > kUnitTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "point is not a unit vector (norm " << std::sqrt(s) << ")";
    throw DomainError(os.str());
  }
}

double Space::vector_distance(std::span<const double> x, std::span<const double> y) const {
  // Half-angle forms avoid acos near 0 and pi. For lines, align y with x by the
  // unit scalar u = <x,y>/|<x,y>|; then |xu - y|^2 = 2(1 - |<x,y>|).
  const std::size_t len = x.size();
  if (kind_.family == Family::Sphere) {
    double dm = 0, dp = 0;
    for (std::size_t i = 0; i < len; ++i) {
      dm += (x[i] - y[i]) * (x[i] - y[i]);
      dp += (x[i] + y[i]) * (x[i] + y[i]);
    }
    return 2 * std::atan2(std::sqrt(dm), std::sqrt(dp));
  }
  const int f = field_dim(kind_.family);
  if (f == 0) throw UnsupportedError("no vector model for " + name());
  Quaternion ip;
  for (std::size_t i = 0; i < len; i += f) {
    Quaternion p{x[i], f > 1 ? x[i + 1] : 0, f > 2 ? x[i + 2] : 0, f > 2 ? x[i + 3] : 0};
    Quaternion q{y[i], f > 1 ? y[i + 1] : 0, f > 2 ? y[i + 2] : 0, f > 2 ? y[i + 3] : 0};
    ip = ip + p.conj() * q;
  }
  const double s = std::sqrt(ip.norm2());
  if (s == 0.0) return std::numbers::pi;
  const Quaternion u{ip.w / s, ip.x / s, ip.y / s, ip.z / s};
  double e = 0;
  for (std::size_t i = 0; i < len; i += f) {
    Quaternion p{x[i], f > 1 ? x[i + 1] : 0, f > 2 ? x[i + 2] : 0, f > 2 ? x[i + 3] : 0};
    Quaternion q{y[i], f > 1 ? y[i + 1] : 0, f > 2 ? y[i + 2] : 0, f > 2 ? y[i + 3] : 0};
    const Quaternion pu = p * u;
    e += (pu.w - q.w) * (pu.w - q.w) + (pu.x - q.x) * (pu.x - q.x) + (pu.y - q.y) * (pu.y - q.y) +
         (pu.z - q.z) * (pu.z - q.z);
  }
  const double one_minus = std::clamp(e / 2, 0.0, 1.0);
  const double sc = std::min(s, 1.0);
  return 2 * std::atan2(std::sqrt(one_minus * (1 + sc)), sc);
}

double Space::distance(const PointRepr& x, const PointRepr& y) const {
  if (x.index() != y.index()) throw DomainError("mixed point representations");
  if (const auto* mx = std::get_if<MatrixIndex>(&x)) {
    const auto& my = std::get<MatrixIndex>(y);
    if (!mx->matrix || mx->matrix != my.matrix) throw DomainError("matrix indices refer to different tables");
    if (mx->row >= mx->matrix->size() || my.row >= mx->matrix->size())
      throw DomainError("matrix index out of range");
    return (*mx->matrix)(mx->row, my.row);
  }
  const auto& vx = std::get<VectorPoint>(x).coords;
  const auto& vy = std::get<VectorPoint>(y).coords;
  check_vector(vx);
  check_vector(vy);
  return vector_distance(vx, vy);
}

}  // namespace geodisc
