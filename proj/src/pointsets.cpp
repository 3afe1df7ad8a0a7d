#include "geodisc/pointsets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "geodisc/error.hpp"
#include "geodisc/io.hpp"
#include "geodisc/kernels.hpp"
#include "json.hpp"

namespace geodisc {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
  return lower(path.substr(dot + 1));
}

std::vector<std::vector<double>> parse_table(const std::string& text, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DomainError(path + ":" + std::to_string(lineno) + ": not a number: '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError(path + ": no data");
  return rows;
}

std::vector<std::vector<double>> json_matrix(const json& j, const std::string& what) {
  if (!j.is_array()) throw DomainError(what + " must be an array of arrays");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw DomainError(what + " must be an array of arrays");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw DomainError(what + " has a non-numeric entry");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WeightedPointSet load_native(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(path + ": malformed JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("space")) throw DomainError(path + ": missing 'space'");
  const Space space(space_from_json(j.at("space")));
  std::vector<double> weights;
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) throw DomainError(path + ": 'weights' must be an array");
    for (const auto& v : j["weights"]) {
      if (!v.is_number()) throw DomainError(path + ": non-numeric weight");
      weights.push_back(v.get<double>());
    }
  }
  try {
    if (j.contains("distances")) {
      auto mat = std::make_shared<const DistanceMatrix>(json_matrix(j["distances"], "'distances'"));
      return WeightedPointSet::from_matrix(space, mat, std::move(weights));
    }
    if (!j.contains("points")) throw DomainError("missing 'points' or 'distances'");
    return WeightedPointSet::from_vectors(space, json_matrix(j["points"], "'points'"), std::move(weights));
  } catch (const UnsupportedError&) {
    throw;
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

}  // namespace

GeneratorKind generator_from_string(const std::string& s) {
  const std::string k = lower(s);
  if (k == "uniform" || k == "iid" || k == "uniformiid") return GeneratorKind::UniformIID;
  if (k == "fibonacci" || k == "fibonaccisphere") return GeneratorKind::FibonacciSphere;
  if (k == "tdesign" || k == "design" || k == "tdesignfile") return GeneratorKind::TDesignFile;
  if (k == "matrix") return GeneratorKind::Matrix;
  throw DomainError("unknown generator '" + s + "'");
}

std::string to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::UniformIID: return "uniform";
    case GeneratorKind::FibonacciSphere: return "fibonacci";
    case GeneratorKind::TDesignFile: return "tdesign";
    case GeneratorKind::Matrix: return "matrix";
  }
  return "?";
}

PointFormat format_from_string(const std::string& s) {
  const std::string k = lower(s);
  if (k == "auto") return PointFormat::Auto;
  if (k == "native" || k == "json") return PointFormat::Native;
  if (k == "tdesign" || k == "design" || k == "txt") return PointFormat::TDesign;
  if (k == "matrix") return PointFormat::Matrix;
  throw DomainError("unknown point format '" + s + "'");
}

void draw_uniform_point(const Space& space, PhiloxStream& rng, std::span<double> out) {
  if (!space.has_vector_model()) throw UnsupportedError("no uniform sampler for " + space.name());
  for (;;) {
    double s = 0.0;
    for (double& v : out) {
      v = rng.gaussian();
      s += v * v;
    }
    if (s > 1e-300) {
      const double inv = 1.0 / std::sqrt(s);
      for (double& v : out) v *= inv;
      return;
    }
  }
}

WeightedPointSet sample_uniform(const Space& space, std::size_t N, std::uint64_t seed, int threads) {
  if (!space.has_vector_model()) throw UnsupportedError("no uniform sampler for " + space.name());
  if (N < 1) throw DomainError("need N >= 1");
  const std::size_t len = space.vector_length();
  std::vector<double> coords(N * len);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(N); ++j) {
    PhiloxStream rng(seed, stream_id(StreamTag::PointSampling, static_cast<std::uint64_t>(j)));
    draw_uniform_point(space, rng, std::span<double>(coords.data() + j * len, len));
  }
  return WeightedPointSet::from_flat(space, std::move(coords));
}

WeightedPointSet fibonacci_sphere(std::size_t N) {
  if (N < 1) throw DomainError("need N >= 1");
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  std::vector<double> coords(3 * N);
  for (std::size_t j = 0; j < N; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(N);
    double frac = std::fmod(static_cast<double>(j) * inv_phi, 1.0);
    const double az = 2 * std::numbers::pi * frac;
    const double rho = std::sqrt(std::max(0.0, (1 - z) * (1 + z)));
    coords[3 * j] = rho * std::cos(az);
    coords[3 * j + 1] = rho * std::sin(az);
    coords[3 * j + 2] = z;
  }
  return WeightedPointSet::from_flat(Space(SpaceKind::sphere(2)), std::move(coords));
}

WeightedPointSet duplicate_pad(const WeightedPointSet& ps, std::size_t N_target) {
  const std::size_t n = ps.size();
  if (N_target < n) throw DomainError("padding target is smaller than the point count");
  if (N_target == n) return ps;
  std::vector<double> w = ps.weights();
  const double share = w.back() / static_cast<double>(N_target - n + 1);
  w.back() = share;
  w.resize(N_target, share);
  if (ps.matrix_backed()) {
    const auto& D = *ps.matrix();
    std::vector<std::vector<double>> rows(N_target, std::vector<double>(N_target));
    for (std::size_t i = 0; i < N_target; ++i)
      for (std::size_t k = 0; k < N_target; ++k) rows[i][k] = D(std::min(i, n - 1), std::min(k, n - 1));
    for (std::size_t i = 0; i < N_target; ++i) rows[i][i] = 0.0;
    return WeightedPointSet::from_matrix(ps.space(), std::make_shared<const DistanceMatrix>(rows), std::move(w));
  }
  std::vector<double> coords = ps.coords();
  const auto last = ps.point(n - 1);
  for (std::size_t j = n; j < N_target; ++j) coords.insert(coords.end(), last.begin(), last.end());
  return WeightedPointSet::from_flat(ps.space(), std::move(coords), std::move(w));
}

WeightedPointSet load_pointset(const std::string& path, PointFormat format, const std::optional<Space>& space) {
  const std::string text = read_text_file(path);
  if (format == PointFormat::Auto) {
    const std::string ext = extension(path);
    format = ext == "json" ? PointFormat::Native : PointFormat::TDesign;
    if (format == PointFormat::Native && space) {
      // a bare JSON matrix needs the space from the caller
      const auto pos = text.find_first_not_of(" \t\r\n");
      if (pos != std::string::npos && text[pos] == '[') format = PointFormat::Matrix;
    }
  }
  switch (format) {
    case PointFormat::Native: {
      WeightedPointSet ps = load_native(text, path);
      if (space && !(ps.space() == *space))
        throw DomainError(path + ": file is on " + ps.space().name() + ", expected " + space->name());
      return ps;
    }
    case PointFormat::TDesign: {
      const auto rows = parse_table(text, path);
      const Space sp = space ? *space : Space(SpaceKind::sphere(static_cast<int>(rows.front().size()) - 1));
      if (sp.family() != Family::Sphere) throw DomainError("t-design files are only defined on spheres");
      try {
        return WeightedPointSet::from_vectors(sp, rows);
      } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
      }
    }
    case PointFormat::Matrix: {
      if (!space) throw DomainError(path + ": a distance matrix needs an explicit space");
      std::vector<std::vector<double>> rows;
      const auto pos = text.find_first_not_of(" \t\r\n");
      if (pos != std::string::npos && text[pos] == '[') {
        try {
          rows = json_matrix(json::parse(text), "distance matrix");
        } catch (const json::exception& e) {
          throw DomainError(path + ": malformed JSON: " + e.what());
        }
      } else {
        rows = parse_table(text, path);
      }
      try {
        return WeightedPointSet::from_matrix(*space, std::make_shared<const DistanceMatrix>(rows));
      } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
      }
    }
    case PointFormat::Auto: break;
  }
  throw DomainError("unreachable point format");
}

void save_pointset(const WeightedPointSet& ps, const std::string& path, PointFormat format) {
  if (format == PointFormat::Auto) format = extension(path) == "json" ? PointFormat::Native : PointFormat::TDesign;
  std::ostringstream os;
  os << std::setprecision(17);
  switch (format) {
    case PointFormat::Auto:
    case PointFormat::Native: {
      json j;
      j["space"] = space_to_json(ps.space());
      if (ps.matrix_backed()) {
        j["distances"] = ps.matrix()->rows();
      } else {
        json pts = json::array();
        for (std::size_t k = 0; k < ps.size(); ++k) {
          auto p = ps.point(k);
          pts.push_back(std::vector<double>(p.begin(), p.end()));
        }
        j["points"] = std::move(pts);
      }
      j["weights"] = ps.weights();
      os << j.dump(1) << "\n";
      break;
    }
    case PointFormat::TDesign: {
      if (ps.space().family() != Family::Sphere || ps.matrix_backed())
        throw DomainError("t-design files are only defined for sphere vectors");
      const double w0 = ps.weight(0);
      for (double w : ps.weights())
        if (w != w0) throw DomainError("t-design files carry equal weights only; use the native JSON format");
      for (std::size_t k = 0; k < ps.size(); ++k) {
        auto p = ps.point(k);
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
        os << "\n";
      }
      break;
    }
    case PointFormat::Matrix: {
      const std::size_t n = ps.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) os << (k ? " " : "") << ps.distance(i, k);
        os << "\n";
      }
      break;
    }
  }
  atomic_write_text(path, os.str());
}

WeightedPointSet generate(const Space& space, const GeneratorSpec& spec, int threads) {
  switch (spec.kind) {
    case GeneratorKind::UniformIID: return sample_uniform(space, spec.N, spec.seed, threads);
    case GeneratorKind::FibonacciSphere:
      if (!(space.kind() == SpaceKind::sphere(2))) throw DomainError("Fibonacci points exist only on sphere2");
      return fibonacci_sphere(spec.N);
    case GeneratorKind::TDesignFile:
      if (space.family() != Family::Sphere) throw DomainError("t-design files are only defined on spheres");
      return load_pointset(spec.path, PointFormat::TDesign, space);
    case GeneratorKind::Matrix: return load_pointset(spec.path, PointFormat::Matrix, space);
  }
  throw DomainError("unknown generator");
}

}  // namespace geodisc
