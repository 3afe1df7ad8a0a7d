#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "geodisc/pointset.hpp"
#include "geodisc/rng.hpp"

namespace geodisc {

enum class GeneratorKind { UniformIID, FibonacciSphere, TDesignFile, Matrix };

GeneratorKind generator_from_string(const std::string& s);
std::string to_string(GeneratorKind g);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UniformIID;
  std::size_t N = 1;
  std::uint64_t seed = 0;
  std::string path;
};

// One uniform point: a normalized standard Gaussian vector in the model.
void draw_uniform_point(const Space& space, PhiloxStream& rng, std::span<double> out);

// N i.i.d. uniform points with equal weights. Point j uses the stream
// (seed, PointSampling, j), so the output does not depend on the thread count.
WeightedPointSet sample_uniform(const Space& space, std::size_t N, std::uint64_t seed, int threads = 0);

// Golden-angle spiral on S^2 with equal weights.
WeightedPointSet fibonacci_sphere(std::size_t N);

// Replicates the last point until there are N_target points, splitting its
// weight evenly over the copies.
WeightedPointSet duplicate_pad(const WeightedPointSet& ps, std::size_t N_target);

enum class PointFormat { Auto, Native, TDesign, Matrix };

PointFormat format_from_string(const std::string& s);

// Native JSON: {"space": {"family", "n"}, "points": [[...]], "weights": [...]}
// or, for matrix-backed sets, "distances" in place of "points". t-design
// files hold one unit vector per line and get equal weights; when `space` is
// not given the sphere of matching dimension is assumed. Matrix files are a
// square table of radians (text or JSON) and need `space`.
WeightedPointSet load_pointset(const std::string& path, PointFormat format = PointFormat::Auto,
                               const std::optional<Space>& space = std::nullopt);
void save_pointset(const WeightedPointSet& ps, const std::string& path, PointFormat format = PointFormat::Native);

// Builds a point set from a generator spec; TDesignFile and Matrix read `path`.
WeightedPointSet generate(const Space& space, const GeneratorSpec& spec, int threads = 0);

}  // namespace geodisc
