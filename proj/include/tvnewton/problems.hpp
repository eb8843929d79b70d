#pragma once

#include "tvnewton/config.hpp"
#include "tvnewton/image.hpp"
#include "tvnewton/l1_problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tvn {

/// A filled shape in pixel coordinates (row, col of pixel centers).
/// Disks use size_a as radius; rectangles use size_a x size_b as
/// height x width.
struct Shape {
  enum class Kind { Disk, Rect };
  Kind kind = Kind::Disk;
  double center_row = 0.0;
  double center_col = 0.0;
  double size_a = 0.0;
  double size_b = 0.0;
  double value = 1.0;
};

/// Piecewise-constant image; later shapes overwrite earlier ones.
ImageGrid<double> phantom_piecewise(Index n_row, Index n_col, const std::vector<Shape>& shapes, double background);

/// "disk r c radius value; rect r c height width value; ..."
std::vector<Shape> parse_shapes(const std::string& text);
std::string format_shapes(const std::vector<Shape>& shapes);
std::vector<Shape> default_shapes(Index n_row, Index n_col);

struct NoisyData {
  Vector<double> b;
  double delta_abs = 0.0;  // realized |b_noisy - b|
};

/// b + rel_level * |b| / sqrt(m) * g with g standard normal from seed.
NoisyData add_noise(const Vector<double>& b, double rel_level, std::uint64_t seed);

struct GeneratedProblem {
  L1Problem<double> problem;
  ImageGrid<double> truth;
  Vector<double> clean_data;
  double delta_abs = 0.0;
};

/// Assembles operator, phantom, noisy data and alpha from the [problem]
/// section. Both operators must pass the adjoint test before this returns.
GeneratedProblem make_problem(Config& config);

}  // namespace tvn
