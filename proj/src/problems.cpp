#include "tvnewton/problems.hpp"

#include "tvnewton/alm.hpp"
#include "tvnewton/blur.hpp"
#include "tvnewton/io.hpp"
#include "tvnewton/radon.hpp"
#include "tvnewton/spectral.hpp"
#include "tvnewton/tv.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace tvn {

ImageGrid<double> phantom_piecewise(Index n_row, Index n_col, const std::vector<Shape>& shapes, double background) {
  ImageGrid<double> img(n_row, n_col);
  img.values.setConstant(background);
  for (const Shape& s : shapes) {
    if (s.center_row < 0 || s.center_row > static_cast<double>(n_row - 1) || s.center_col < 0 ||
        s.center_col > static_cast<double>(n_col - 1))
      throw ConfigurationError("problem.shapes: shape center lies outside the image");
    if (s.size_a <= 0 || (s.kind == Shape::Kind::Rect && s.size_b <= 0))
      throw ConfigurationError("problem.shapes: shape sizes must be positive");
    for (Index i = 0; i < n_row; ++i)
      for (Index j = 0; j < n_col; ++j) {
        const double dr = static_cast<double>(i) - s.center_row;
        const double dc = static_cast<double>(j) - s.center_col;
        const bool inside = s.kind == Shape::Kind::Disk
                                ? dr * dr + dc * dc <= s.size_a * s.size_a
                                : std::abs(dr) <= 0.5 * s.size_a && std::abs(dc) <= 0.5 * s.size_b;
        if (inside) img(i, j) = s.value;
      }
  }
  return img;
}

std::vector<Shape> parse_shapes(const std::string& text) {
  std::vector<Shape> shapes;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::istringstream in(item);
    std::string kind;
    if (!(in >> kind)) continue;
    Shape s;
    if (kind == "disk") {
      s.kind = Shape::Kind::Disk;
      in >> s.center_row >> s.center_col >> s.size_a >> s.value;
    } else if (kind == "rect") {
      s.kind = Shape::Kind::Rect;
      in >> s.center_row >> s.center_col >> s.size_a >> s.size_b >> s.value;
    } else {
      throw ConfigurationError("problem.shapes: unknown shape kind '" + kind + "'");
    }
    std::string extra;
    if (in.fail() || (in >> extra)) throw ConfigurationError("problem.shapes: malformed entry '" + item + "'");
    shapes.push_back(s);
  }
  return shapes;
}

std::string format_shapes(const std::vector<Shape>& shapes) {
  std::ostringstream os;
  for (std::size_t q = 0; q < shapes.size(); ++q) {
    const Shape& s = shapes[q];
    if (q) os << "; ";
    if (s.kind == Shape::Kind::Disk)
      os << "disk " << format_double(s.center_row) << ' ' << format_double(s.center_col) << ' '
         << format_double(s.size_a) << ' ' << format_double(s.value);
    else
      os << "rect " << format_double(s.center_row) << ' ' << format_double(s.center_col) << ' '
         << format_double(s.size_a) << ' ' << format_double(s.size_b) << ' ' << format_double(s.value);
  }
  return os.str();
}

std::vector<Shape> default_shapes(Index n_row, Index n_col) {
  const double h = static_cast<double>(n_row), w = static_cast<double>(n_col);
  const double m = std::min(h, w);
  return {
      {Shape::Kind::Disk, 0.5 * (h - 1), 0.5 * (w - 1), 0.38 * m, 0.0, 1.0},
      {Shape::Kind::Rect, 0.35 * h, 0.4 * w, 0.25 * h, 0.2 * w, 0.4},
      {Shape::Kind::Disk, 0.62 * h, 0.62 * w, 0.12 * m, 0.0, 0.7},
  };
}

NoisyData add_noise(const Vector<double>& b, double rel_level, std::uint64_t seed) {
  if (rel_level < 0) throw ConfigurationError("problem.noise: must be nonnegative");
  NoisyData out{b, 0.0};
  if (rel_level == 0.0 || b.size() == 0) return out;
  const Vector<double> g = seeded_normal_vector<double>(b.size(), seed);
  out.b = b + (rel_level * b.norm() / std::sqrt(static_cast<double>(b.size()))) * g;
  out.delta_abs = (out.b - b).norm();
  return out;
}

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      v.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw ConfigurationError(key + ": expected a comma-separated list of numbers");
    }
  }
  return v;
}

void adjoint_gate(const LinearMap<double>& op, const char* name) {
  const double mismatch = adjoint_mismatch(op);
  if (!(mismatch <= 1e-10))
    throw ConfigurationError(std::string(name) + ": adjoint test failed (relative mismatch " + format_double(mismatch) +
                             ")");
}

}  // namespace

GeneratedProblem make_problem(Config& config) {
  GeneratedProblem out;
  const std::string op = config.get_string("problem.operator", "radon");
  const auto seed = static_cast<std::uint64_t>(config.get_long("problem.seed", 0));

  Index n_row = config.get_long("problem.n_row", 32);
  Index n_col = config.get_long("problem.n_col", 32);
  if (n_row <= 0) throw ConfigurationError("problem.n_row: must be positive");
  if (n_col <= 0) throw ConfigurationError("problem.n_col: must be positive");

  if (config.has("problem.truth_file")) {
    out.truth = read_csv_image(config.require_string("problem.truth_file"));
    if (out.truth.rows != n_row || out.truth.cols != n_col)
      throw ConfigurationError("problem.truth_file: image is " + std::to_string(out.truth.rows) + "x" +
                               std::to_string(out.truth.cols) + ", expected n_row x n_col = " +
                               std::to_string(n_row) + "x" + std::to_string(n_col));
  } else {
    const std::string shapes_text = config.get_string("problem.shapes", format_shapes(default_shapes(n_row, n_col)));
    out.truth = phantom_piecewise(n_row, n_col, parse_shapes(shapes_text),
                                  config.get_double("problem.background", 0.0));
  }

  OperatorPtr<double> A;
  if (op == "radon") {
    RadonGeometry g;
    g.n_row = n_row;
    g.n_col = n_col;
    g.n_angles = config.get_long("problem.n_angles", 30);
    g.n_rays = config.get_long(
        "problem.n_rays", static_cast<long>(std::ceil(std::hypot(static_cast<double>(n_row), static_cast<double>(n_col)))));
    g.angle_fraction = config.get_double("problem.angle_fraction", 1.0);
    if (g.n_angles <= 0) throw ConfigurationError("problem.n_angles: must be positive");
    if (g.n_rays <= 0) throw ConfigurationError("problem.n_rays: must be positive");
    if (!(g.angle_fraction > 0.0 && g.angle_fraction <= 1.0))
      throw ConfigurationError("problem.angle_fraction: must lie in (0, 1]");
    A = radon_operator<double>(g);
  } else if (op == "blur") {
    const long radius = config.get_long("problem.blur_radius", 2);
    if (radius < 0) throw ConfigurationError("problem.blur_radius: must be nonnegative");
    std::vector<double> w;
    if (config.has("problem.blur_weights")) {
      w = parse_list("problem.blur_weights", config.require_string("problem.blur_weights"));
      if (static_cast<long>(w.size()) != 2 * radius + 1)
        throw ConfigurationError("problem.blur_weights: need 2*blur_radius+1 = " + std::to_string(2 * radius + 1) +
                                 " weights");
    } else {
      w = gaussian_kernel<double>(radius, config.get_double("problem.blur_width", 1.0));
    }
    try {
      A = blur_operator<double>(n_row, n_col, radius, w);
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(std::string("problem.blur_weights: ") + e.what());
    }
  } else if (op == "dense") {
    const std::string file = config.require_string("problem.matrix_file");
    Matrix<double> m;
    try {
      m = read_csv_matrix(file);
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(std::string("problem.matrix_file: ") + e.what());
    }
    if (m.cols() != n_row * n_col)
      throw ConfigurationError("problem.matrix_file: matrix has " + std::to_string(m.cols()) +
                               " columns but n_row*n_col = " + std::to_string(n_row * n_col));
    A = std::make_shared<DenseMap<double>>(std::move(m));
  } else {
    throw ConfigurationError("problem.operator: unknown operator '" + op + "' (radon, blur, dense)");
  }
  OperatorPtr<double> B = std::make_shared<TvDifference<double>>(n_row, n_col);
  adjoint_gate(*A, "problem.operator");
  adjoint_gate(*B, "TV operator");

  out.clean_data = A->forward(out.truth.values);
  const NoisyData noisy = add_noise(out.clean_data, config.get_double("problem.noise", 0.05), seed);
  out.delta_abs = noisy.delta_abs;

  L1Problem<double>& p = out.problem;
  p.A = A;
  p.B = B;
  p.b = noisy.b;
  p.compute_spectra(200, 1e-4, seed);

  if (!config.has("problem.alpha")) throw ConfigurationError("problem.alpha: required key is missing (number or 'auto')");
  const std::string alpha_text = config.require_string("problem.alpha");
  if (alpha_text == "auto") {
    if (!config.has("problem.delta"))
      throw ConfigurationError("problem.delta: required when problem.alpha = auto (number or 'noise')");
    const std::string delta_text = config.require_string("problem.delta");
    const double delta = delta_text == "noise" ? out.delta_abs : config.require_double("problem.delta");
    if (!(delta > 0.0)) throw ConfigurationError("problem.delta: must be positive to derive alpha");
    const long samples = config.get_long("problem.alpha_samples", 10);
    p.alpha = auto_alpha<double>(*A, *B, delta, static_cast<int>(samples), seed);
    config.set("problem.alpha_resolved", format_double(p.alpha));
  } else {
    p.alpha = config.require_double("problem.alpha");
    if (!(p.alpha > 0.0)) throw ConfigurationError("problem.alpha: must be positive");
  }
  p.validate();
  return out;
}

}  // namespace tvn
