#include "tvnewton/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace tvn {

namespace {

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ConfigurationError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw ConfigurationError("cannot open '" + path + "' for writing");
  return out;
}

double parse_double(const std::string& field, const std::string& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError(path + ":" + std::to_string(line) + ": not a number: '" + field + "'");
  }
}

}  // namespace

Matrix<double> read_csv_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_double(field, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigurationError(path + ": empty matrix file");
  Matrix<double> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv_matrix(const Matrix<double>& m, const std::string& path) {
  std::ofstream out = open_out(path);
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  if (!out) throw ConfigurationError("write failed: '" + path + "'");
}

ImageGrid<double> read_csv_image(const std::string& path) {
  const Matrix<double> m = read_csv_matrix(path);
  ImageGrid<double> img(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) img(i, j) = m(i, j);
  return img;
}

void write_csv_image(const ImageGrid<double>& img, const std::string& path) {
  Matrix<double> m(img.rows, img.cols);
  for (Index i = 0; i < img.rows; ++i)
    for (Index j = 0; j < img.cols; ++j) m(i, j) = img(i, j);
  write_csv_matrix(m, path);
}

void write_pgm16(const ImageGrid<double>& img, const std::string& path) {
  std::ofstream out = open_out(path, std::ios::binary);
  out << "P5\n" << img.cols << ' ' << img.rows << "\n65535\n";
  const double lo = img.values.minCoeff(), hi = img.values.maxCoeff();
  const double span = hi - lo;
  for (Index k = 0; k < img.size(); ++k) {
    const double t = span > 0.0 ? (img.values[k] - lo) / span : 0.0;
    const auto v = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
    const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw ConfigurationError("write failed: '" + path + "'");
}

ImageGrid<double> read_pgm16(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  std::string magic;
  Index cols = 0, rows = 0;
  int maxval = 0;
  in >> magic >> cols >> rows >> maxval;
  if (magic != "P5" || maxval != 65535 || cols <= 0 || rows <= 0)
    throw ConfigurationError(path + ": not a 16-bit binary PGM");
  in.get();
  ImageGrid<double> img(rows, cols);
  for (Index k = 0; k < img.size(); ++k) {
    unsigned char bytes[2];
    if (!in.read(reinterpret_cast<char*>(bytes), 2)) throw ConfigurationError(path + ": truncated PGM data");
    img.values[k] = static_cast<double>((bytes[0] << 8) | bytes[1]);
  }
  return img;
}

}  // namespace tvn
