#pragma once

#include "tvnewton/image.hpp"

#include <string>

namespace tvn {

/// Dense matrix from CSV, one matrix row per line. Blank lines are skipped.
Matrix<double> read_csv_matrix(const std::string& path);
void write_csv_matrix(const Matrix<double>& m, const std::string& path);

/// Images as CSV use the same layout: n_row lines of n_col values.
ImageGrid<double> read_csv_image(const std::string& path);
void write_csv_image(const ImageGrid<double>& img, const std::string& path);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples). Values are
/// min-max scaled to [0, 65535]; a constant image maps to 0.
void write_pgm16(const ImageGrid<double>& img, const std::string& path);
/// Raw 16-bit samples as doubles in [0, 65535].
ImageGrid<double> read_pgm16(const std::string& path);

}  // namespace tvn
