#pragma once

#include <string>

#include "facmod/datagen.hpp"
#include "facmod/sym_matrix.hpp"

namespace facmod {

struct MatrixFile {
  bool is_samples = false;
  SymmetricMatrix covariance;  // set when !is_samples
  SampleSet samples;           // set when is_samples
};

// Reads a CSV whose first line is "# samples n=<n>" or "# covariance n=<n>",
// followed by one observation or matrix row per line.  Malformed content
// raises InputError naming the file.
MatrixFile read_matrix_file(const std::string& path);

// Writes "# covariance n=<n>" plus the rows at full precision; the output
// reads back through read_matrix_file.
void write_matrix_csv(const std::string& path, const SymmetricMatrix& m);

void write_samples_csv(const std::string& path, const SampleSet& s);

// %.17g rendering shared by every CSV writer.
std::string format_double(double v);

}  // namespace facmod
