#include "facmod/matrix_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "facmod/errors.hpp"

namespace facmod {

namespace {

std::string parse_err(const std::string& path, const std::string& what) {
  return path + ": " + what;
}

// Accepts "# samples n=12" / "# covariance n=12" with flexible spacing.
bool parse_header(const std::string& line, bool& is_samples, int& n) {
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= line.size() || line[pos] != '#') return false;
  ++pos;
  skip_ws();
  size_t word_end = pos;
  while (word_end < line.size() &&
         std::isalpha(static_cast<unsigned char>(line[word_end])))
    ++word_end;
  const std::string word = line.substr(pos, word_end - pos);
  if (word == "samples") {
    is_samples = true;
  } else if (word == "covariance") {
    is_samples = false;
  } else {
    return false;
  }
  pos = word_end;
  skip_ws();
  if (line.compare(pos, 2, "n=") != 0) return false;
  pos += 2;
  char* end = nullptr;
  long parsed = std::strtol(line.c_str() + pos, &end, 10);
  if (end == line.c_str() + pos || parsed < 1 || parsed > 100000) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  n = static_cast<int>(parsed);
  return true;
}

std::vector<double> parse_row(const std::string& path, const std::string& line,
                              int line_no) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    std::string cell = line.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t a = 0, b = cell.size();
    while (a < b && std::isspace(static_cast<unsigned char>(cell[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(cell[b - 1]))) --b;
    cell = cell.substr(a, b - a);
    if (cell.empty())
      throw InputError(parse_err(path, "empty cell on line " +
                                           std::to_string(line_no)));
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v))
      throw InputError(parse_err(
          path, "bad number '" + cell + "' on line " + std::to_string(line_no)));
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(parse_err(path, "cannot open file"));

  std::string line;
  if (!std::getline(in, line))
    throw InputError(parse_err(path, "empty file"));

  MatrixFile out;
  int n = 0;
  if (!parse_header(line, out.is_samples, n))
    throw InputError(parse_err(
        path, "first line must be '# samples n=<n>' or '# covariance n=<n>'"));

  std::vector<double> values;
  int rows = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::vector<double> row = parse_row(path, line, line_no);
    if (static_cast<int>(row.size()) != n)
      throw InputError(parse_err(
          path, "line " + std::to_string(line_no) + " has " +
                    std::to_string(row.size()) + " cells, expected " +
                    std::to_string(n)));
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw InputError(parse_err(path, "no data rows"));

  if (out.is_samples) {
    out.samples.n = n;
    out.samples.count = rows;
    out.samples.data = std::move(values);
    return out;
  }
  if (rows != n)
    throw InputError(parse_err(path, "covariance must be square: got " +
                                         std::to_string(rows) + " rows for n=" +
                                         std::to_string(n)));
  try {
    out.covariance = SymmetricMatrix::from_dense(n, values, 1e-8);
  } catch (const InputError& e) {
    throw InputError(parse_err(path, e.what()));
  }
  return out;
}

void write_matrix_csv(const std::string& path, const SymmetricMatrix& m) {
  std::ofstream outf(path);
  if (!outf) throw InputError(parse_err(path, "cannot open for writing"));
  const int n = m.dim();
  outf << "# covariance n=" << n << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) outf << ",";
      outf << format_double(m(i, j));
    }
    outf << "\n";
  }
  if (!outf) throw InputError(parse_err(path, "write failed"));
}

void write_samples_csv(const std::string& path, const SampleSet& s) {
  std::ofstream outf(path);
  if (!outf) throw InputError(parse_err(path, "cannot open for writing"));
  outf << "# samples n=" << s.n << "\n";
  for (int k = 0; k < s.count; ++k) {
    for (int i = 0; i < s.n; ++i) {
      if (i) outf << ",";
      outf << format_double(s.at(k, i));
    }
    outf << "\n";
  }
  if (!outf) throw InputError(parse_err(path, "write failed"));
}

}  // namespace facmod
