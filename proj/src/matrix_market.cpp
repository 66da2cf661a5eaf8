#include "spectl/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace spectl {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_error(long line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

CMatrix read_matrix_market(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) parse_error(1, "empty file");
  ++line_no;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (lowercase(banner) != "%%matrixmarket") parse_error(line_no, "missing %%MatrixMarket banner");
  object = lowercase(object);
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix" || format != "coordinate") {
    parse_error(line_no, "only 'matrix coordinate' files are supported");
  }
  if (field == "pattern" || field == "integer") {
    throw Error(ErrorKind::UnsupportedField, "field '" + field + "' is not supported");
  }
  if (field != "real" && field != "complex") parse_error(line_no, "unknown field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric") {
    parse_error(line_no, "unsupported symmetry '" + symmetry + "'");
  }
  const bool is_complex = field == "complex";
  const bool symmetric = symmetry == "symmetric";

  long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries) || rows < 1 || cols < 1 || entries < 0) {
      parse_error(line_no, "bad size line");
    }
    break;
  }
  if (rows < 0) parse_error(line_no, "missing size line");
  if (symmetric && rows != cols) parse_error(line_no, "symmetric matrix must be square");

  CMatrix m = CMatrix::Zero(rows, cols);
  long seen = 0;
  while (seen < entries && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(entry >> i >> j >> re)) parse_error(line_no, "bad entry");
    if (is_complex && !(entry >> im)) parse_error(line_no, "complex entry needs two values");
    if (i < 1 || i > rows || j < 1 || j > cols) parse_error(line_no, "index out of range");
    const Complex v(re, im);
    m(i - 1, j - 1) += v;
    if (symmetric && i != j) m(j - 1, i - 1) += v;
    ++seen;
  }
  if (seen < entries) parse_error(line_no, "expected " + std::to_string(entries) + " entries");
  return m;
}

CMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(const CMatrix& m, std::ostream& out) {
  const bool real = is_real(m);
  long nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0, 0.0)) ++nnz;

  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (v == Complex(0.0, 0.0)) continue;
      out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(v.real());
      if (!real) out << ' ' << format_double(v.imag());
      out << '\n';
    }
  }
}

void save_matrix_market(const CMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  write_matrix_market(m, out);
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace spectl
