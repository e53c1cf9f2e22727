#include "facegeo/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace facegeo {

std::string ParseError::format(const std::string& what, int line, int column) {
  std::string msg = "line " + std::to_string(line);
  if (column > 0) msg += ", column " + std::to_string(column);
  msg += ": " + what;
  return msg;
}

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_shortest: to_chars failed");
  return std::string(buf, ptr);
}

std::string format_sig17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

namespace {

struct TokenReader {
  std::istream& in;
  int line_no = 0;
  std::string line;
  std::size_t pos = 0;

  // Advances to the next non-comment, non-blank token; returns false at EOF.
  bool next_token(std::string& tok, int& tok_line, int& tok_col) {
    for (;;) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size() || line[pos] == '#') {
        if (!std::getline(in, line)) return false;
        ++line_no;
        pos = 0;
        continue;
      }
      std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      tok = line.substr(start, pos - start);
      tok_line = line_no;
      tok_col = static_cast<int>(start) + 1;
      return true;
    }
  }
};

double parse_double_token(const std::string& tok, int line, int col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line, col);
  return v;
}

long parse_int_token(const std::string& tok, int line, int col) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line, col);
  return v;
}

// Reads one matrix block from the reader; returns false if the stream ends
// before a header token appears.
bool read_block(TokenReader& r, Matrix& out) {
  std::string tok;
  int tl = 0, tc = 0;
  if (!r.next_token(tok, tl, tc)) return false;
  long rows = parse_int_token(tok, tl, tc);
  if (!r.next_token(tok, tl, tc)) throw ParseError("missing column count in header", r.line_no);
  long cols = parse_int_token(tok, tl, tc);
  if (rows <= 0 || cols <= 0)
    throw ParseError("matrix dimensions must be positive, got " + std::to_string(rows) + " x " +
                         std::to_string(cols),
                     tl);
  out.resize(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!r.next_token(tok, tl, tc))
        throw ParseError("unexpected end of input: expected " + std::to_string(rows * cols) +
                             " entries, got " + std::to_string(i * cols + j),
                         r.line_no);
      out(i, j) = parse_double_token(tok, tl, tc);
    }
  }
  return true;
}

}  // namespace

Matrix read_matrix_text(std::istream& in) {
  TokenReader r{in};
  Matrix x;
  if (!read_block(r, x)) throw ParseError("empty input: expected a matrix header", 1);
  return x;
}

std::vector<Matrix> read_matrix_blocks(std::istream& in) {
  TokenReader r{in};
  std::vector<Matrix> blocks;
  Matrix x;
  while (read_block(r, x)) blocks.push_back(x);
  return blocks;
}

void write_matrix_text(std::ostream& out, const Matrix& x) {
  out << x.rows() << ' ' << x.cols() << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out << ' ';
      out << format_shortest(x(i, j));
    }
    out << '\n';
  }
}

Vector read_vector_text(std::istream& in) {
  TokenReader r{in};
  std::vector<double> vals;
  std::string tok;
  int tl = 0, tc = 0;
  while (r.next_token(tok, tl, tc)) vals.push_back(parse_double_token(tok, tl, tc));
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

void write_vector_text(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_shortest(v(i)) << '\n';
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

}  // namespace

Matrix load_matrix(const std::string& path) {
  auto in = open_or_throw(path);
  return read_matrix_text(in);
}

std::vector<Matrix> load_matrix_blocks(const std::string& path) {
  auto in = open_or_throw(path);
  return read_matrix_blocks(in);
}

Vector load_vector(const std::string& path) {
  auto in = open_or_throw(path);
  return read_vector_text(in);
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

void save_matrix(const std::string& path, const Matrix& x) {
  std::ostringstream oss;
  write_matrix_text(oss, x);
  atomic_write_file(path, oss.str());
}

}  // namespace facegeo
