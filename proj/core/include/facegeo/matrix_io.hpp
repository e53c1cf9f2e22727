#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace facegeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raised on malformed text inputs; carries a 1-based line (and column when
// known) so CLI diagnostics can point at the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column);
  int line_;
  int column_;
};

// Shortest decimal representation that round-trips to the same double.
std::string format_shortest(double value);

// Fixed 17-significant-digit form used in CSV records.
std::string format_sig17(double value);

// Matrix text format: a header line "n m", then n rows of m whitespace
// separated floats. Lines starting with '#' are comments and may appear
// anywhere. Values are printed with format_shortest, so save/load round-trips
// are bit exact.
Matrix read_matrix_text(std::istream& in);
void write_matrix_text(std::ostream& out, const Matrix& x);

// Reads concatenated matrix blocks until end of stream (the .ops layout of
// stacked measurement matrices).
std::vector<Matrix> read_matrix_blocks(std::istream& in);

// One float per line; '#' comments allowed.
Vector read_vector_text(std::istream& in);
void write_vector_text(std::ostream& out, const Vector& v);

Matrix load_matrix(const std::string& path);
std::vector<Matrix> load_matrix_blocks(const std::string& path);
Vector load_vector(const std::string& path);

// All file outputs go through a temp-file + rename so failures never leave a
// partial file behind.
void atomic_write_file(const std::string& path, const std::string& contents);
void save_matrix(const std::string& path, const Matrix& x);

}  // namespace facegeo
