#pragma once

#include "eqrl/environment.hpp"

#include <optional>
#include <vector>

namespace eqrl {

// Row layout of one feature plane.
struct EncoderLayout {
  int T = 5;
  int S = 5;
  int n_symconst = 0;
  bool imag_row = false;
  int N = 1;
  long cap = 500;
  double scale = 100.0;

  static EncoderLayout from(const EnvConfig& cfg);

  // Rows: [+ * ^][( )][x][c...][constant][imaginary?][number rows].
  int row_op(char op) const { return op == '+' ? 0 : op == '*' ? 1 : 2; }
  int row_lparen() const { return 3; }
  int row_rparen() const { return 4; }
  int row_unknown() const { return 5; }
  int row_symconst(int k) const { return 6 + k; }
  int row_constant() const { return 6 + n_symconst; }
  int row_imag() const { return 7 + n_symconst; }
  int C() const { return 7 + n_symconst + (imag_row ? 1 : 0); }
  int rows() const { return C() + N; }
  int plane_size() const { return rows() * T; }
  int input_size() const { return (S + 2) * plane_size(); }
};

enum class EncodeStatus { Ok, Overflow, TooLong };

// Scaled real and imaginary parts, or nullopt on overflow.
std::optional<std::vector<double>> encode_number(const Number& a, const EncoderLayout& layout);

// Writes one plane (row-major, rows() x T) into out, which must be zeroed.
EncodeStatus encode_term(const Expr& e, const EncoderLayout& layout, double* out);
std::vector<double> encode_term(const Expr& e, const EncoderLayout& layout, EncodeStatus& status);

// Planes [stack 0..S-1, LHS, RHS]; nullopt if any term fails.
std::optional<std::vector<double>> encode_state(const EnvState& st, const EncoderLayout& layout);

}  // namespace eqrl
