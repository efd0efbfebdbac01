#pragma once

#include "eqrl/simplify.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace eqrl {

enum class Field { Z, Q, ZI, QI };
// Numeric: a0 + a1 x = a2 + a3 x. Symbolic: each a_i gains a b_i c term.
// Restricted: symbolic with a0=b0=a3=b3=0 or a1=b1=a2=b2=0.
// Shift: x + a = b.
enum class EqType { Numeric, Symbolic, Restricted, Shift };

Field parse_field(const std::string& s);
std::string field_name(Field f);
EqType parse_eq_type(const std::string& s);
std::string eq_type_name(EqType t);

struct SamplerConfig {
  Field field = Field::Z;
  EqType type = EqType::Numeric;
  double p0 = 0.5;
  long int_bound = 10;
  long p_bound = 50;
  long q_bound = 10;
};

Number sample_coefficient(const SamplerConfig& cfg, Rng& rng);
Equation sample_equation(const SamplerConfig& cfg, Rng& rng);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One "LHS = RHS" per line; blank lines and lines starting with '#' are skipped.
std::vector<Equation> load_dataset(const std::string& path);
std::vector<Equation> parse_dataset(const std::string& text);
void save_dataset(const std::vector<Equation>& eqs, const std::string& path, const std::string& comment = "");

}  // namespace eqrl
