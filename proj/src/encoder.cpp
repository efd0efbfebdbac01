#include "eqrl/encoder.hpp"

namespace eqrl {

EncoderLayout EncoderLayout::from(const EnvConfig& cfg) {
  EncoderLayout l;
  l.T = cfg.T;
  l.S = cfg.S;
  l.n_symconst = cfg.symbolic ? 1 : 0;
  l.imag_row = cfg.imag_row;
  l.N = cfg.complex ? 2 : 1;
  l.cap = cfg.cap;
  l.scale = cfg.scale;
  return l;
}

std::optional<std::vector<double>> encode_number(const Number& a, const EncoderLayout& layout) {
  if (!a.fits_within(layout.cap)) return std::nullopt;
  std::vector<double> v{a.re_double() / layout.scale};
  if (layout.N == 2) v.push_back(a.im_double() / layout.scale);
  return v;
}

EncodeStatus encode_term(const Expr& e, const EncoderLayout& layout, double* out) {
  auto units = enumerate_units(e);
  if (units.size() > static_cast<std::size_t>(layout.T)) return EncodeStatus::TooLong;
  const int T = layout.T;
  auto set = [&](int row, std::size_t col, double v) { out[row * T + static_cast<int>(col)] = v; };
  for (std::size_t j = 0; j < units.size(); ++j) {
    const Unit& u = units[j];
    switch (u.kind) {
      case UnitKind::Operator:
        set(layout.row_op(u.op), j, 1.0);
        break;
      case UnitKind::LParen:
        set(layout.row_lparen(), j, 1.0);
        break;
      case UnitKind::RParen:
        set(layout.row_rparen(), j, 1.0);
        break;
      case UnitKind::Unknown:
        set(layout.row_unknown(), j, 1.0);
        break;
      case UnitKind::SymConst:
        set(layout.row_symconst(0), j, 1.0);
        set(layout.row_constant(), j, 1.0);
        break;
      case UnitKind::Number: {
        auto v = encode_number(u.value, layout);
        if (!v) return EncodeStatus::Overflow;
        set(layout.row_constant(), j, 1.0);
        if (layout.imag_row && !u.value.is_real()) set(layout.row_imag(), j, 1.0);
        for (int k = 0; k < layout.N; ++k) set(layout.C() + k, j, (*v)[k]);
        break;
      }
    }
  }
  return EncodeStatus::Ok;
}

std::vector<double> encode_term(const Expr& e, const EncoderLayout& layout, EncodeStatus& status) {
  std::vector<double> plane(static_cast<std::size_t>(layout.plane_size()), 0.0);
  status = encode_term(e, layout, plane.data());
  return plane;
}

std::optional<std::vector<double>> encode_state(const EnvState& st, const EncoderLayout& layout) {
  std::vector<double> out(static_cast<std::size_t>(layout.input_size()), 0.0);
  const int P = layout.plane_size();
  for (std::size_t i = 0; i < st.stack.size() && i < static_cast<std::size_t>(layout.S); ++i) {
    if (encode_term(st.stack[i], layout, out.data() + i * P) != EncodeStatus::Ok) return std::nullopt;
  }
  if (encode_term(st.eq.lhs, layout, out.data() + layout.S * P) != EncodeStatus::Ok) return std::nullopt;
  if (encode_term(st.eq.rhs, layout, out.data() + (layout.S + 1) * P) != EncodeStatus::Ok) return std::nullopt;
  return out;
}

}  // namespace eqrl
