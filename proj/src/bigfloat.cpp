#include "reflbound/bigfloat.hpp"

#include <vector>

namespace reflbound {

std::string BigFloat::str(int digits) const {
  if (!is_finite()) return mpfr_nan_p(value_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  int n = mpfr_snprintf(nullptr, 0, "%.*Rg", digits, value_);
  std::vector<char> buf(static_cast<std::size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

}  // namespace reflbound
