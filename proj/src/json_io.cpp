#include "dioph/json_io.hpp"

#include <stdexcept>

namespace dioph {

Integer integer_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    try {
      return Integer(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::invalid_argument("expected an integer, got " + v.dump());
}

nlohmann::json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
  return z.get_str();
}

IntPoly poly_from_json(const nlohmann::json& v) {
  if (!v.is_array()) throw std::invalid_argument("polynomial must be a JSON array of coefficients");
  std::vector<Integer> c;
  for (const auto& x : v) c.push_back(integer_from_json(x));
  return IntPoly(std::move(c));
}

IntPoly parse_poly(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw std::invalid_argument("malformed polynomial JSON: '" + text + "'");
  }
  return poly_from_json(j);
}

nlohmann::json poly_to_json(const IntPoly& P) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : P.coeffs()) out.push_back(integer_to_json(c));
  return out;
}

nlohmann::json interval_to_json(const Interval& I) { return {to_string(I.lo), to_string(I.hi)}; }

}  // namespace dioph
