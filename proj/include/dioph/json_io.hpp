#pragma once

#include <json.hpp>

#include <string>

#include "dioph/intpoly.hpp"
#include "dioph/interval.hpp"

namespace dioph {

// Integers travel as JSON numbers when they fit in 64 bits, else as decimal strings.
Integer integer_from_json(const nlohmann::json& v);
nlohmann::json integer_to_json(const Integer& z);

// [-1,1,2] <-> 2T^2+T-1; throws std::invalid_argument on malformed input
IntPoly poly_from_json(const nlohmann::json& v);
IntPoly parse_poly(const std::string& text);
nlohmann::json poly_to_json(const IntPoly& P);

nlohmann::json interval_to_json(const Interval& I);

}  // namespace dioph
