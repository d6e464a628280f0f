// JSON serialization of coefficient sets:
// { "name": string, "arrangement": "t_first"|"v_first",
//   "t": [numbers], "v": [numbers], "e_vtv": number|null }

#pragma once

#include <optional>
#include <string>

#include "splitgen/split_coefficients.hpp"

namespace splitgen {

struct CoefficientDocument {
  SplitCoefficients coefficients;
  std::optional<double> e_vtv;
};

std::string to_json_string(const CoefficientDocument& doc);

/// Throws std::invalid_argument on malformed JSON or schema violations.
CoefficientDocument parse_coefficient_json(const std::string& text);

}  // namespace splitgen
