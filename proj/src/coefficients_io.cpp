#include "splitgen/coefficients_io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace splitgen {

using nlohmann::json;

std::string to_json_string(const CoefficientDocument& doc) {
  json j;
  j["name"] = doc.coefficients.name;
  j["arrangement"] =
      doc.coefficients.arrangement == Arrangement::t_first ? "t_first" : "v_first";
  j["t"] = doc.coefficients.t;
  j["v"] = doc.coefficients.v;
  if (doc.e_vtv)
    j["e_vtv"] = *doc.e_vtv;
  else
    j["e_vtv"] = nullptr;
  return j.dump(2) + "\n";
}

CoefficientDocument parse_coefficient_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("coefficient JSON: ") + e.what());
  }
  for (const char* key : {"name", "arrangement", "t", "v", "e_vtv"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("coefficient JSON: missing key '") +
                                  key + "'");

  CoefficientDocument doc;
  doc.coefficients.name = j.at("name").get<std::string>();
  const std::string arr = j.at("arrangement").get<std::string>();
  if (arr == "t_first")
    doc.coefficients.arrangement = Arrangement::t_first;
  else if (arr == "v_first")
    doc.coefficients.arrangement = Arrangement::v_first;
  else
    throw std::invalid_argument("coefficient JSON: arrangement must be 't_first' or 'v_first'");
  doc.coefficients.t = j.at("t").get<std::vector<double>>();
  doc.coefficients.v = j.at("v").get<std::vector<double>>();
  if (!j.at("e_vtv").is_null()) doc.e_vtv = j.at("e_vtv").get<double>();
  validate_shape(doc.coefficients);
  return doc;
}

}  // namespace splitgen
