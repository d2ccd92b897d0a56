#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bgf/bessel.hpp"
#include "bgf/error.hpp"

namespace bgf {

namespace {

Rat rat_from_json(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return Rat(mpz_class(std::to_string(v.get<long long>())));
  if (v.is_number()) return parse_rat(v.dump());
  throw Error(ErrorKind::invalid_argument, "measure: " + where + " must be a rational string or number");
}

}  // namespace

MeasureFile parse_measure_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, std::string("measure: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("N") || !doc.contains("atoms")) {
    throw Error(ErrorKind::invalid_argument, "measure: expected an object with \"N\" and \"atoms\"");
  }
  if (!doc["N"].is_number_integer()) throw Error(ErrorKind::invalid_argument, "measure: \"N\" must be an integer");
  MeasureFile out;
  out.measure.N = doc["N"].get<int>();
  if (doc.contains("theta")) out.theta = rat_from_json(doc["theta"], "\"theta\"");
  if (!doc["atoms"].is_array()) throw Error(ErrorKind::invalid_argument, "measure: \"atoms\" must be an array");
  for (const auto& atom : doc["atoms"]) {
    if (!atom.is_object() || !atom.contains("w") || !atom.contains("a") || !atom["a"].is_array()) {
      throw Error(ErrorKind::invalid_argument, "measure: each atom needs \"w\" and an array \"a\"");
    }
    Atom a;
    a.weight = rat_from_json(atom["w"], "\"w\"");
    for (const auto& x : atom["a"]) a.point.push_back(rat_from_json(x, "\"a\" entry"));
    out.measure.atoms.push_back(std::move(a));
  }
  out.measure.validate();
  return out;
}

MeasureFile load_measure_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open measure file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_measure_json(ss.str());
}

}  // namespace bgf
