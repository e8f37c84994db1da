#include "labtom/thresholds.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "labtom/errors.hpp"

namespace labtom {

ThresholdTable ThresholdTable::defaults() {
  ThresholdTable t;
  t.theta_ = {0.75, 0.95, 0.70, 0.70, 0.40, 0.20, 0.20, 0.30, 0.80, 0.95};
  t.alpha_most_ = 1.5;
  return t;
}

ThresholdTable ThresholdTable::initial() {
  ThresholdTable t = defaults();
  t.set("uncertain", 0.50);
  t.set("likely", 0.60);
  return t;
}

std::size_t ThresholdTable::index_of(std::string_view name) {
  for (std::size_t i = 0; i < kCount; ++i)
    if (kNames[i] == name) return i;
  return kCount;
}

double ThresholdTable::get(std::string_view name) const {
  const std::size_t i = index_of(name);
  if (i == kCount) throw LoweringError("unknown threshold '" + std::string(name) + "'");
  return theta_[i];
}

void ThresholdTable::set(std::string_view name, double value) {
  const std::size_t i = index_of(name);
  if (i == kCount) throw LoweringError("unknown threshold '" + std::string(name) + "'");
  set_at(i, value);
}

void ThresholdTable::set_at(std::size_t i, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("threshold " + std::string(kNames.at(i)) + " outside [0, 1]");
  theta_.at(i) = value;
}

void ThresholdTable::set_alpha_most(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha_most must be positive");
  alpha_most_ = alpha;
}

ThresholdTable ThresholdTable::from_json(const std::string& text) {
  ThresholdTable t = defaults();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("threshold file: ") + e.what());
  }
  if (!j.is_object()) throw InputError("threshold file: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw InputError("threshold file: '" + key + "' is not a number");
    try {
      if (key == "alpha_most")
        t.set_alpha_most(value.get<double>());
      else if (index_of(key) == kCount)
        throw InputError("threshold file: unknown threshold '" + key + "'");
      else
        t.set(key, value.get<double>());
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("threshold file: ") + e.what());
    }
  }
  return t;
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open threshold file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string ThresholdTable::to_json() const {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < kCount; ++i) j[std::string(kNames[i])] = theta_[i];
  j["alpha_most"] = alpha_most_;
  return j.dump();
}

}  // namespace labtom
