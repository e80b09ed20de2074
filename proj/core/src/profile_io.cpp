#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coboson/profile.hpp"

namespace coboson {

namespace {

struct RawProfile {
  std::string label;
  bool normalize = false;
  std::vector<nlohmann::json> weights;
};

RawProfile parse_common(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ProfileError(std::string("profile file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileError("profile file must be a JSON object");
  RawProfile raw;
  if (!doc.contains("weights") || !doc["weights"].is_array() ||
      doc["weights"].empty())
    throw ProfileError("profile file needs a non-empty \"weights\" array");
  raw.weights = doc["weights"].get<std::vector<nlohmann::json>>();
  if (doc.contains("label")) {
    if (!doc["label"].is_string())
      throw ProfileError("profile \"label\" must be a string");
    raw.label = doc["label"].get<std::string>();
  }
  if (doc.contains("normalize")) {
    if (!doc["normalize"].is_boolean())
      throw ProfileError("profile \"normalize\" must be a boolean");
    raw.normalize = doc["normalize"].get<bool>();
  }
  return raw;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open profile file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ModeProfile<Rational> parse_profile_rational(const std::string& json_text) {
  const RawProfile raw = parse_common(json_text);
  std::vector<Rational> weights;
  weights.reserve(raw.weights.size());
  for (const auto& w : raw.weights) {
    if (w.is_string()) {
      weights.push_back(parse_rational(w.get<std::string>()));
    } else if (w.is_number_integer()) {
      weights.emplace_back(w.get<long long>());
    } else if (w.is_number()) {
      throw ProfileError(
          "rational mode needs integer or \"p/q\" weights; got " + w.dump());
    } else {
      throw ProfileError("profile weight must be a number or \"p/q\" string");
    }
  }
  return ModeProfile<Rational>::from_weights(std::move(weights), raw.label,
                                             raw.normalize);
}

ModeProfile<double> parse_profile_float(const std::string& json_text) {
  const RawProfile raw = parse_common(json_text);
  std::vector<double> weights;
  weights.reserve(raw.weights.size());
  for (const auto& w : raw.weights) {
    if (w.is_string()) {
      weights.push_back(to_double(parse_rational(w.get<std::string>())));
    } else if (w.is_number()) {
      weights.push_back(w.get<double>());
    } else {
      throw ProfileError("profile weight must be a number or \"p/q\" string");
    }
  }
  return ModeProfile<double>::from_weights(std::move(weights), raw.label,
                                           raw.normalize);
}

ModeProfile<Rational> load_profile_rational(const std::filesystem::path& path) {
  return parse_profile_rational(read_file(path));
}

ModeProfile<double> load_profile_float(const std::filesystem::path& path) {
  return parse_profile_float(read_file(path));
}

}  // namespace coboson
