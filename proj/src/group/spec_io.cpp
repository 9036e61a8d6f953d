#include "ccf/spec_io.hpp"

#include <string>

#include "ccf/calibrate.hpp"
#include "ccf/error.hpp"

namespace ccf::group {

namespace {

int positive_int(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw InputError(std::string("spec: \"") + key + "\" must be an integer");
  }
  const auto v = doc[key].get<long long>();
  if (v < 1 || v > 4096) throw InputError(std::string("spec: \"") + key + "\" out of range");
  return static_cast<int>(v);
}

GroupSpec fill_metric_constant(const GroupSpec& spec, const nlohmann::json& doc) {
  if (doc.contains("c")) {
    if (!doc["c"].is_number()) throw InputError("spec: \"c\" must be a number");
    return spec.with_metric_constant(doc["c"].get<double>());
  }
  return spec.with_metric_constant(
      calibrate_metric_constant(spec, kDefaultCalibrationSamples, kDefaultCalibrationRadius,
                                kDefaultCalibrationSeed)
          .c);
}

}  // namespace

GroupSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("spec: expected a JSON object");
  if (doc.contains("heisenberg")) {
    return fill_metric_constant(GroupSpec::heisenberg(positive_int(doc, "heisenberg"), 0.5), doc);
  }
  GroupSpec spec(positive_int(doc, "m1"), positive_int(doc, "m2"), 0.5);
  if (doc.contains("b")) {
    if (!doc["b"].is_array()) throw InputError("spec: \"b\" must be an array");
    for (const auto& entry : doc["b"]) {
      if (!entry.is_array() || entry.size() != 4 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer() || !entry[2].is_number_integer() ||
          !entry[3].is_number()) {
        throw InputError("spec: each \"b\" entry must be [j, l, i, value]");
      }
      const int j = entry[0].get<int>() - 1;
      const int l = entry[1].get<int>() - 1;
      const int i = entry[2].get<int>() - 1;
      spec.set_coefficient(j, l, i, entry[3].get<double>());
    }
  }
  return fill_metric_constant(spec, doc);
}

nlohmann::json spec_to_json(const GroupSpec& spec) {
  nlohmann::json b = nlohmann::json::array();
  for (int j = 0; j < spec.m2(); ++j) {
    for (int l = 0; l < spec.m1(); ++l) {
      for (int i = l + 1; i < spec.m1(); ++i) {
        const double v = spec.coefficient(j, l, i);
        if (v != 0.0) b.push_back({j + 1, l + 1, i + 1, v});
      }
    }
  }
  return {{"m1", spec.m1()}, {"m2", spec.m2()}, {"c", spec.c()}, {"b", b}};
}

}  // namespace ccf::group
