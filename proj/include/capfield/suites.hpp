#ifndef CAPFIELD_SUITES_HPP
#define CAPFIELD_SUITES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capfield/net.hpp"

namespace capfield {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  nlohmann::json metrics = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  int jobs = 1;
  /// Nets to check instead of freshly built ones (the "nets" suite only).
  std::optional<NetFamily> nets;
};

/// Invariant suites run by `capfield verify`, in execution order:
/// sphere, nets, kernel, lemma41, lemma31, constructions, lemma53,
/// theorem42, dimension.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace capfield

#endif  // CAPFIELD_SUITES_HPP
