#ifndef CAPFIELD_IO_HPP
#define CAPFIELD_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "capfield/constructions.hpp"
#include "capfield/net.hpp"
#include "capfield/poisson.hpp"

namespace capfield {

using json = nlohmann::json;

/// Malformed or inconsistent artifact.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a (64 bit) of the compact dump of `config`, as 16 hex digits. Object
/// keys are sorted by nlohmann::json, so the dump is canonical.
std::string config_hash(const json& config);

json point_to_json(const SpherePoint& p);
SpherePoint point_from_json(const json& j, int d);

/// {d, seed, candidate_spacing_ratio, nets: [{d, level, points, separation_check,
/// covering_gap, seed}]}. `reports` may be empty or hold one report per level.
json nets_to_json(const NetFamily& family, const std::vector<NetReport>& reports);
/// Structural checks only (shapes, dims, unit norms); separation, covering
/// and nesting are left to verify_net / verify_nesting.
NetFamily nets_from_json(const json& j);

json cap_function_to_json(const CapFunction& f);
CapFunction cap_function_from_json(const json& j);

/// {d, coverings: [[{center, radius}, ...], ...], omega: [...]} (omega optional).
json covering_to_json(const CoveringSequence& cov);
CoveringSequence covering_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Writes j.dump(1) plus a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);

/// Tabular results. On disk:
///   # capfield-csv schema=<name> version=<v> config=<hash>
///   col1,col2,...
///   rows...
struct CsvTable {
  std::string schema;
  int version = 1;
  std::string config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::size_t column(const std::string& name) const;
};

/// Known schema versions; read_csv rejects anything else.
int csv_schema_version(const std::string& schema);

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace capfield

#endif  // CAPFIELD_IO_HPP
