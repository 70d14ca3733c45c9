#include "capfield/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace capfield {

namespace {

const std::map<std::string, int>& schema_versions() {
  static const std::map<std::string, int> v = {
      {"profile", 1}, {"slicecheck", 1}, {"spectrum", 1}, {"nets-report", 1},
  };
  return v;
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

int dimension_field(const json& j, const char* what) {
  const int d = field<int>(j, "d", what);
  if (d < 1 || d > 7) throw FormatError(std::string(what) + ": d must lie in [1, 7]");
  return d;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json point_to_json(const SpherePoint& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.coords().size(); ++i) a.push_back(p[i]);
  return a;
}

SpherePoint point_from_json(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d + 1) {
    throw FormatError("point: expected " + std::to_string(d + 1) + " coordinates");
  }
  Eigen::VectorXd v(d + 1);
  for (int i = 0; i <= d; ++i) {
    if (!j[i].is_number()) throw FormatError("point: non-numeric coordinate");
    v[i] = j[i].get<double>();
  }
  try {
    return SpherePoint(v);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("point: ") + e.what());
  }
}

json nets_to_json(const NetFamily& family, const std::vector<NetReport>& reports) {
  json out;
  out["d"] = family.d;
  out["seed"] = family.seed;
  out["candidate_spacing_ratio"] = family.candidate_spacing_ratio;
  json nets = json::array();
  for (std::size_t k = 0; k < family.nets.size(); ++k) {
    const Net& net = family.nets[k];
    json jn;
    jn["d"] = net.d;
    jn["level"] = net.level;
    jn["seed"] = family.seed;
    json pts = json::array();
    for (std::size_t i = 0; i < net.size(); ++i) pts.push_back(point_to_json(net.point(i)));
    jn["points"] = std::move(pts);
    if (k < reports.size()) {
      jn["separation_check"] = {{"min_distance", reports[k].min_separation}, {"ok", reports[k].separation_ok}};
      jn["covering_gap"] = {{"gap", reports[k].covering_gap},
                            {"samples", reports[k].samples},
                            {"ok", reports[k].covering_ok}};
    }
    nets.push_back(std::move(jn));
  }
  out["nets"] = std::move(nets);
  return out;
}

NetFamily nets_from_json(const json& j) {
  NetFamily family;
  family.d = dimension_field(j, "nets");
  family.seed = field<std::uint64_t>(j, "seed", "nets");
  family.candidate_spacing_ratio = j.value("candidate_spacing_ratio", 0.0);
  const auto nets = field<json>(j, "nets", "nets");
  if (!nets.is_array() || nets.empty()) throw FormatError("nets: 'nets' must be a non-empty array");
  int expected = 1;
  for (const json& jn : nets) {
    Net net;
    net.d = dimension_field(jn, "net");
    net.level = field<int>(jn, "level", "net");
    if (net.d != family.d) throw FormatError("net level " + std::to_string(net.level) + ": dimension mismatch");
    if (net.level != expected) {
      throw FormatError("nets: expected level " + std::to_string(expected) + ", found " + std::to_string(net.level));
    }
    const auto pts = field<json>(jn, "points", "net");
    if (!pts.is_array() || pts.empty()) throw FormatError("net level " + std::to_string(net.level) + ": no points");
    net.points.resize(net.d + 1, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      try {
        net.points.col(static_cast<Eigen::Index>(i)) = point_from_json(pts[i], net.d).coords();
      } catch (const FormatError& e) {
        throw FormatError("net level " + std::to_string(net.level) + ", point " + std::to_string(i) + ": " + e.what());
      }
    }
    family.nets.push_back(std::move(net));
    ++expected;
  }
  return family;
}

json cap_function_to_json(const CapFunction& f) {
  json out;
  out["d"] = f.d;
  out["mode"] = f.mode == CapMode::Function ? "function" : "measure";
  out["truncation"] = f.truncation;
  json terms = json::array();
  for (const CapTerm& t : f.terms) {
    terms.push_back({{"center", point_to_json(t.cap.center)}, {"radius", t.cap.radius}, {"weight", t.weight}});
  }
  out["terms"] = std::move(terms);
  json atoms = json::array();
  for (const Atom& a : f.atoms) atoms.push_back({{"point", point_to_json(a.point)}, {"mass", a.mass}});
  out["atoms"] = std::move(atoms);
  return out;
}

CapFunction cap_function_from_json(const json& j) {
  const int d = dimension_field(j, "function");
  const auto mode = field<std::string>(j, "mode", "function");
  if (mode != "function" && mode != "measure") throw FormatError("function: mode must be 'function' or 'measure'");
  CapFunction f(d, mode == "function" ? CapMode::Function : CapMode::Measure);
  f.truncation = j.value("truncation", 0);
  for (const json& t : field<json>(j, "terms", "function")) {
    const double radius = field<double>(t, "radius", "term");
    if (!(radius > 0.0) || radius > 2.0) throw FormatError("term: radius must lie in (0, 2]");
    f.add(Cap(point_from_json(field<json>(t, "center", "term"), d), radius), field<double>(t, "weight", "term"));
  }
  if (j.contains("atoms") && !j.at("atoms").empty()) {
    if (f.mode != CapMode::Measure) throw FormatError("function: atoms require measure mode");
    for (const json& a : j.at("atoms")) {
      f.add_atom(point_from_json(field<json>(a, "point", "atom"), d), field<double>(a, "mass", "atom"));
    }
  }
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("function: ") + e.what());
  }
  return f;
}

json covering_to_json(const CoveringSequence& cov) {
  json out;
  out["d"] = cov.d;
  json levels = json::array();
  for (const auto& level : cov.coverings) {
    json caps = json::array();
    for (const Cap& c : level) caps.push_back({{"center", point_to_json(c.center)}, {"radius", c.radius}});
    levels.push_back(std::move(caps));
  }
  out["coverings"] = std::move(levels);
  if (!cov.omega.empty()) out["omega"] = cov.omega;
  return out;
}

CoveringSequence covering_from_json(const json& j) {
  CoveringSequence cov;
  cov.d = dimension_field(j, "covering");
  for (const json& level : field<json>(j, "coverings", "covering")) {
    std::vector<Cap> caps;
    for (const json& c : level) {
      const double radius = field<double>(c, "radius", "covering cap");
      if (!(radius > 0.0) || radius > 2.0) throw FormatError("covering cap: radius must lie in (0, 2]");
      caps.emplace_back(point_from_json(field<json>(c, "center", "covering cap"), cov.d), radius);
    }
    cov.coverings.push_back(std::move(caps));
  }
  if (j.contains("omega")) cov.omega = field<std::vector<double>>(j, "omega", "covering");
  return cov;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("CsvTable: row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw FormatError("csv " + schema + ": no column '" + name + "'");
}

int csv_schema_version(const std::string& schema) {
  auto it = schema_versions().find(schema);
  if (it == schema_versions().end()) throw FormatError("csv: unknown schema '" + schema + "'");
  return it->second;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  out << "# capfield-csv schema=" << table.schema << " version=" << table.version << " config=" << table.config
      << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: empty input");
  std::istringstream head(line);
  std::string tag, word;
  head >> tag >> word;
  if (tag != "#" || word != "capfield-csv") throw FormatError("csv: missing capfield-csv header");
  CsvTable t;
  bool have_version = false;
  while (head >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw FormatError("csv: malformed header entry '" + word + "'");
    const std::string key = word.substr(0, eq), value = word.substr(eq + 1);
    if (key == "schema") {
      t.schema = value;
    } else if (key == "version") {
      int v = 0;
      auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw FormatError("csv: malformed version '" + value + "'");
      }
      t.version = v;
      have_version = true;
    } else if (key == "config") {
      t.config = value;
    }
  }
  if (!have_version) throw FormatError("csv: header has no version");
  const int known = csv_schema_version(t.schema);
  if (t.version != known) {
    throw FormatError("csv " + t.schema + ": unsupported version " + std::to_string(t.version) + " (expected " +
                      std::to_string(known) + ")");
  }
  if (!std::getline(in, line)) throw FormatError("csv: missing column header");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line, ',');
    if (row.size() != t.columns.size()) throw FormatError("csv " + t.schema + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace capfield
