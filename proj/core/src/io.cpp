#include "photonstats/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "photonstats/errors.hpp"

namespace photonstats::io {

namespace {

using Json = nlohmann::json;

Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const Json& require(const Json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError(std::string(what) + ": missing field '" + key + "'");
  }
  return doc.at(key);
}

void check_header(const Json& doc, const char* format, int version, const char* what) {
  if (!doc.is_object()) throw ParseError(std::string(what) + ": top level must be an object");
  const Json& f = require(doc, "format", what);
  if (!f.is_string() || f.get<std::string>() != format) {
    throw ParseError(std::string(what) + ": format must be \"" + format + "\"");
  }
  const Json& v = require(doc, "version", what);
  if (!v.is_number_integer() || v.get<int>() != version) {
    throw ParseError(std::string(what) + ": unsupported version (expected " +
                     std::to_string(version) + ")");
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<long long>();
}

Complex complex_entry(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [re, im]");
  return {number(j[0], where), number(j[1], where)};
}

CVector complex_array(const Json& j, std::size_t expected, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of [re, im] pairs");
  if (j.size() != expected) {
    throw ParseError(where + ": expected " + std::to_string(expected) + " entries, got " +
                     std::to_string(j.size()));
  }
  CVector out(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    out(static_cast<Eigen::Index>(i)) = complex_entry(j[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const CMatrix& a) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back(complex_json(a(r, c)));
  }
  return out;
}

std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<int>(integer(j[i], where + "[" + std::to_string(i) + "]")));
  }
  return out;
}

}  // namespace

StateDocument parse_state(std::string_view text) {
  constexpr const char* what = "state file";
  const Json doc = parse_json(text, what);
  check_header(doc, "photonstats-state", kStateFormatVersion, what);
  const long long ell = integer(require(doc, "ell", what), "ell");
  if (ell < 1 || ell > 64) throw ParseError("state file: ell must lie in [1, 64]");

  StateDocument out;
  if (doc.contains("s_order")) {
    try {
      out.s_order = s_order_from_int(static_cast<int>(integer(doc.at("s_order"), "s_order")));
    } catch (const DomainError& e) {
      throw ParseError(std::string("state file: ") + e.what());
    }
  }
  const auto n = static_cast<std::size_t>(ell);
  const CVector n_flat = complex_array(require(doc, "n", what), n * n, "n");
  const CVector m_flat = complex_array(require(doc, "m", what), n * n, "m");
  CVector alpha = CVector::Zero(ell);
  if (doc.contains("alpha")) alpha = complex_array(doc.at("alpha"), n, "alpha");

  CMatrix n_mat(ell, ell);
  CMatrix m_mat(ell, ell);
  for (Eigen::Index r = 0; r < ell; ++r) {
    for (Eigen::Index c = 0; c < ell; ++c) {
      n_mat(r, c) = n_flat(r * ell + c);
      m_mat(r, c) = m_flat(r * ell + c);
    }
  }
  out.state = GaussianState::make(std::move(n_mat), std::move(m_mat), std::move(alpha));
  return out;
}

StateDocument read_state_file(const std::filesystem::path& path) {
  return parse_state(read_file(path));
}

std::string dump_state(const GaussianState& state, SOrder s_order) {
  Json doc;
  doc["format"] = "photonstats-state";
  doc["version"] = kStateFormatVersion;
  doc["ell"] = state.ell();
  doc["s_order"] = to_int(s_order);
  doc["n"] = matrix_json(state.n_mat());
  doc["m"] = matrix_json(state.m_mat());
  Json alpha = Json::array();
  for (Eigen::Index i = 0; i < state.alpha().size(); ++i) alpha.push_back(complex_json(state.alpha()(i)));
  doc["alpha"] = alpha;
  return doc.dump(2) + "\n";
}

ExperimentConfig parse_experiment(std::string_view text) {
  constexpr const char* what = "experiment config";
  const Json doc = parse_json(text, what);
  check_header(doc, "photonstats-experiment", kExperimentFormatVersion, what);

  ExperimentConfig out;
  McConfig& base = out.base;
  base.ell = static_cast<int>(integer(require(doc, "ell", what), "ell"));
  base.k_values = int_list(require(doc, "k_values", what), "k_values");
  base.orders = int_list(require(doc, "orders", what), "orders");
  base.trials = integer(require(doc, "trials", what), "trials");
  const Json& seed = require(doc, "seed", what);
  if (!seed.is_number_unsigned()) throw ParseError("seed: expected a non-negative integer");
  base.seed = seed.get<std::uint64_t>();
  if (doc.contains("mode_selection")) {
    const Json& rule = doc.at("mode_selection");
    if (!rule.is_string() || rule.get<std::string>() != "leading") {
      throw ParseError("mode_selection: only \"leading\" is supported");
    }
  }

  const Json& families = require(doc, "families", what);
  if (!families.is_array() || families.empty()) {
    throw ParseError("families: expected a non-empty array");
  }
  for (std::size_t i = 0; i < families.size(); ++i) {
    const std::string where = "families[" + std::to_string(i) + "]";
    const Json& f = families[i];
    const Json& kind = require(f, "kind", where.c_str());
    if (!kind.is_string()) throw ParseError(where + ".kind: expected a string");
    InputFamily family;
    try {
      family.kind = input_kind_from_string(kind.get<std::string>());
    } catch (const DomainError& e) {
      throw ParseError(where + ".kind: " + e.what());
    }
    family.nbar = number(require(f, "nbar", where.c_str()), where + ".nbar");
    if (f.contains("eta")) family.eta = number(f.at("eta"), where + ".eta");
    for (const auto& seen : out.families) {
      if (seen.label() == family.label()) {
        throw ParseError(where + ": duplicate family '" + family.label() +
                         "' (run different nbar values as separate configs)");
      }
    }
    out.families.push_back(family);
  }
  base.family = out.families.front();
  return out;
}

ExperimentConfig read_experiment_file(const std::filesystem::path& path) {
  return parse_experiment(read_file(path));
}

std::string canonical_experiment(const ExperimentConfig& config) {
  Json doc;
  doc["format"] = "photonstats-experiment";
  doc["version"] = kExperimentFormatVersion;
  doc["ell"] = config.base.ell;
  doc["k_values"] = config.base.k_values;
  doc["orders"] = config.base.orders;
  doc["trials"] = config.base.trials;
  doc["seed"] = config.base.seed;
  doc["mode_selection"] = "leading";
  Json families = Json::array();
  for (const auto& f : config.families) {
    families.push_back({{"kind", std::string(to_string(f.kind))}, {"nbar", f.nbar}, {"eta", f.eta}});
  }
  doc["families"] = families;
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  return doc.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("csv: no column '" + std::string(name) + "'");
}

namespace {

void append_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    append_field(out, row[i]);
  }
  out += '\n';
}

}  // namespace

std::string format_csv(const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw DomainError("csv: row width differs from header");
    append_row(out, row);
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      if (field_started && !field.empty()) throw ParseError("csv: stray quote inside field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw ParseError("csv: empty document");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ParseError("csv: row " + std::to_string(r) + " has " +
                       std::to_string(records[r].size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

}  // namespace photonstats::io
