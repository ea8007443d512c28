#pragma once

// Serialization: measures and sequences as JSON / JSONL, pair files as plain
// text, reports as CSV. All rationals travel as exact "p/q" strings; floating
// point numbers in inputs are rejected loudly rather than rounded. Writers
// emit no timestamps, so identical runs produce byte-identical artifacts.

#include "jnseq/corpus.hpp"
#include "jnseq/sequence.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace jnseq {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "jnseq/v1";

// ---------------------------------------------------------------- rationals

inline Json rational_to_json(const Rational& r) { return Json(to_string(r)); }

inline Rational rational_from_json(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer() && !j.is_number_float())
    return Rational(Int(j.get<long long>()));
  if (j.is_number_float())
    throw validation_error(what + ": floating point values are not accepted; use an exact "
                                  "rational string like \"1/3\"");
  throw validation_error(what + ": expected a rational string like \"1/3\"");
}

// ------------------------------------------------------------------- points

inline Json point_to_json(const Point& p) {
  if (p.space == SpaceKind::discrete_nat) return Json(p.nat_value());
  Json arr = Json::array();
  for (const auto& c : p.coords) arr.push_back(to_string(c));
  return arr;
}

inline Point point_from_json(SpaceKind space, const Json& j, const std::string& what) {
  if (space == SpaceKind::discrete_nat) {
    if (j.is_number_unsigned()) return Point::nat(j.get<std::uint64_t>());
    if (j.is_string()) {
      Rational r = parse_rational(j.get<std::string>());
      if (den(r) != 1 || r < 0) throw validation_error(what + ": discrete point must be a natural");
      return Point::nat(static_cast<std::uint64_t>(num(r)));
    }
    throw validation_error(what + ": discrete point must be a natural number");
  }
  if (!j.is_array() || j.size() != space_dim(space))
    throw validation_error(what + ": point must be an array of " +
                           std::to_string(space_dim(space)) + " rational string(s)");
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < j.size(); ++i)
    coords.push_back(rational_from_json(j[i], what + " coord " + std::to_string(i)));
  Point p{space, std::move(coords)};
  require_carrier(p);
  return p;
}

// ----------------------------------------------------------------- measures

inline Json atoms_to_json(const FinSuppMeasure& mu) {
  Json arr = Json::array();
  for (const auto& [pt, c] : mu.atoms()) {
    Json a = Json::object();
    a["point"] = point_to_json(pt);
    a["coeff"] = rational_to_json(c);
    arr.push_back(std::move(a));
  }
  return arr;
}

inline Json measure_to_json(const FinSuppMeasure& mu) {
  Json j = Json::object();
  j["space"] = space_name(mu.space());
  j["atoms"] = atoms_to_json(mu);
  return j;
}

inline FinSuppMeasure atoms_from_json(SpaceKind space, const Json& atoms,
                                      const std::string& what) {
  if (!atoms.is_array()) throw validation_error(what + ": \"atoms\" must be an array");
  std::vector<std::pair<Point, Rational>> entries;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Json& a = atoms[i];
    std::string ctx = what + " atom " + std::to_string(i);
    if (!a.is_object() || !a.contains("point") || !a.contains("coeff"))
      throw validation_error(ctx + ": expected {\"point\": ..., \"coeff\": \"p/q\"}");
    entries.emplace_back(point_from_json(space, a["point"], ctx),
                         rational_from_json(a["coeff"], ctx + " coeff"));
  }
  return FinSuppMeasure::make(space, std::move(entries));
}

inline FinSuppMeasure measure_from_json(const Json& j, const std::string& what = "measure") {
  if (!j.is_object()) throw validation_error(what + ": expected a JSON object");
  if (!j.contains("space")) throw validation_error(what + ": missing \"space\"");
  SpaceKind space = space_from_name(j.at("space").get<std::string>());
  return atoms_from_json(space, j.contains("atoms") ? j.at("atoms") : Json::array(), what);
}

// ------------------------------------------------------------------ regions

inline Json region_to_json(const Region& r) {
  Json j = Json::object();
  j["space"] = space_name(r.space);
  if (r.clopen) {
    j["clopen"] = r.clopen->str();
  } else {
    Json balls = Json::array();
    for (const auto& b : r.balls) {
      Json bj = Json::object();
      bj["center"] = point_to_json(b.center);
      bj["radius"] = rational_to_json(b.radius);
      balls.push_back(std::move(bj));
    }
    j["balls"] = std::move(balls);
  }
  return j;
}

// ---------------------------------------------------------------- functions

inline Json fn_node_to_json(const FnPtr& node) {
  Json j = Json::object();
  switch (node->kind) {
    case FnNode::Kind::constant:
      j["kind"] = "constant";
      j["value"] = rational_to_json(node->c);
      break;
    case FnNode::Kind::poly: {
      j["kind"] = "poly";
      Json terms = Json::array();
      for (const auto& t : node->terms) {
        Json tj = Json::object();
        tj["coef"] = rational_to_json(t.coef);
        tj["exps"] = t.exps;
        terms.push_back(std::move(tj));
      }
      j["terms"] = std::move(terms);
      break;
    }
    case FnNode::Kind::pwl: {
      j["kind"] = "pwl";
      j["axis"] = node->axis;
      Json xs = Json::array(), ys = Json::array();
      for (const auto& x : node->xs) xs.push_back(to_string(x));
      for (const auto& y : node->ys) ys.push_back(to_string(y));
      j["xs"] = std::move(xs);
      j["ys"] = std::move(ys);
      break;
    }
    case FnNode::Kind::indicator:
      j["kind"] = "indicator";
      j["set"] = node->set->str();
      break;
    case FnNode::Kind::urysohn: {
      j["kind"] = "urysohn";
      Json pts = Json::array();
      for (const auto& p : node->e_points) pts.push_back(point_to_json(p));
      j["zero_set"] = std::move(pts);
      j["region"] = region_to_json(node->u_region);
      j["margin"] = rational_to_json(node->delta);
      break;
    }
    case FnNode::Kind::min:
      j["kind"] = "min";
      j["f"] = fn_node_to_json(node->f);
      j["g"] = fn_node_to_json(node->g);
      break;
    case FnNode::Kind::reparam:
      j["kind"] = "reparam";
      j["a"] = rational_to_json(node->a);
      j["b"] = rational_to_json(node->b);
      j["inner"] = fn_node_to_json(node->f);
      break;
  }
  return j;
}

inline Json function_to_json(const TestFunction& f) {
  Json j = Json::object();
  j["space"] = space_name(f.space());
  j["label"] = f.label();
  j["lipschitz_bound"] = rational_to_json(f.lipschitz_bound());
  j["tree"] = fn_node_to_json(f.root());
  return j;
}

inline Json corpus_config_to_json(const CorpusConfig& cfg) {
  Json j = Json::object();
  j["lipschitz"] = rational_to_json(cfg.lipschitz);
  j["count"] = cfg.count;
  j["seed"] = cfg.seed;
  j["degree"] = cfg.degree;
  return j;
}

// -------------------------------------------------------------------- files

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open for reading: " + path);
  return in;
}

// Write-then-rename so partially written artifacts never land under the
// target name.
inline void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    auto out = open_out(tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

inline void write_measure(const std::string& path, const FinSuppMeasure& mu) {
  auto out = open_out(path);
  out << measure_to_json(mu).dump(2) << '\n';
}

inline FinSuppMeasure load_measure(const std::string& path) {
  auto in = open_in(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw validation_error(path + ": " + e.what());
  }
  return measure_from_json(j, path);
}

// ---------------------------------------------------------------- sequences
//
// JSONL layout: one header object (format/kind/meta/length), then one line
// {"n": k, "atoms": [...]} per measure. Headerless files where every line is
// a full measure object are accepted too.

inline Json sequence_header(const MeasureSequence& seq, std::size_t length) {
  const SequenceMeta& m = seq.meta();
  Json h = Json::object();
  h["format"] = kFormatVersion;
  h["kind"] = "sequence";
  h["name"] = m.name;
  h["space"] = space_name(seq.space());
  h["claimed_jn"] = m.claimed_jn;
  h["claimed_disjoint"] = m.claimed_disjoint;
  if (m.support_bound)
    h["support_bound"] = *m.support_bound;
  else
    h["support_bound"] = nullptr;
  if (m.alpha)
    h["alpha"] = rational_to_json(*m.alpha);
  else
    h["alpha"] = nullptr;
  h["enumeration"] = m.enumeration;
  h["provenance"] = m.provenance;
  h["length"] = length;
  return h;
}

inline void write_sequence(std::ostream& out, const MeasureSequence& seq, std::size_t length) {
  out << sequence_header(seq, length).dump() << '\n';
  for (std::size_t n = 0; n < length; ++n) {
    Json line = Json::object();
    line["n"] = n;
    line["atoms"] = atoms_to_json(seq.at(n));
    out << line.dump() << '\n';
  }
}

inline void write_sequence(const std::string& path, const MeasureSequence& seq,
                           std::size_t length) {
  auto out = open_out(path);
  write_sequence(out, seq, length);
}

inline MeasureSequence load_sequence(std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<SequenceMeta> meta;
  std::optional<SpaceKind> space;
  std::optional<std::size_t> declared_length;
  std::vector<FinSuppMeasure> measures;

  auto context = [&]() { return origin + ":" + std::to_string(lineno); };
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed.empty()) continue;
    Json j;
    try {
      j = Json::parse(trimmed);
    } catch (const Json::exception& e) {
      throw validation_error(context() + ": " + e.what());
    }
    if (!j.is_object()) throw validation_error(context() + ": expected a JSON object");
    if (j.contains("format")) {
      if (meta || !measures.empty())
        throw validation_error(context() + ": header must be the first line");
      if (j.at("format").get<std::string>() != kFormatVersion)
        throw validation_error(context() + ": unknown format \"" +
                               j.at("format").get<std::string>() + "\"");
      SequenceMeta m;
      m.name = j.value("name", std::string("loaded"));
      space = space_from_name(j.at("space").get<std::string>());
      m.claimed_jn = j.value("claimed_jn", false);
      m.claimed_disjoint = j.value("claimed_disjoint", false);
      if (j.contains("support_bound") && !j.at("support_bound").is_null())
        m.support_bound = j.at("support_bound").get<std::size_t>();
      if (j.contains("alpha") && !j.at("alpha").is_null())
        m.alpha = rational_from_json(j.at("alpha"), context() + " alpha");
      m.enumeration = j.value("enumeration", std::string());
      if (j.contains("provenance"))
        m.provenance = j.at("provenance").get<std::vector<std::string>>();
      if (j.contains("length") && !j.at("length").is_null())
        declared_length = j.at("length").get<std::size_t>();
      meta = std::move(m);
      continue;
    }
    if (j.contains("space")) {
      SpaceKind k = space_from_name(j.at("space").get<std::string>());
      if (space && *space != k)
        throw validation_error(context() + ": space changed mid-file");
      space = k;
    }
    if (!space)
      throw validation_error(context() +
                             ": no header and no \"space\" field to infer the space from");
    if (j.contains("n")) {
      std::size_t n = j.at("n").get<std::size_t>();
      if (n != measures.size())
        throw validation_error(context() + ": measure index " + std::to_string(n) +
                               " out of order (expected " + std::to_string(measures.size()) +
                               ")");
    }
    measures.push_back(
        atoms_from_json(*space, j.contains("atoms") ? j.at("atoms") : Json::array(), context()));
  }
  if (measures.empty()) throw validation_error(origin + ": no measures in file");
  if (declared_length && *declared_length != measures.size())
    throw validation_error(origin + ": header declares length " +
                           std::to_string(*declared_length) + " but file holds " +
                           std::to_string(measures.size()));
  SequenceMeta m = meta.value_or(SequenceMeta{"loaded", false, false, {}, {}, "", {}});
  if (!meta) m.provenance.push_back("loaded headerless from " + origin);
  return from_measures(*space, std::move(measures), std::move(m));
}

inline MeasureSequence load_sequence(const std::string& path) {
  auto in = open_in(path);
  return load_sequence(in, path);
}

// -------------------------------------------------------------- pairs files
//
// Plain text: one "x y" pair of naturals per line; '#' starts a comment.

inline std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> parse_pairs(
    std::istream& in, const std::string& origin) {
  std::vector<std::uint64_t> xs, ys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find('-') != std::string::npos)
      throw validation_error(origin + ":" + std::to_string(lineno) +
                             ": pair anchors must be naturals (no negatives)");
    std::istringstream row(line);
    std::uint64_t x, y;
    if (!(row >> x)) {
      std::string leftover;
      if (row.clear(), row >> leftover)
        throw validation_error(origin + ":" + std::to_string(lineno) +
                               ": expected two naturals, got \"" + line + "\"");
      continue;  // blank or comment-only line
    }
    std::string extra;
    if (!(row >> y) || (row >> extra))
      throw validation_error(origin + ":" + std::to_string(lineno) +
                             ": expected exactly two naturals per line");
    if (x == y)
      throw validation_error(origin + ":" + std::to_string(lineno) + ": pair has equal anchors");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.empty()) throw validation_error(origin + ": no pairs in file");
  return {std::move(xs), std::move(ys)};
}

inline std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> load_pairs(
    const std::string& path) {
  auto in = open_in(path);
  return parse_pairs(in, path);
}

inline void write_pairs(const std::string& path, const std::vector<std::uint64_t>& xs,
                        const std::vector<std::uint64_t>& ys, const std::string& comment = "") {
  if (xs.size() != ys.size()) throw validation_error("pair lists differ in length");
  auto out = open_out(path);
  if (!comment.empty()) out << "# " << comment << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) out << xs[i] << ' ' << ys[i] << '\n';
}

// ---------------------------------------------------------------------- CSV

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& config_lines,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<std::string>>& rows) {
  for (const auto& line : config_lines) out << "# " << line << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << csv_quote(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw validation_error("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_quote(row[i]);
    out << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<std::string>& config_lines,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  write_csv(out, config_lines, columns, rows);
}

}  // namespace jnseq
