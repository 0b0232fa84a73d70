#ifndef BACKNOMA_CONFIG_HPP_
#define BACKNOMA_CONFIG_HPP_

#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "backnoma/analytic_ber.hpp"
#include "backnoma/errors.hpp"
#include "backnoma/experiments.hpp"

// Flat INI-style run configuration with a strict schema: unknown sections or
// keys are rejected so a typo in a parameter study cannot pass silently.
//
//   [experiment]
//   kind = ber-curve        ; ber-curve gamma2-opt contour m-sweep
//                           ; oma-compare ks-validate xcheck
//   engine = both           ; analytic | montecarlo | both
//   trials = 1000000
//   seed = 42
//   output = results
//   format = both           ; csv | json | both
//   fading_free = false
//
//   [cluster]
//   gamma1 = 1.0
//   gamma2 = 0.3
//   snr1_db = 15
//   snr2_db = 15
//   m1 = 4
//   omega1 = 1
//   m2 = 1
//   omega2 = 0.5
//
//   [sweep]
//   snr_db = 0:25:5         ; inclusive range start:stop:step
//   gamma2 = 0.1 0.2 0.3    ; or an explicit list

namespace backnoma {

struct RunConfig {
  std::string kind = "ber-curve";
  ClusterConfig cluster{{1.0, 15.0, {4.0, 1.0}}, {0.3, 15.0, {1.0, 0.5}}};
  std::vector<Axis> sweep_axes;
  Engine engine = Engine::kBoth;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 42;
  bool seed_from_config = false;
  std::string output = "results";
  std::string format = "both";
  bool fading_free = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': not a number: '" + text + "'");
  }
  if (pos != text.size())
    throw ParseError("key '" + key + "': trailing junk in '" + text + "'");
  return v;
}

inline std::vector<double> parse_value_list(const std::string& key,
                                            const std::string& text) {
  // range form a:b:step
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    if (parts.size() != 3)
      throw ParseError("key '" + key + "': range must be start:stop:step");
    const double a = parse_number(key, parts[0]);
    const double b = parse_number(key, parts[1]);
    const double step = parse_number(key, parts[2]);
    if (!(step > 0.0) || b < a)
      throw ValidationError("key '" + key +
                            "': range needs stop >= start and step > 0");
    std::vector<double> out;
    for (int i = 0;; ++i) {
      const double v = a + i * step;
      if (v > b + step * 1e-9) break;
      out.push_back(v);
    }
    return out;
  }
  std::string normalized = text;
  for (char& ch : normalized)
    if (ch == ',') ch = ' ';
  std::vector<double> out;
  std::stringstream ss(normalized);
  std::string tok;
  while (ss >> tok) out.push_back(parse_number(key, tok));
  if (out.empty()) throw ParseError("key '" + key + "': empty value list");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError("key '" + key + "': expected a boolean, got '" + text +
                   "'");
}

inline Engine parse_engine(const std::string& text) {
  if (text == "analytic") return Engine::kAnalytic;
  if (text == "montecarlo") return Engine::kMonteCarlo;
  if (text == "both") return Engine::kBoth;
  throw ValidationError(
      "key 'engine': must be analytic, montecarlo or both, got '" + text +
      "'");
}

inline void check_kind(const std::string& kind) {
  static const char* known[] = {"ber-curve",  "gamma2-opt",  "contour",
                                "m-sweep",    "oma-compare", "ks-validate",
                                "xcheck"};
  for (const char* k : known)
    if (kind == k) return;
  throw ValidationError("key 'kind': unknown experiment '" + kind + "'");
}

}  // namespace detail

/// Post-parse range checks; also used to validate CLI-flag overrides.
inline void validate_run_config(const RunConfig& cfg) {
  detail::check_kind(cfg.kind);
  if (!(cfg.cluster.bsn1.reflection > 0.0 && cfg.cluster.bsn1.reflection <= 1.0))
    throw ValidationError("key 'gamma1': must lie in (0, 1]");
  if (!(cfg.cluster.bsn2.reflection > 0.0 && cfg.cluster.bsn2.reflection <= 1.0))
    throw ValidationError("key 'gamma2': must lie in (0, 1]");
  if (!(cfg.cluster.bsn1.fading.m >= 0.5))
    throw ValidationError("key 'm1': must be >= 0.5");
  if (!(cfg.cluster.bsn2.fading.m >= 0.5))
    throw ValidationError("key 'm2': must be >= 0.5");
  if (!(cfg.cluster.bsn1.fading.omega > 0.0))
    throw ValidationError("key 'omega1': must be > 0");
  if (!(cfg.cluster.bsn2.fading.omega > 0.0))
    throw ValidationError("key 'omega2': must be > 0");
  if (cfg.trials == 0) throw ValidationError("key 'trials': must be positive");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    throw ValidationError("key 'format': must be csv, json or both");
  for (const Axis& a : cfg.sweep_axes) detail::validate_axis(a);
}

/// Parse a configuration document. Unknown sections/keys raise
/// ValidationError naming the offender; malformed lines raise ParseError.
inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of(";#");
    if (comment != std::string::npos) line.erase(comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) +
                         ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "cluster" &&
          section != "sweep")
        throw ValidationError("unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty())
      throw ParseError("line " + std::to_string(lineno) +
                       ": key '" + key + "' outside any section");
    if (section == "experiment") {
      if (key == "kind") cfg.kind = value;
      else if (key == "engine") cfg.engine = detail::parse_engine(value);
      else if (key == "trials")
        cfg.trials = static_cast<std::uint64_t>(
            detail::parse_number(key, value));
      else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(
            detail::parse_number(key, value));
        cfg.seed_from_config = true;
      } else if (key == "output") cfg.output = value;
      else if (key == "format") cfg.format = value;
      else if (key == "fading_free")
        cfg.fading_free = detail::parse_bool(key, value);
      else
        throw ValidationError("unknown key '" + key +
                              "' in section [experiment]");
    } else if (section == "cluster") {
      const double v = detail::parse_number(key, value);
      if (key == "gamma1") cfg.cluster.bsn1.reflection = v;
      else if (key == "gamma2") cfg.cluster.bsn2.reflection = v;
      else if (key == "snr1_db") cfg.cluster.bsn1.snr_db = v;
      else if (key == "snr2_db") cfg.cluster.bsn2.snr_db = v;
      else if (key == "m1") cfg.cluster.bsn1.fading.m = v;
      else if (key == "m2") cfg.cluster.bsn2.fading.m = v;
      else if (key == "omega1") cfg.cluster.bsn1.fading.omega = v;
      else if (key == "omega2") cfg.cluster.bsn2.fading.omega = v;
      else
        throw ValidationError("unknown key '" + key +
                              "' in section [cluster]");
    } else {  // sweep
      if (key != "snr_db" && key != "gamma1" && key != "gamma2" &&
          key != "m1" && key != "m2")
        throw ValidationError("unknown key '" + key + "' in section [sweep]");
      cfg.sweep_axes.push_back({key, detail::parse_value_list(key, value)});
    }
  }
  validate_run_config(cfg);
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace backnoma

#endif  // BACKNOMA_CONFIG_HPP_
