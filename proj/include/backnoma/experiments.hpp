#ifndef BACKNOMA_EXPERIMENTS_HPP_
#define BACKNOMA_EXPERIMENTS_HPP_

#include <cstdint>
#include <ctime>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "backnoma/analytic_ber.hpp"
#include "backnoma/errors.hpp"
#include "backnoma/simulator.hpp"

// Parameter sweeps over the cluster configuration: BER-vs-SNR curves,
// reflection-coefficient optimization, BER contours, fading-parameter sweeps
// and the NOMA-vs-TDMA comparison. Every table is a pure function of
// (spec, seed).

namespace backnoma {

enum class Engine { kAnalytic, kMonteCarlo, kBoth };

inline std::string engine_name(Engine e) {
  switch (e) {
    case Engine::kAnalytic: return "analytic";
    case Engine::kMonteCarlo: return "montecarlo";
    case Engine::kBoth: return "both";
  }
  return "?";
}

struct Axis {
  std::string name;  // snr_db | gamma1 | gamma2 | m1 | m2
  std::vector<double> values;
};

struct SweepSpec {
  ClusterConfig base;
  Axis axis1;
  std::optional<Axis> axis2;
  Engine engine = Engine::kBoth;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 42;
  std::string timestamp;  // empty: stamped at run time
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    os << std::setprecision(17);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }

  nlohmann::json to_json() const {
    return {{"columns", columns}, {"rows", rows}, {"metadata", metadata}};
  }
};

namespace detail {

inline void validate_axis(const Axis& a) {
  static const char* known[] = {"snr_db", "gamma1", "gamma2", "m1", "m2"};
  bool ok = false;
  for (const char* k : known) ok = ok || a.name == k;
  if (!ok) throw ValidationError("unknown sweep axis: " + a.name);
  if (a.values.empty())
    throw ValidationError("sweep axis " + a.name + " has no values");
  for (std::size_t i = 0; i + 1 < a.values.size(); ++i)
    if (!(a.values[i] < a.values[i + 1]))
      throw ValidationError("sweep axis " + a.name +
                            " must be strictly increasing");
  if (a.name == "gamma1" || a.name == "gamma2")
    for (double v : a.values)
      if (!(v > 0.0 && v <= 1.0))
        throw ValidationError("sweep axis " + a.name +
                              " values must lie in (0, 1]");
  if (a.name == "m1" || a.name == "m2")
    for (double v : a.values)
      if (!(v >= 0.5))
        throw ValidationError("sweep axis " + a.name + " values must be >= 0.5");
}

inline void apply_axis(ClusterConfig& c, const std::string& name, double v) {
  if (name == "snr_db") {
    c.bsn1.snr_db = v;
    c.bsn2.snr_db = v;
  } else if (name == "gamma1") {
    c.bsn1.reflection = v;
  } else if (name == "gamma2") {
    c.bsn2.reflection = v;
  } else if (name == "m1") {
    c.bsn1.fading.m = v;
  } else if (name == "m2") {
    c.bsn2.fading.m = v;
  }
}

inline std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// FNV-1a over a canonical rendering of the sweep, so a table records which
// spec produced it.
inline std::string spec_hash(const SweepSpec& s, const std::string& kind) {
  std::ostringstream os;
  os << std::setprecision(17) << kind << "|" << s.base.bsn1.reflection << ","
     << s.base.bsn1.snr_db << "," << s.base.bsn1.fading.m << ","
     << s.base.bsn1.fading.omega << "|" << s.base.bsn2.reflection << ","
     << s.base.bsn2.snr_db << "," << s.base.bsn2.fading.m << ","
     << s.base.bsn2.fading.omega << "|" << s.axis1.name;
  for (double v : s.axis1.values) os << "," << v;
  if (s.axis2) {
    os << "|" << s.axis2->name;
    for (double v : s.axis2->values) os << "," << v;
  }
  os << "|" << engine_name(s.engine) << "|" << s.trials << "|" << s.seed;
  const std::string text = os.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

inline std::map<std::string, std::string> make_metadata(
    const SweepSpec& s, const std::string& kind) {
  return {{"experiment", kind},
          {"spec_hash", spec_hash(s, kind)},
          {"seed", std::to_string(s.seed)},
          {"engine", engine_name(s.engine)},
          {"trials", std::to_string(s.trials)},
          {"timestamp", s.timestamp.empty() ? iso_utc_now() : s.timestamp}};
}

}  // namespace detail

/// BER vs transmit SNR for both users, analytic and/or Monte Carlo engines.
inline ResultTable run_ber_curve(const SweepSpec& spec) {
  detail::validate_axis(spec.axis1);
  if (spec.axis1.name != "snr_db")
    throw ValidationError("ber-curve sweeps snr_db, got " + spec.axis1.name);
  spec.base.validate();
  const bool analytic = spec.engine != Engine::kMonteCarlo;
  const bool mc = spec.engine != Engine::kAnalytic;
  ResultTable t;
  t.columns = {"snr_db"};
  if (analytic) {
    t.columns.push_back("ber1_analytic");
    t.columns.push_back("ber2_analytic");
  }
  if (mc) {
    t.columns.insert(t.columns.end(),
                     {"ber1_mc", "ber2_mc", "stderr1_mc", "stderr2_mc"});
  }
  for (double snr : spec.axis1.values) {
    ClusterConfig c = spec.base;
    detail::apply_axis(c, "snr_db", snr);
    std::vector<double> row{snr};
    if (analytic) {
      row.push_back(ber_u1_avg(c));
      row.push_back(ber_u2_avg(c));
    }
    if (mc) {
      const BerEstimate e = simulate_cluster(c, spec.trials, spec.seed);
      row.insert(row.end(), {e.ber1, e.ber2, e.stderr1, e.stderr2});
    }
    t.rows.push_back(std::move(row));
  }
  t.metadata = detail::make_metadata(spec, "ber-curve");
  return t;
}

/// Exhaustive grid search for the weak user's reflection coefficient that
/// maximizes normalized total effective bits (analytic engine). Ties break
/// to the lowest grid point.
inline std::pair<double, double> find_optimal_gamma2(
    const ClusterConfig& base, double gamma1, double snr_db,
    const std::vector<double>& grid) {
  if (grid.empty()) throw EmptyGrid("find_optimal_gamma2: empty grid");
  for (double g : grid)
    if (!(g > 0.0 && g < gamma1))
      throw ValidationError("gamma2 grid must lie in (0, gamma1)");
  double best_g = 0.0;
  double best_eb = -1.0;
  for (double g : grid) {
    ClusterConfig c = base;
    c.bsn1.reflection = gamma1;
    c.bsn2.reflection = g;
    c.bsn1.snr_db = snr_db;
    c.bsn2.snr_db = snr_db;
    const double eb = normalized_effective_bits(ber_u1_avg(c), ber_u2_avg(c));
    if (eb > best_eb) {
      best_eb = eb;
      best_g = g;
    }
  }
  return {best_g, best_eb};
}

/// Analytic BER over a (gamma1, gamma2) grid, restricted to gamma1 > gamma2.
inline ResultTable run_contour(const SweepSpec& spec) {
  detail::validate_axis(spec.axis1);
  if (!spec.axis2) throw ValidationError("contour needs a second axis");
  detail::validate_axis(*spec.axis2);
  if (spec.axis1.name != "gamma1" || spec.axis2->name != "gamma2")
    throw ValidationError("contour sweeps gamma1 x gamma2");
  spec.base.validate();
  ResultTable t;
  t.columns = {"gamma1", "gamma2", "ber1", "ber2"};
  for (double g1 : spec.axis1.values) {
    for (double g2 : spec.axis2->values) {
      if (!(g1 > g2)) continue;
      ClusterConfig c = spec.base;
      c.bsn1.reflection = g1;
      c.bsn2.reflection = g2;
      t.rows.push_back({g1, g2, ber_u1_avg(c), ber_u2_avg(c)});
    }
  }
  t.metadata = detail::make_metadata(spec, "contour");
  return t;
}

/// BER vs fading parameter of one user at fixed SNRs.
inline ResultTable run_m_sweep(const SweepSpec& spec) {
  detail::validate_axis(spec.axis1);
  if (spec.axis1.name != "m1" && spec.axis1.name != "m2")
    throw ValidationError("m-sweep sweeps m1 or m2, got " + spec.axis1.name);
  spec.base.validate();
  const bool analytic = spec.engine != Engine::kMonteCarlo;
  const bool mc = spec.engine != Engine::kAnalytic;
  ResultTable t;
  t.columns = {spec.axis1.name};
  if (analytic)
    t.columns.insert(t.columns.end(), {"ber1_analytic", "ber2_analytic"});
  if (mc)
    t.columns.insert(t.columns.end(),
                     {"ber1_mc", "ber2_mc", "stderr1_mc", "stderr2_mc"});
  for (double m : spec.axis1.values) {
    ClusterConfig c = spec.base;
    detail::apply_axis(c, spec.axis1.name, m);
    std::vector<double> row{m};
    if (analytic) {
      row.push_back(ber_u1_avg(c));
      row.push_back(ber_u2_avg(c));
    }
    if (mc) {
      const BerEstimate e = simulate_cluster(c, spec.trials, spec.seed);
      row.insert(row.end(), {e.ber1, e.ber2, e.stderr1, e.stderr2});
    }
    t.rows.push_back(std::move(row));
  }
  t.metadata = detail::make_metadata(spec, "m-sweep");
  return t;
}

/// Per-SNR comparison of NOMA against the TDMA baseline: per-slot effective
/// bits and per-user BER for both schemes.
inline ResultTable run_oma_comparison(const SweepSpec& spec) {
  detail::validate_axis(spec.axis1);
  if (spec.axis1.name != "snr_db")
    throw ValidationError("oma-compare sweeps snr_db, got " + spec.axis1.name);
  spec.base.validate();
  const bool mc = spec.engine == Engine::kMonteCarlo;
  ResultTable t;
  t.columns = {"snr_db",       "noma_per_slot", "tdma_per_slot",
               "noma_normalized", "tdma_normalized", "noma_ber1",
               "noma_ber2",    "tdma_ber1",     "tdma_ber2"};
  for (double snr : spec.axis1.values) {
    ClusterConfig c = spec.base;
    detail::apply_axis(c, "snr_db", snr);
    double nb1, nb2, tb1, tb2;
    if (mc) {
      const BerEstimate n = simulate_cluster(c, spec.trials, spec.seed);
      const BerEstimate o = simulate_tdma(c, spec.trials, spec.seed + 1);
      nb1 = n.ber1;
      nb2 = n.ber2;
      tb1 = o.ber1;
      tb2 = o.ber2;
    } else {
      nb1 = ber_u1_avg(c);
      nb2 = ber_u2_avg(c);
      const EffectiveOmegas eo = effective_omegas(c);
      tb1 = phi_closed(c.bsn1.fading.m, eo.omega1);
      tb2 = phi_closed(c.bsn2.fading.m, eo.omega2);
    }
    const double noma_slot = (1.0 - nb1) + (1.0 - nb2);
    const double tdma_slot = ((1.0 - tb1) + (1.0 - tb2)) / 2.0;
    t.rows.push_back({snr, noma_slot, tdma_slot, noma_slot / 2.0, tdma_slot,
                      nb1, nb2, tb1, tb2});
  }
  t.metadata = detail::make_metadata(spec, "oma-compare");
  return t;
}

}  // namespace backnoma

#endif  // BACKNOMA_EXPERIMENTS_HPP_
