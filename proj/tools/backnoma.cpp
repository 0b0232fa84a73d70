// Command line front end: runs the analytic / Monte Carlo experiments and
// writes result tables as CSV and/or JSON.
//
// Exit codes: 0 success, 2 command-line usage error, 3 config parse error,
// 4 validation error, 5 numeric failure, 1 anything else.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "backnoma/config.hpp"
#include "backnoma/distributions.hpp"
#include "backnoma/experiments.hpp"
#include "backnoma/simulator.hpp"

using namespace backnoma;

namespace {

struct CliState {
  RunConfig cfg;
  std::string config_path;
  std::string timestamp;  // pin the metadata timestamp, e.g. for diffing runs
  // raw override strings; empty means "not given"
  std::string values;       // generic sweep values for the chosen axis
  std::string axis = "m1";  // m-sweep axis selector
  double grid_step = 0.01;  // gamma2-opt search resolution
};

std::vector<double> parse_list_flag(const std::string& key,
                                    const std::string& text) {
  return backnoma::detail::parse_value_list(key, text);
}

void add_common_flags(CLI::App* sub, CliState& st) {
  sub->add_option("--config", st.config_path,
                  "configuration file (strict INI schema)")
      ->check(CLI::ExistingFile);
  sub->add_option("--gamma1", st.cfg.cluster.bsn1.reflection,
                  "strong-node reflection coefficient");
  sub->add_option("--gamma2", st.cfg.cluster.bsn2.reflection,
                  "weak-node reflection coefficient");
  sub->add_option("--snr1-db", st.cfg.cluster.bsn1.snr_db,
                  "carrier SNR toward node 1 [dB]");
  sub->add_option("--snr2-db", st.cfg.cluster.bsn2.snr_db,
                  "carrier SNR toward node 2 [dB]");
  sub->add_option("--m1", st.cfg.cluster.bsn1.fading.m,
                  "Nakagami shape, link 1");
  sub->add_option("--m2", st.cfg.cluster.bsn2.fading.m,
                  "Nakagami shape, link 2");
  sub->add_option("--omega1", st.cfg.cluster.bsn1.fading.omega,
                  "Nakagami spread, link 1");
  sub->add_option("--omega2", st.cfg.cluster.bsn2.fading.omega,
                  "Nakagami spread, link 2");
  sub->add_option_function<std::string>(
         "--engine",
         [&st](const std::string& v) {
           st.cfg.engine = backnoma::detail::parse_engine(v);
         },
         "analytic | montecarlo | both");
  sub->add_option("--trials", st.cfg.trials, "Monte Carlo trials per point");
  sub->add_option("--seed", st.cfg.seed,
                  "RNG seed (flag beats config file, default 42)");
  sub->add_option("--output", st.cfg.output,
                  "output path stem (writes <stem>.csv / <stem>.json)");
  sub->add_option("--format", st.cfg.format, "csv | json | both");
  sub->add_flag("--fading-free", st.cfg.fading_free,
                "replace both fading shapes with m = 50 (near-AWGN)");
  sub->add_option("--timestamp", st.timestamp,
                  "pin the metadata timestamp instead of the current time");
}

// Merge precedence: defaults < config file < explicit flags. CLI11 already
// wrote flag values into st.cfg, so re-parse the file into a fresh config and
// copy over only the fields whose flags were not given.
void merge_config_file(const CLI::App* sub, CliState& st) {
  if (st.config_path.empty()) return;
  std::ifstream in(st.config_path);
  if (!in) throw ParseError("cannot open config file: " + st.config_path);
  const RunConfig file_cfg = parse_config(in);
  const auto given = [sub](const std::string& flag) {
    return sub->count(flag) > 0;
  };
  RunConfig merged = file_cfg;
  if (given("--gamma1")) merged.cluster.bsn1.reflection = st.cfg.cluster.bsn1.reflection;
  if (given("--gamma2")) merged.cluster.bsn2.reflection = st.cfg.cluster.bsn2.reflection;
  if (given("--snr1-db")) merged.cluster.bsn1.snr_db = st.cfg.cluster.bsn1.snr_db;
  if (given("--snr2-db")) merged.cluster.bsn2.snr_db = st.cfg.cluster.bsn2.snr_db;
  if (given("--m1")) merged.cluster.bsn1.fading.m = st.cfg.cluster.bsn1.fading.m;
  if (given("--m2")) merged.cluster.bsn2.fading.m = st.cfg.cluster.bsn2.fading.m;
  if (given("--omega1")) merged.cluster.bsn1.fading.omega = st.cfg.cluster.bsn1.fading.omega;
  if (given("--omega2")) merged.cluster.bsn2.fading.omega = st.cfg.cluster.bsn2.fading.omega;
  if (given("--engine")) merged.engine = st.cfg.engine;
  if (given("--trials")) merged.trials = st.cfg.trials;
  if (given("--seed")) merged.seed = st.cfg.seed;
  if (given("--output")) merged.output = st.cfg.output;
  if (given("--format")) merged.format = st.cfg.format;
  if (given("--fading-free")) merged.fading_free = st.cfg.fading_free;
  st.cfg = merged;
}

void finalize(CliState& st, const std::string& kind) {
  st.cfg.kind = kind;
  if (st.cfg.fading_free) {
    st.cfg.cluster.bsn1.fading.m = 50.0;
    st.cfg.cluster.bsn2.fading.m = 50.0;
  }
  validate_run_config(st.cfg);
}

std::vector<double> axis_values(const CliState& st, const std::string& name,
                                const std::string& fallback) {
  if (!st.values.empty()) return parse_list_flag(name, st.values);
  for (const Axis& a : st.cfg.sweep_axes)
    if (a.name == name) return a.values;
  return parse_list_flag(name, fallback);
}

SweepSpec make_spec(const CliState& st, Axis axis1,
                    std::optional<Axis> axis2 = std::nullopt) {
  SweepSpec s;
  s.base = st.cfg.cluster;
  s.axis1 = std::move(axis1);
  s.axis2 = std::move(axis2);
  s.engine = st.cfg.engine;
  s.trials = st.cfg.trials;
  s.seed = st.cfg.seed;
  s.timestamp = st.timestamp;
  return s;
}

void emit(const CliState& st, const ResultTable& t) {
  const std::filesystem::path stem(st.cfg.output);
  if (stem.has_parent_path())
    std::filesystem::create_directories(stem.parent_path());
  if (st.cfg.format == "csv" || st.cfg.format == "both") {
    std::ofstream os(st.cfg.output + ".csv");
    t.write_csv(os);
    std::cout << "wrote " << st.cfg.output << ".csv\n";
  }
  if (st.cfg.format == "json" || st.cfg.format == "both") {
    std::ofstream os(st.cfg.output + ".json");
    os << t.to_json().dump(2) << "\n";
    std::cout << "wrote " << st.cfg.output << ".json\n";
  }
  std::cout << t.rows.size() << " rows, spec " << t.metadata.at("spec_hash")
            << "\n";
}

void run_gamma2_opt(const CliState& st) {
  const std::vector<double> snrs = axis_values(st, "snr_db", "0:20:10");
  std::vector<double> grid;
  const double g1 = st.cfg.cluster.bsn1.reflection;
  for (double g = st.grid_step; g < g1 - 1e-12; g += st.grid_step)
    grid.push_back(g);
  ResultTable t;
  t.columns = {"snr_db", "gamma2_star", "max_normalized_effective_bits"};
  for (double snr : snrs) {
    const auto [star, best] =
        find_optimal_gamma2(st.cfg.cluster, g1, snr, grid);
    t.rows.push_back({snr, star, best});
  }
  t.metadata = backnoma::detail::make_metadata(
      make_spec(st, {"snr_db", snrs}), "gamma2-opt");
  emit(st, t);
}

void run_ks_validate(const CliState& st) {
  const std::vector<std::pair<NakagamiParams, NakagamiParams>> sets = {
      {{1.0, 1.0}, {1.0, 1.0}},
      {{2.0, 1.0}, {1.0, 1.0}},
      {{3.0, 1.0}, {3.0, 0.5}},
      {st.cfg.cluster.bsn1.fading, st.cfg.cluster.bsn2.fading}};
  ResultTable t;
  t.columns = {"m1",        "omega1",   "m2",     "omega2", "is_difference",
               "statistic", "critical", "reject"};
  for (int kind = 0; kind < 2; ++kind) {
    for (const auto& [p1, p2] : sets) {
      std::vector<double> samples(5000);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        TrialRng rng(st.cfg.seed, i);
        const double a = sample_nakagami(p1, rng);
        const double b = sample_nakagami(p2, rng);
        samples[i] = kind == 0 ? a + b : a - b;
      }
      std::sort(samples.begin(), samples.end());
      std::function<double(double)> cdf;
      if (kind == 0) {
        const auto fit = approx_sum(p1, p2);
        cdf = [fit](double x) { return nakagami_cdf(fit, x); };
      } else {
        const auto fit = approx_diff(p1, p2);
        cdf = [fit](double x) { return normal_cdf(fit, x); };
      }
      const auto rep = ks_test(samples, cdf, 0.05);
      t.rows.push_back({p1.m, p1.omega, p2.m, p2.omega,
                        static_cast<double>(kind), rep.statistic, rep.critical,
                        rep.reject ? 1.0 : 0.0});
    }
  }
  t.metadata = backnoma::detail::make_metadata(
      make_spec(st, {"m1", {st.cfg.cluster.bsn1.fading.m}}), "ks-validate");
  emit(st, t);
}

void run_xcheck(CliState st) {
  st.cfg.engine = Engine::kBoth;  // the whole point is comparing both engines
  const auto snrs = axis_values(st, "snr_db", "0:25:5");
  auto t = run_ber_curve(make_spec(st, {"snr_db", snrs}));
  t.columns.insert(t.columns.end(), {"rel_dev1", "rel_dev2"});
  for (auto& row : t.rows) {
    const double a1 = row[1], a2 = row[2], m1 = row[3], m2 = row[4];
    row.push_back(a1 > 0 ? std::abs(m1 - a1) / a1 : 0.0);
    row.push_back(a2 > 0 ? std::abs(m2 - a2) / a2 : 0.0);
  }
  t.metadata["experiment"] = "xcheck";
  emit(st, t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level BER toolkit for a two-node backscatter NOMA cluster"};
  app.require_subcommand(1);
  CliState st;

  struct Cmd {
    const char* name;
    const char* help;
    std::function<void(CliState&)> run;
  };
  std::vector<Cmd> cmds = {
      {"ber-curve", "BER vs SNR for both users",
       [](CliState& s) {
         emit(s, run_ber_curve(make_spec(
                     s, {"snr_db", axis_values(s, "snr_db", "0:25:5")})));
       }},
      {"gamma2-opt",
       "grid-search the weak node's reflection coefficient for maximum "
       "effective bits",
       [](CliState& s) { run_gamma2_opt(s); }},
      {"contour", "analytic BER over a gamma1 x gamma2 grid",
       [](CliState& s) {
         std::vector<double> g1v, g2v;
         for (const Axis& a : s.cfg.sweep_axes) {
           if (a.name == "gamma1") g1v = a.values;
           if (a.name == "gamma2") g2v = a.values;
         }
         if (g1v.empty()) g1v = parse_list_flag("gamma1", "0.2:1.0:0.1");
         if (g2v.empty()) g2v = parse_list_flag("gamma2", "0.1:0.9:0.1");
         emit(s, run_contour(make_spec(s, {"gamma1", g1v},
                                       Axis{"gamma2", g2v})));
       }},
      {"m-sweep", "BER vs the Nakagami shape of one link",
       [](CliState& s) {
         emit(s, run_m_sweep(make_spec(
                     s, {s.axis, axis_values(s, s.axis, "1:6:1")})));
       }},
      {"oma-compare", "effective bits of NOMA vs the TDMA baseline",
       [](CliState& s) {
         emit(s, run_oma_comparison(make_spec(
                     s, {"snr_db", axis_values(s, "snr_db", "0:25:5")})));
       }},
      {"ks-validate",
       "Kolmogorov-Smirnov check of the sum/difference channel approximations",
       [](CliState& s) { run_ks_validate(s); }},
      {"xcheck", "analytic engine vs Monte Carlo engine on one SNR sweep",
       [](CliState& s) { run_xcheck(s); }},
  };

  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common_flags(sub, st);
    if (std::string(c.name) != "ks-validate")
      sub->add_option("--values", st.values,
                      "sweep values: list '0 5 10' or range start:stop:step");
    if (std::string(c.name) == "m-sweep")
      sub->add_option("--axis", st.axis, "m1 | m2")
          ->check(CLI::IsMember({"m1", "m2"}));
    if (std::string(c.name) == "gamma2-opt")
      sub->add_option("--grid-step", st.grid_step, "search resolution")
          ->check(CLI::PositiveNumber);
    sub->callback([&st, sub, &c] {
      merge_config_file(sub, st);
      finalize(st, c.name);
      c.run(st);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
