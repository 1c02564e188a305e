#include "bacs_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"

#include "bacs/csv.hpp"
#include "bacs/error.hpp"
#include "bacs/oracle.hpp"

namespace bacs::cli {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

MethodSpec with_law(MethodSpec spec, const std::optional<TrueLaw>& law) {
  if (spec.method == Method::oracle) {
    if (!law) throw ConfigError("the oracle method needs a 'law' section");
    spec.law = law;
  }
  return spec;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open input", path);
  return f;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Config resolve(const Overrides& o) {
  Config cfg = o.config ? load_config(*o.config) : Config{};
  if (o.method) {
    cfg.method.method = parse_method(*o.method);
    for (auto& arm : cfg.lucb.arms) arm.method.method = cfg.method.method;
  }
  if (o.alpha) {
    cfg.betting.alpha = *o.alpha;
    cfg.lucb.config.alpha = *o.alpha;
  }
  if (o.c) cfg.betting.c = *o.c;
  if (o.grid) cfg.betting.grid_size = *o.grid;
  cfg.lucb.config.c = cfg.betting.c;
  cfg.lucb.config.grid_size = cfg.betting.grid_size;
  try {
    cfg.betting.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void cmd_cs(const Config& cfg, std::istream& in, std::ostream& out) {
  CsStream stream(with_law(cfg.method, cfg.law), cfg.betting);
  IntervalCsvWriter writer(out);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto field = trim(line);
    if (field.empty()) continue;
    const double x = parse_real(field, lineno);
    if (!(x >= 0.0 && x <= 1.0)) throw DataError("observation outside [0,1]", lineno);
    const auto report = stream.push(x);
    writer.write(stream.n(), x, report);
  }
}

void cmd_simulate(const Config& cfg, std::uint64_t seed, const std::string& path) {
  if (!cfg.law) throw ConfigError("simulate needs a 'law' section");
  Scenario s;
  s.law = *cfg.law;
  s.method = with_law(cfg.method, cfg.law);
  s.prior_regime = cfg.scenario.prior_regime;
  s.horizon = cfg.scenario.horizon;
  s.repetitions = cfg.scenario.repetitions;
  s.seed = seed;
  s.config = cfg.betting;
  s.tracked_mu = cfg.scenario.tracked_mu;
  s.oracle_reference = cfg.scenario.oracle_reference;
  s.threads = cfg.scenario.threads;
  export_results(run_scenario(s), path);
}

void cmd_lucb(const Config& cfg, std::uint64_t seed, std::ostream& out) {
  std::vector<ArmSpec> arms;
  if (cfg.lucb.replay) {
    const CsvTable table = read_csv(std::filesystem::path(*cfg.lucb.replay));
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      ArmSpec a;
      a.name = table.header[i];
      a.method = cfg.method;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double v = table.rows[r][i];
        if (!(v >= 0.0 && v <= 1.0)) throw DataError("reward outside [0,1]", table.row_lines[r]);
        a.replay.push_back(v);
      }
      if (i < cfg.lucb.arms.size()) a.method = cfg.lucb.arms[i].method;
      arms.push_back(std::move(a));
    }
  } else {
    for (const auto& e : cfg.lucb.arms) {
      if (!e.law) throw ConfigError("arm '" + e.name + "' needs a 'law' (or use a replay file)");
      ArmSpec a;
      a.name = e.name;
      a.law = e.law;
      a.method = with_law(e.method, e.law);
      arms.push_back(std::move(a));
    }
  }
  for (const auto& a : arms) {
    try {
      a.method.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (a.method.method == Method::oracle && !a.method.law) {
      throw ConfigError("the oracle method is not available for replayed arms");
    }
  }
  const LucbResult res = lucb_run(arms, cfg.lucb.config, seed);

  if (cfg.lucb.trace) {
    std::ofstream trace(*cfg.lucb.trace);
    if (!trace) throw IoError("cannot open trace file", *cfg.lucb.trace);
    trace << "t,h,l";
    for (const auto& a : arms) trace << ",L_" << a.name << ",U_" << a.name;
    trace << '\n';
    for (const auto& row : res.trace) {
      trace << row.t << ',' << row.h << ',' << row.l;
      for (std::size_t i = 0; i < row.lower.size(); ++i) {
        trace << ',' << format_real(row.lower[i]) << ',' << format_real(row.upper[i]);
      }
      trace << '\n';
    }
    if (!trace) throw IoError("failed writing trace file", *cfg.lucb.trace);
  }

  json summary;
  summary["selected"] = res.selected;
  json names = json::array();
  for (int i : res.selected) names.push_back(arms[static_cast<std::size_t>(i)].name);
  summary["selected_names"] = names;
  summary["total_pulls"] = res.total_pulls;
  summary["t"] = res.t;
  summary["status"] = std::string(to_string(res.status));
  summary["truncated"] = res.status != LucbStatus::stopped;
  summary["seed"] = seed;
  summary["alpha"] = cfg.lucb.config.alpha;
  summary["epsilon"] = cfg.lucb.config.epsilon;
  out << summary.dump(2) << '\n';
}

void cmd_ppi(const Config& cfg, std::optional<std::uint64_t> seed, std::ostream& out,
             std::ostream& summary) {
  if (!cfg.ppi.labeled) throw ConfigError("ppi needs a labeled data file");
  PpiDataset ds;
  ds.residual_bounds = cfg.ppi.bounds;
  try {
    ds.residual_bounds.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!cfg.ppi.classical) {
    if (!cfg.ppi.unlabeled) throw ConfigError("ppi needs an unlabeled data file (or classical mode)");
    const CsvTable u = read_csv(std::filesystem::path(*cfg.ppi.unlabeled));
    const std::size_t col = u.column("f_x");
    for (const auto& row : u.rows) ds.unlabeled_predictions.push_back(row[col]);
  }
  const CsvTable labeled = read_csv(std::filesystem::path(*cfg.ppi.labeled));

  PpiConfig pc;
  pc.n0 = cfg.ppi.n0;
  pc.betting = cfg.betting;
  pc.classical = cfg.ppi.classical;
  pc.method = cfg.method;
  if (pc.method.method == Method::oracle) throw ConfigError("the oracle method is not available for ppi");
  if (pc.method.method != Method::empirical) pc.method = ppi_method(pc.method, pc.n0, ds.residual_bounds);

  IntervalCsvWriter writer(out);
  std::optional<std::size_t> stop;
  if (!labeled.rows.empty()) {
    const std::size_t ycol = labeled.column("y");
    const std::size_t fcol = cfg.ppi.classical ? 0 : labeled.column("f_x");
    PpiState state(ds, pc);
    for (std::size_t i = 0; i < labeled.rows.size(); ++i) {
      const double y = labeled.rows[i][ycol];
      const double fx = cfg.ppi.classical ? 0.0 : labeled.rows[i][fcol];
      const auto report = state.step(y, fx, labeled.row_lines[i]);
      writer.write(i + 1, cfg.ppi.classical ? y : y - fx, report);
      if (!stop && !report.running.empty && report.running.lower > cfg.ppi.null_threshold) stop = i + 1;
    }
  }

  json s;
  s["method"] = std::string(to_string(cfg.method.method));
  s["alpha"] = cfg.betting.alpha;
  s["stop_n"] = stop ? json(*stop) : json(nullptr);
  s["seed"] = seed ? json(*seed) : json(nullptr);
  s["null_threshold"] = cfg.ppi.null_threshold;
  s["plugin_mean"] = cfg.ppi.classical ? json(0.0) : number_or_null(plugin_mean(ds.unlabeled_predictions));
  summary << s.dump(2) << '\n';
}

void cmd_oracle(const Config& cfg, std::ostream& out) {
  if (!cfg.law) throw ConfigError("oracle needs a 'law' section");
  const CandidateGrid grid(cfg.betting.grid_size);
  out << "mu,lambda_star,at_boundary,growth\n";
  for (double mu : grid.points()) {
    const auto s = oracle_lambda(*cfg.law, mu, cfg.betting.c);
    out << format_real(mu) << ',' << format_real(s.lambda) << ',' << (s.at_boundary ? 1 : 0) << ','
        << format_real(oracle_growth(*cfg.law, s.lambda, mu)) << '\n';
  }
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predictive-assisted anytime-valid confidence sequences for bounded means"};
  app.require_subcommand(1);
  Overrides o;
  std::string config;
  std::uint64_t seed = 0;
  std::string method;
  double alpha = 0.0;
  double c = 0.0;
  int grid = 0;
  std::string out_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config document");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--method", method, "empirical, parametric, mdp, betel, retel or oracle");
    cmd->add_option("--alpha", alpha, "Miscoverage level");
    cmd->add_option("--c", c, "Betting range truncation");
    cmd->add_option("--grid", grid, "Candidate grid size G");
    cmd->add_option("--out", out_path, "Output path (stdout when omitted)");
  };
  std::string cs_input;
  auto* cs = app.add_subcommand("cs", "Confidence sequence for a stream of observations");
  add_common(cs);
  cs->add_option("input", cs_input, "Observation file, one value per line (stdin when omitted)");
  auto* sim = app.add_subcommand("simulate", "Repeated-stream coverage and width experiment");
  add_common(sim);
  std::string trace_path;
  auto* lucb = app.add_subcommand("lucb", "LUCB best-arm identification");
  add_common(lucb);
  std::string replay_path;
  lucb->add_option("replay", replay_path, "Replay CSV, one column per arm");
  lucb->add_option("--trace", trace_path, "Trace CSV output");
  auto* ppi = app.add_subcommand("ppi", "Prediction-powered confidence sequence and sequential test");
  add_common(ppi);
  std::string labeled_path;
  std::string unlabeled_path;
  std::string summary_path;
  ppi->add_option("labeled", labeled_path, "Labeled CSV with columns y,f_x");
  ppi->add_option("unlabeled", unlabeled_path, "Unlabeled CSV with column f_x");
  ppi->add_option("--summary", summary_path, "Stop-time summary JSON (stderr when omitted)");
  auto* orc = app.add_subcommand("oracle", "Oracle coefficients over the candidate grid");
  add_common(orc);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  CLI::App* cmd = app.get_subcommands().front();
  if (cmd->count("--config")) o.config = config;
  if (cmd->count("--seed")) o.seed = seed;
  if (cmd->count("--method")) o.method = method;
  if (cmd->count("--alpha")) o.alpha = alpha;
  if (cmd->count("--c")) o.c = c;
  if (cmd->count("--grid")) o.grid = grid;
  if (cmd->count("--out")) o.out = out_path;

  try {
    Config cfg = resolve(o);
    auto with_output = [&](auto&& body) {
      if (!o.out) return body(out);
      std::ofstream f(*o.out);
      if (!f) throw IoError("cannot open output", *o.out);
      body(f);
      if (!f) throw IoError("failed writing output", *o.out);
    };
    if (cmd == cs) {
      if (cs_input.empty()) {
        with_output([&](std::ostream& os) { cmd_cs(cfg, in, os); });
      } else {
        auto f = open_in(cs_input);
        with_output([&](std::ostream& os) { cmd_cs(cfg, f, os); });
      }
    } else if (cmd == sim) {
      if (!o.seed) throw ConfigError("simulate requires --seed");
      cmd_simulate(cfg, *o.seed, o.out.value_or("results.csv"));
    } else if (cmd == lucb) {
      if (!o.seed) throw ConfigError("lucb requires --seed");
      if (!replay_path.empty()) cfg.lucb.replay = replay_path;
      if (!trace_path.empty()) cfg.lucb.trace = trace_path;
      with_output([&](std::ostream& os) { cmd_lucb(cfg, *o.seed, os); });
    } else if (cmd == ppi) {
      if (!labeled_path.empty()) cfg.ppi.labeled = labeled_path;
      if (!unlabeled_path.empty()) cfg.ppi.unlabeled = unlabeled_path;
      with_output([&](std::ostream& os) {
        if (summary_path.empty()) {
          cmd_ppi(cfg, o.seed, os, err);
        } else {
          std::ofstream s(summary_path);
          if (!s) throw IoError("cannot open summary", summary_path);
          cmd_ppi(cfg, o.seed, os, s);
        }
      });
    } else if (cmd == orc) {
      with_output([&](std::ostream& os) { cmd_oracle(cfg, os); });
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace bacs::cli
