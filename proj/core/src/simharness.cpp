#include "bacs/simharness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "bacs/csv.hpp"
#include "bacs/error.hpp"
#include "bacs/oracle.hpp"

namespace bacs {

std::string_view to_string(PriorRegime r) noexcept {
  switch (r) {
    case PriorRegime::informative: return "informative";
    case PriorRegime::noninformative: return "noninformative";
    case PriorRegime::misspecified: return "misspecified";
    case PriorRegime::custom: return "custom";
  }
  return "unknown";
}

PriorRegime parse_prior_regime(std::string_view name) {
  for (auto r : {PriorRegime::informative, PriorRegime::noninformative, PriorRegime::misspecified,
                 PriorRegime::custom}) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown prior regime '" + std::string(name) +
                    "'; valid regimes: informative, noninformative, misspecified, custom");
}

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

PriorPreset make(BetaPrior rho, GammaPrior nu) { return {{rho, nu}, rho}; }

BetaPrior centred(double scale, double mean) { return {scale * mean, scale * (1.0 - mean)}; }

}  // namespace

PriorPreset preset_prior(const TrueLaw& law, PriorRegime regime, Method /*method*/) {
  if (regime == PriorRegime::custom) throw ConfigError("the custom regime has no preset");
  if (regime == PriorRegime::noninformative) return make({1.0, 1.0}, {1.5, 1.0});
  const bool informative = regime == PriorRegime::informative;
  const std::string label = law.describe();

  switch (law.kind()) {
    case TrueLaw::Kind::bernoulli: {
      const double p = law.p();
      if (informative) return make(centred(500.0, p), {1.0, 100.0});
      double bad = -1.0;
      if (near(p, 0.1)) bad = 0.5;
      if (near(p, 0.5)) bad = 0.1;
      if (bad < 0.0) break;
      return make(centred(500.0, bad), {7.5, 1.0});
    }
    case TrueLaw::Kind::beta: {
      const auto& c = law.components().front();
      GammaPrior nu;
      if (near(c.a, 0.5) && near(c.b, 0.5)) {
        nu = {7.5, 1.0};
      } else if (near(c.a, 1.0) && near(c.b, 1.0)) {
        nu = {2.0, 0.1};
      } else if (near(c.a, 10.0) && near(c.b, 30.0)) {
        nu = {2.0, 1.0};
      } else {
        break;
      }
      return make(centred(200.0, informative ? law.mean() : 0.9), nu);
    }
    case TrueLaw::Kind::beta_mixture: {
      const auto& cs = law.components();
      const bool known = cs.size() == 2 && near(cs[0].weight, 0.25) && near(cs[0].a, 5.0) &&
                         near(cs[0].b, 15.0) && near(cs[1].weight, 0.75) && near(cs[1].a, 15.0) &&
                         near(cs[1].b, 5.0);
      if (!known) break;
      if (informative) return make(centred(500.0, law.mean()), {2.0, 2.0});
      return make(centred(200.0, 0.1), {2.0, 2.0});
    }
    case TrueLaw::Kind::finite_atoms:
      break;
  }
  throw ConfigError("no " + std::string(to_string(regime)) + " prior preset for " + label);
}

void Scenario::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double mu : tracked_mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("tracked means must lie in (0,1)");
  }
}

MethodSpec resolve_method(const Scenario& s) {
  MethodSpec spec = s.method;
  if (spec.method == Method::oracle) spec.law = s.law;
  if (s.prior_regime != PriorRegime::custom) {
    const auto preset = preset_prior(s.law, s.prior_regime, spec.method);
    spec.prior = preset.working;
    spec.etel.mu_prior = preset.mu_prior;
  }
  return spec;
}

RunResult run_scenario(const Scenario& s) {
  s.validate();
  const MethodSpec spec = resolve_method(s);
  spec.validate();
  const CandidateGrid grid(s.config.grid_size);
  const double truth = s.law.mean();

  std::vector<std::size_t> tracked;
  if (s.tracked_mu.empty()) {
    const double target = truth + 0.25 < 1.0 ? truth + 0.25 : truth - 0.25;
    tracked.push_back(grid.nearest_index(target));
  } else {
    for (double mu : s.tracked_mu) tracked.push_back(grid.nearest_index(mu));
  }

  const bool is_oracle = spec.method == Method::oracle;
  const bool with_reference = s.oracle_reference && !is_oracle;
  std::vector<double> oracle_coeffs;
  if (with_reference) oracle_coeffs = oracle_lambdas(s.law, grid, s.config.c);

  const auto n_max = static_cast<std::size_t>(s.horizon);
  const auto reps = static_cast<std::size_t>(s.repetitions);
  struct Trajectory {
    std::vector<double> width;
    std::vector<double> oracle_width;
    std::vector<char> missed;  // cumulative
    std::vector<double> log_growth;  // n_max x tracked
    bool had_empty = false;
  };
  std::vector<Trajectory> runs(reps);

  parallel_for(reps, s.threads, [&](std::size_t r) {
    Rng rng(derive_seed(s.seed, r));
    const auto xs = s.law.sample(rng, n_max);
    CsStream stream(spec, s.config);
    std::optional<WealthLedger> reference;
    if (with_reference) reference.emplace(s.config.grid_size);
    Trajectory& t = runs[r];
    t.width.resize(n_max);
    t.oracle_width.resize(n_max);
    t.missed.resize(n_max);
    t.log_growth.resize(n_max * tracked.size());
    bool missed = false;
    for (std::size_t i = 0; i < n_max; ++i) {
      const auto report = stream.push(xs[i]);
      const auto& cs = report.running;
      if (cs.empty) t.had_empty = true;
      missed = missed || !cs.contains(truth);
      t.width[i] = cs.width();
      t.missed[i] = missed ? 1 : 0;
      if (with_reference) {
        t.oracle_width[i] = process_observation(*reference, xs[i], oracle_coeffs, s.config).running.width();
      } else {
        t.oracle_width[i] = cs.width();
      }
      const double n = static_cast<double>(i + 1);
      for (std::size_t k = 0; k < tracked.size(); ++k) {
        t.log_growth[i * tracked.size() + k] = stream.ledger().log_wealth[tracked[k]] / n;
      }
    }
  });

  RunResult out;
  out.seed = s.seed;
  out.repetitions = s.repetitions;
  for (std::size_t idx : tracked) out.tracked_mu.push_back(grid[idx]);
  out.steps.resize(n_max);
  out.log_growth.assign(n_max, std::vector<double>(tracked.size(), 0.0));
  const double inv_r = 1.0 / static_cast<double>(reps);
  for (std::size_t i = 0; i < n_max; ++i) {
    double width = 0.0;
    double oracle_width = 0.0;
    double miss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      width += runs[r].width[i];
      oracle_width += runs[r].oracle_width[i];
      miss += runs[r].missed[i];
      for (std::size_t k = 0; k < tracked.size(); ++k) {
        out.log_growth[i][k] += runs[r].log_growth[i * tracked.size() + k];
      }
    }
    for (double& g : out.log_growth[i]) g *= inv_r;
    StepAggregate& a = out.steps[i];
    a.n = i + 1;
    a.mean_width = width * inv_r;
    if (is_oracle) {
      a.width_over_oracle = 1.0;
    } else if (with_reference) {
      a.width_over_oracle = oracle_width > 0.0 ? width / oracle_width
                                               : std::numeric_limits<double>::quiet_NaN();
    } else {
      a.width_over_oracle = std::numeric_limits<double>::quiet_NaN();
    }
    a.cum_miscoverage = miss * inv_r;
    a.mean_log_growth_rate = out.log_growth[i].empty() ? 0.0 : out.log_growth[i][0];
  }
  for (std::size_t r = 0; r < reps; ++r) {
    if (runs[r].had_empty) out.empty_repetitions.push_back(r);
    out.missed.push_back(n_max > 0 && runs[r].missed[n_max - 1] != 0);
  }
  return out;
}

void export_results(const RunResult& r, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open results file for writing", path.string());
  os << "# seed=" << r.seed << " repetitions=" << r.repetitions
     << " stream_seeds=derive_seed(seed,index)\n";
  os << "n,mean_width,width_over_oracle,cum_miscoverage,mean_log_growth_rate\n";
  for (const auto& a : r.steps) {
    os << a.n << ',' << format_real(a.mean_width) << ',' << format_real(a.width_over_oracle) << ','
       << format_real(a.cum_miscoverage) << ',' << format_real(a.mean_log_growth_rate) << '\n';
  }
  os.flush();
  if (!os) throw IoError("failed writing results file", path.string());
}

RunResult read_results(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expected{"n", "mean_width", "width_over_oracle", "cum_miscoverage",
                                          "mean_log_growth_rate"};
  if (table.header != expected) throw DataError("unexpected results header in " + path.string(), 1);
  RunResult r;
  for (const auto& c : table.comments) {
    std::istringstream is(c);
    std::string token;
    while (is >> token) {
      if (token.rfind("seed=", 0) == 0) r.seed = std::stoull(token.substr(5));
      if (token.rfind("repetitions=", 0) == 0) r.repetitions = std::stoi(token.substr(12));
    }
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    StepAggregate a;
    a.n = static_cast<std::size_t>(row[0]);
    a.mean_width = row[1];
    a.width_over_oracle = row[2];
    a.cum_miscoverage = row[3];
    a.mean_log_growth_rate = row[4];
    r.steps.push_back(a);
  }
  return r;
}

}  // namespace bacs
