#pragma once

// The JSON config document shared by every subcommand. All sections are
// optional; unknown keys are rejected so typos surface as config errors.
//
//   {
//     "method": "mdp", "alpha": 0.1, "c": 0.95, "grid_size": 500,
//     "kappa": 50, "tau": 1, "G_etel": 1000, "prune_nats": 60,
//     "prior": {"rho": {"a": 1, "b": 1}, "nu": {"shape": 1.5, "rate": 1}},
//     "mu_prior": {"a": 1, "b": 1},
//     "particles": {"rho": 40, "nu": 25}, "quadrature_nodes": 64,
//     "law": {"kind": "beta", "a": 10, "b": 30},
//     "scenario": {"prior_regime": "informative", "horizon": 200, "repetitions": 100,
//                  "tracked_mu": [0.5], "oracle_reference": true, "threads": 1},
//     "lucb": {"m": 1, "epsilon": 0.1, "max_pulls": 100000, "bonferroni": false,
//              "arms": [{"name": "a", "law": {...}, "method": "mdp", ...}],
//              "replay": "rewards.csv", "trace": "trace.csv"},
//     "ppi": {"n0": 1000, "ell": -1, "u": 1, "classical": false, "null_threshold": 0,
//             "labeled": "labeled.csv", "unlabeled": "unlabeled.csv"}
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bacs/law.hpp"
#include "bacs/lucb.hpp"
#include "bacs/method.hpp"
#include "bacs/ppi.hpp"
#include "bacs/simharness.hpp"
#include "bacs/wealth.hpp"

namespace bacs::cli {

struct ScenarioSection {
  PriorRegime prior_regime = PriorRegime::noninformative;
  int horizon = 200;
  int repetitions = 100;
  std::vector<double> tracked_mu;
  bool oracle_reference = true;
  unsigned threads = 1;
};

struct ArmEntry {
  std::string name;
  std::optional<TrueLaw> law;
  MethodSpec method;
};

struct LucbSection {
  LucbConfig config;
  std::vector<ArmEntry> arms;
  std::optional<std::string> replay;
  std::optional<std::string> trace;
};

struct PpiSection {
  double n0 = 1000.0;
  ResidualBounds bounds;
  bool classical = false;
  double null_threshold = 0.0;
  std::optional<std::string> labeled;
  std::optional<std::string> unlabeled;
};

struct Config {
  MethodSpec method;
  BettingConfig betting;
  std::optional<TrueLaw> law;
  ScenarioSection scenario;
  LucbSection lucb;
  PpiSection ppi;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
Config parse_config(const nlohmann::json& doc);
/// Throws IoError when the file cannot be read, ConfigError when it is not JSON.
Config load_config(const std::filesystem::path& path);

TrueLaw parse_law(const nlohmann::json& j);

}  // namespace bacs::cli
