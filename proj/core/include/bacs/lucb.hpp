#pragma once

// LUCB best-arm identification with one confidence sequence per arm.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bacs/law.hpp"
#include "bacs/method.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

struct ArmSpec {
  std::string name;
  std::optional<TrueLaw> law;  // simulated rewards
  std::vector<double> replay;  // used when law is empty, consumed in order
  MethodSpec method;
};

struct LucbConfig {
  int m = 1;
  double alpha = 0.1;
  double epsilon = 0.1;
  long max_pulls = 100000;
  /// Run each arm at alpha / (number of arms).
  bool bonferroni = false;
  double c = 0.95;
  int grid_size = 500;

  void validate(std::size_t arm_count) const;
};

class ArmState {
 public:
  ArmState(ArmSpec spec, BettingConfig config, std::uint64_t seed);

  const std::string& name() const noexcept { return spec_.name; }
  std::size_t pulls() const noexcept { return pulls_; }
  double empirical_mean() const noexcept;
  /// Running-interval bounds; an empty interval collapses to the empirical mean.
  double lower() const noexcept;
  double upper() const noexcept;
  bool exhausted() const noexcept;
  const CsStream& stream() const noexcept { return stream_; }

  void pull();

 private:
  ArmSpec spec_;
  CsStream stream_;
  Rng rng_;
  std::size_t pulls_ = 0;
  double sum_ = 0.0;
};

enum class LucbStatus { running, stopped, truncated_max_pulls, truncated_replay };

std::string_view to_string(LucbStatus s) noexcept;

struct LucbTraceRow {
  long t;
  int h;
  int l;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct LucbState {
  LucbConfig config;
  std::vector<ArmState> arms;
  long t = 0;
  long total_pulls = 0;
  std::vector<int> top;  // J_t, in rank order
  int h = -1;
  int l = -1;
  LucbStatus status = LucbStatus::running;
  std::vector<LucbTraceRow> trace;
};

/// Pulls every arm once (t = number of arms).
LucbState lucb_init(std::vector<ArmSpec> arms, const LucbConfig& config, std::uint64_t seed);

/// One LUCB round. Ranks arms, picks the contender h and challenger l, and
/// either stops (U_l - L_h < epsilon) or pulls both. Returns false without
/// pulling once the run has stopped or been truncated.
bool lucb_step(LucbState& state);

struct LucbResult {
  std::vector<int> selected;
  long total_pulls = 0;
  long t = 0;
  LucbStatus status = LucbStatus::running;
  std::vector<LucbTraceRow> trace;
};

LucbResult lucb_run(std::vector<ArmSpec> arms, const LucbConfig& config, std::uint64_t seed);

}  // namespace bacs
