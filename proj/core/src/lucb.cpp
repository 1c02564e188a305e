#include "bacs/lucb.hpp"

#include <algorithm>
#include <numeric>

#include "bacs/error.hpp"

namespace bacs {

void LucbConfig::validate(std::size_t arm_count) const {
  if (arm_count < 2) throw ConfigError("LUCB needs at least two arms");
  if (m < 1 || static_cast<std::size_t>(m) >= arm_count) {
    throw ConfigError("LUCB target size m must satisfy 1 <= m < number of arms");
  }
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (max_pulls < static_cast<long>(arm_count)) throw ConfigError("max_pulls is below the arm count");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
}

std::string_view to_string(LucbStatus s) noexcept {
  switch (s) {
    case LucbStatus::running: return "running";
    case LucbStatus::stopped: return "stopped";
    case LucbStatus::truncated_max_pulls: return "truncated_max_pulls";
    case LucbStatus::truncated_replay: return "truncated_replay";
  }
  return "unknown";
}

ArmState::ArmState(ArmSpec spec, BettingConfig config, std::uint64_t seed)
    : spec_(std::move(spec)), stream_(spec_.method, config), rng_(seed) {}

double ArmState::empirical_mean() const noexcept {
  return pulls_ == 0 ? 0.0 : sum_ / static_cast<double>(pulls_);
}

double ArmState::lower() const noexcept {
  const auto cs = stream_.interval();
  return cs.empty ? empirical_mean() : cs.lower;
}

double ArmState::upper() const noexcept {
  const auto cs = stream_.interval();
  return cs.empty ? empirical_mean() : cs.upper;
}

bool ArmState::exhausted() const noexcept { return !spec_.law && pulls_ >= spec_.replay.size(); }

void ArmState::pull() {
  const double x = spec_.law ? spec_.law->sample(rng_) : spec_.replay.at(pulls_);
  stream_.push(x);
  ++pulls_;
  sum_ += x;
}

namespace {

void rank(LucbState& s) {
  const int k = static_cast<int>(s.arms.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s.arms[a].empirical_mean() > s.arms[b].empirical_mean();
  });
  s.top.assign(order.begin(), order.begin() + s.config.m);
  std::vector<char> in_top(static_cast<std::size_t>(k), 0);
  for (int a : s.top) in_top[a] = 1;

  s.h = -1;
  for (int a = 0; a < k; ++a) {
    if (in_top[a] && (s.h < 0 || s.arms[a].lower() < s.arms[s.h].lower())) s.h = a;
  }
  s.l = -1;
  for (int a = 0; a < k; ++a) {
    if (!in_top[a] && (s.l < 0 || s.arms[a].upper() > s.arms[s.l].upper())) s.l = a;
  }
}

void record(LucbState& s) {
  LucbTraceRow row{s.t, s.h, s.l, {}, {}};
  for (const auto& a : s.arms) {
    row.lower.push_back(a.lower());
    row.upper.push_back(a.upper());
  }
  s.trace.push_back(std::move(row));
}

}  // namespace

LucbState lucb_init(std::vector<ArmSpec> arms, const LucbConfig& config, std::uint64_t seed) {
  config.validate(arms.size());
  BettingConfig betting{config.alpha, config.c, config.grid_size};
  if (config.bonferroni) betting.alpha /= static_cast<double>(arms.size());
  LucbState s;
  s.config = config;
  s.arms.reserve(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (!arms[i].law && arms[i].replay.empty()) {
      throw ConfigError("arm '" + arms[i].name + "' has neither a law nor replay rewards");
    }
    s.arms.emplace_back(std::move(arms[i]), betting, derive_seed(seed, i));
  }
  for (auto& a : s.arms) a.pull();
  s.t = static_cast<long>(s.arms.size());
  s.total_pulls = s.t;
  rank(s);
  record(s);
  return s;
}

bool lucb_step(LucbState& s) {
  if (s.status != LucbStatus::running) return false;
  rank(s);
  if (s.arms[s.l].upper() - s.arms[s.h].lower() < s.config.epsilon) {
    s.status = LucbStatus::stopped;
    return false;
  }
  if (s.total_pulls + 2 > s.config.max_pulls) {
    s.status = LucbStatus::truncated_max_pulls;
    return false;
  }
  if (s.arms[s.h].exhausted() || s.arms[s.l].exhausted()) {
    s.status = LucbStatus::truncated_replay;
    return false;
  }
  s.arms[std::min(s.h, s.l)].pull();
  s.arms[std::max(s.h, s.l)].pull();
  s.total_pulls += 2;
  s.t += 1;
  record(s);
  return true;
}

LucbResult lucb_run(std::vector<ArmSpec> arms, const LucbConfig& config, std::uint64_t seed) {
  LucbState s = lucb_init(std::move(arms), config, seed);
  while (lucb_step(s)) {
  }
  rank(s);
  LucbResult r;
  r.selected = s.top;
  r.total_pulls = s.total_pulls;
  r.t = s.t;
  r.status = s.status;
  r.trace = std::move(s.trace);
  return r;
}

}  // namespace bacs
