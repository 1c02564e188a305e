#include "bacs_cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "bacs/error.hpp"

namespace bacs::cli {
namespace {

using nlohmann::json;

void only_keys(const json& j, std::string_view where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + std::string(where));
  }
}

template <class T>
T get(const json& j, const char* key, std::string_view where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + std::string(where) + " has the wrong type");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

BetaPrior parse_beta(const json& j, std::string_view where) {
  only_keys(j, where, {"a", "b"});
  BetaPrior p;
  read(j, "a", p.a, where);
  read(j, "b", p.b, where);
  return p;
}

GammaPrior parse_gamma(const json& j, std::string_view where) {
  only_keys(j, where, {"shape", "rate"});
  GammaPrior p;
  read(j, "shape", p.shape, where);
  read(j, "rate", p.rate, where);
  return p;
}

constexpr std::initializer_list<const char*> kMethodKeys = {
    "method", "kappa", "tau", "G_etel", "prune_nats", "prior", "mu_prior", "particles",
    "quadrature_nodes"};

// Applies the method keys present in j on top of `spec`.
void apply_method(const json& j, MethodSpec& spec, std::string_view where) {
  if (j.contains("method")) spec.method = parse_method(get<std::string>(j, "method", where));
  read(j, "kappa", spec.kappa, where);
  read(j, "tau", spec.etel.tau, where);
  read(j, "G_etel", spec.etel.grid_size, where);
  read(j, "prune_nats", spec.etel.prune_nats, where);
  read(j, "quadrature_nodes", spec.quadrature_nodes, where);
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    only_keys(p, "prior", {"rho", "nu"});
    if (p.contains("rho")) spec.prior.rho = parse_beta(p.at("rho"), "prior.rho");
    if (p.contains("nu")) spec.prior.nu = parse_gamma(p.at("nu"), "prior.nu");
  }
  if (j.contains("mu_prior")) spec.etel.mu_prior = parse_beta(j.at("mu_prior"), "mu_prior");
  if (j.contains("particles")) {
    const json& p = j.at("particles");
    only_keys(p, "particles", {"rho", "nu"});
    read(p, "rho", spec.particles_rho, "particles");
    read(p, "nu", spec.particles_nu, "particles");
  }
}

ScenarioSection parse_scenario(const json& j) {
  only_keys(j, "scenario",
            {"prior_regime", "horizon", "repetitions", "tracked_mu", "oracle_reference", "threads"});
  ScenarioSection s;
  if (j.contains("prior_regime")) {
    s.prior_regime = parse_prior_regime(get<std::string>(j, "prior_regime", "scenario"));
  }
  read(j, "horizon", s.horizon, "scenario");
  read(j, "repetitions", s.repetitions, "scenario");
  read(j, "tracked_mu", s.tracked_mu, "scenario");
  read(j, "oracle_reference", s.oracle_reference, "scenario");
  read(j, "threads", s.threads, "scenario");
  return s;
}

LucbSection parse_lucb(const json& j, const MethodSpec& base) {
  only_keys(j, "lucb", {"m", "alpha", "epsilon", "max_pulls", "bonferroni", "arms", "replay", "trace"});
  LucbSection s;
  read(j, "m", s.config.m, "lucb");
  read(j, "alpha", s.config.alpha, "lucb");
  read(j, "epsilon", s.config.epsilon, "lucb");
  read(j, "max_pulls", s.config.max_pulls, "lucb");
  read(j, "bonferroni", s.config.bonferroni, "lucb");
  if (j.contains("replay")) s.replay = get<std::string>(j, "replay", "lucb");
  if (j.contains("trace")) s.trace = get<std::string>(j, "trace", "lucb");
  if (j.contains("arms")) {
    const json& arms = j.at("arms");
    if (!arms.is_array()) throw ConfigError("lucb.arms must be an array");
    for (std::size_t i = 0; i < arms.size(); ++i) {
      const json& a = arms[i];
      const std::string where = "lucb.arms[" + std::to_string(i) + "]";
      std::initializer_list<const char*> keys = {"name", "law", "method", "kappa", "tau",
                                                 "G_etel", "prune_nats", "prior", "mu_prior",
                                                 "particles", "quadrature_nodes"};
      only_keys(a, where, keys);
      ArmEntry e;
      e.name = a.contains("name") ? get<std::string>(a, "name", where) : "arm" + std::to_string(i);
      if (a.contains("law")) e.law = parse_law(a.at("law"));
      e.method = base;
      apply_method(a, e.method, where);
      s.arms.push_back(std::move(e));
    }
  }
  return s;
}

PpiSection parse_ppi(const json& j) {
  only_keys(j, "ppi", {"n0", "ell", "u", "classical", "null_threshold", "labeled", "unlabeled"});
  PpiSection s;
  read(j, "n0", s.n0, "ppi");
  read(j, "ell", s.bounds.ell, "ppi");
  read(j, "u", s.bounds.u, "ppi");
  read(j, "classical", s.classical, "ppi");
  read(j, "null_threshold", s.null_threshold, "ppi");
  if (j.contains("labeled")) s.labeled = get<std::string>(j, "labeled", "ppi");
  if (j.contains("unlabeled")) s.unlabeled = get<std::string>(j, "unlabeled", "ppi");
  return s;
}

}  // namespace

TrueLaw parse_law(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("law needs a 'kind'");
  const auto kind = get<std::string>(j, "kind", "law");
  try {
    if (kind == "bernoulli") {
      only_keys(j, "law", {"kind", "p"});
      return TrueLaw::bernoulli(get<double>(j, "p", "law"));
    }
    if (kind == "beta") {
      only_keys(j, "law", {"kind", "a", "b"});
      return TrueLaw::beta(get<double>(j, "a", "law"), get<double>(j, "b", "law"));
    }
    if (kind == "beta_mixture") {
      only_keys(j, "law", {"kind", "components"});
      std::vector<BetaComponent> comps;
      for (const json& c : j.at("components")) {
        only_keys(c, "law.components", {"a", "b", "weight"});
        comps.push_back({get<double>(c, "a", "law.components"), get<double>(c, "b", "law.components"),
                         get<double>(c, "weight", "law.components")});
      }
      return TrueLaw::beta_mixture(std::move(comps));
    }
    if (kind == "finite_atoms") {
      only_keys(j, "law", {"kind", "atoms"});
      std::vector<Atom> atoms;
      for (const json& a : j.at("atoms")) {
        only_keys(a, "law.atoms", {"location", "weight"});
        atoms.push_back({get<double>(a, "location", "law.atoms"), get<double>(a, "weight", "law.atoms")});
      }
      return TrueLaw::finite_atoms(std::move(atoms));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid law: ") + e.what());
  } catch (const json::exception&) {
    throw ConfigError("malformed law section");
  }
  throw ConfigError("unknown law kind '" + kind + "'; valid kinds: bernoulli, beta, beta_mixture, finite_atoms");
}

Config parse_config(const json& doc) {
  if (doc.is_null()) return Config{};
  std::initializer_list<const char*> top = {"method", "alpha", "c", "grid_size", "kappa", "tau",
                                            "G_etel", "prune_nats", "prior", "mu_prior", "particles",
                                            "quadrature_nodes", "law", "scenario", "lucb", "ppi"};
  only_keys(doc, "config", top);
  Config cfg;
  apply_method(doc, cfg.method, "config");
  read(doc, "alpha", cfg.betting.alpha, "config");
  read(doc, "c", cfg.betting.c, "config");
  read(doc, "grid_size", cfg.betting.grid_size, "config");
  if (doc.contains("law")) cfg.law = parse_law(doc.at("law"));
  if (doc.contains("scenario")) cfg.scenario = parse_scenario(doc.at("scenario"));
  cfg.lucb = doc.contains("lucb") ? parse_lucb(doc.at("lucb"), cfg.method) : LucbSection{};
  cfg.lucb.config.alpha = doc.contains("lucb") && doc.at("lucb").contains("alpha") ? cfg.lucb.config.alpha
                                                                                 : cfg.betting.alpha;
  if (doc.contains("ppi")) cfg.ppi = parse_ppi(doc.at("ppi"));
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace bacs::cli
