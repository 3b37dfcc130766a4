#include "sender/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sender {

using nlohmann::json;

void SenderConfig::validate() const {
  if (rho <= 1.0) throw ConfigError("rho must be > 1 (got " + std::to_string(rho) + ")");
  try {
    storm.validate();
  } catch (const StormError& e) {
    throw ConfigError(std::string("storm: ") + e.what());
  }
  if (max_outer_sweeps < 1) throw ConfigError("max_outer_sweeps must be at least 1");
  if (outer_tol <= 0.0) throw ConfigError("outer_tol must be positive");
  if (initial_rank && *initial_rank < 1) throw ConfigError("initial_rank must be positive");
  if (mbp_t <= 0.0) throw ConfigError("mbp_t must be positive");
  if (mbp_max_iter < 1) throw ConfigError("mbp_max_iter must be at least 1");
}

std::size_t SenderConfig::resolve_initial_rank(std::size_t rows, std::size_t cols) const {
  const std::size_t lim = std::min(rows, cols) - 1;
  std::size_t r = initial_rank ? *initial_rank : std::max<std::size_t>(2, std::min(rows, cols) / 2);
  if (r > lim) {
    if (initial_rank)
      throw ConfigError("initial_rank " + std::to_string(r) + " must be <= min(dims)-1 = " +
                        std::to_string(lim));
    r = lim;
  }
  return std::max<std::size_t>(1, r);
}

namespace {
const std::set<std::string> kKnownKeys = {
    "rho",   "activation",       "k_lr",      "omega", "c",    "storm_max_iter",
    "grad_tol", "initial_rank", "max_outer_sweeps", "outer_tol", "seed",
    "mbp",   "mbp_t",            "mbp_iters"};
}

SenderConfig SenderConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKnownKeys.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");

  SenderConfig c;
  try {
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
    if (j.contains("activation"))
      c.activation = activation_from_name(j.at("activation").get<std::string>());
    if (j.contains("k_lr")) c.storm.k_lr = j.at("k_lr").get<double>();
    if (j.contains("omega")) c.storm.omega = j.at("omega").get<double>();
    if (j.contains("c")) c.storm.c = j.at("c").get<double>();
    if (j.contains("storm_max_iter")) c.storm.max_iter = j.at("storm_max_iter").get<int>();
    if (j.contains("grad_tol")) c.storm.grad_tol = j.at("grad_tol").get<double>();
    if (j.contains("initial_rank")) {
      const auto& v = j.at("initial_rank");
      if (v.is_string()) {
        if (v.get<std::string>() != "auto")
          throw ConfigError("initial_rank must be a positive integer or \"auto\"");
        c.initial_rank.reset();
      } else {
        const auto r = v.get<std::int64_t>();
        if (r < 1) throw ConfigError("initial_rank must be positive");
        c.initial_rank = static_cast<std::size_t>(r);
      }
    }
    if (j.contains("max_outer_sweeps")) c.max_outer_sweeps = j.at("max_outer_sweeps").get<int>();
    if (j.contains("outer_tol")) c.outer_tol = j.at("outer_tol").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mbp")) c.mbp_enabled = j.at("mbp").get<bool>();
    if (j.contains("mbp_t")) c.mbp_t = j.at("mbp_t").get<double>();
    if (j.contains("mbp_iters")) c.mbp_max_iter = j.at("mbp_iters").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const MatrixError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

SenderConfig SenderConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SenderConfig::to_json_text() const {
  json j;
  j["rho"] = rho;
  j["activation"] = activation_name(activation);
  j["k_lr"] = storm.k_lr;
  j["omega"] = storm.omega;
  j["c"] = storm.c;
  j["storm_max_iter"] = storm.max_iter;
  j["grad_tol"] = storm.grad_tol;
  if (initial_rank)
    j["initial_rank"] = *initial_rank;
  else
    j["initial_rank"] = "auto";
  j["max_outer_sweeps"] = max_outer_sweeps;
  j["outer_tol"] = outer_tol;
  j["seed"] = seed;
  j["mbp"] = mbp_enabled;
  j["mbp_t"] = mbp_t;
  j["mbp_iters"] = mbp_max_iter;
  return j.dump();
}

}  // namespace sender
