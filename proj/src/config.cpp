#include "mecdep/config.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "mecdep/errors.hpp"

namespace mecdep {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 20> kKnownKeys = {
    "lambda_b",   "lambda_d",     "channels",   "rho_dbm",      "sigma2_dbm",
    "eta",        "theta_db",     "lambda_a",   "t_s",          "p_a_override",
    "mu_o",       "deg_factor",   "m_mec",      "m_loc",        "mu_loc",
    "mu_r",       "delta_fail",   "gamma_repair", "swap_failure_repair",
    "handover_keeps_task"};

template <typename T>
T get_required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

template <typename T>
void get_optional(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

void get_optional(const json& j, const char* key, std::optional<double>& out) {
  if (!j.contains(key) || j.at(key).is_null()) {
    out.reset();
    return;
  }
  if (!j.at(key).is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  out = j.at(key).get<double>();
}

int get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(std::string("key '") + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

SystemParams params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto k : kKnownKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  SystemParams p;
  p.lambda_b = get_required<double>(j, "lambda_b");
  p.lambda_d = get_required<double>(j, "lambda_d");
  get_required<double>(j, "channels");
  p.channels = get_count(j, "channels");
  p.rho_dbm = get_required<double>(j, "rho_dbm");
  p.sigma2_dbm = get_required<double>(j, "sigma2_dbm");
  p.eta = get_required<double>(j, "eta");
  p.theta_db = get_required<double>(j, "theta_db");
  p.lambda_a = get_required<double>(j, "lambda_a");
  get_optional(j, "t_s", p.t_s);
  get_optional(j, "p_a_override", p.p_a_override);
  p.mu_o = get_required<double>(j, "mu_o");
  p.deg_factor = get_required<double>(j, "deg_factor");
  get_required<double>(j, "m_mec");
  p.m_mec = get_count(j, "m_mec");
  if (j.contains("m_loc")) p.m_loc = get_count(j, "m_loc");
  get_optional(j, "mu_loc", p.mu_loc);
  get_optional(j, "mu_r", p.mu_r);
  p.delta_fail = get_required<double>(j, "delta_fail");
  p.gamma_repair = get_required<double>(j, "gamma_repair");
  get_optional(j, "swap_failure_repair", p.swap_failure_repair);
  get_optional(j, "handover_keeps_task", p.handover_keeps_task);
  return validate(p);
}

SystemParams params_from_string(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON at byte offset " + std::to_string(e.byte) + ": " +
                      e.what());
  }
  return params_from_json(j);
}

SystemParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_string(ss.str());
}

json params_to_json(const SystemParams& p) {
  json j;
  j["lambda_b"] = p.lambda_b;
  j["lambda_d"] = p.lambda_d;
  j["channels"] = p.channels;
  j["rho_dbm"] = p.rho_dbm;
  j["sigma2_dbm"] = p.sigma2_dbm;
  j["eta"] = p.eta;
  j["theta_db"] = p.theta_db;
  j["lambda_a"] = p.lambda_a;
  j["t_s"] = p.t_s ? json(*p.t_s) : json(nullptr);
  j["p_a_override"] = p.p_a_override ? json(*p.p_a_override) : json(nullptr);
  j["mu_o"] = p.mu_o;
  j["deg_factor"] = p.deg_factor;
  j["m_mec"] = p.m_mec;
  j["m_loc"] = p.m_loc;
  j["mu_loc"] = p.mu_loc ? json(*p.mu_loc) : json(nullptr);
  j["mu_r"] = p.mu_r ? json(*p.mu_r) : json(nullptr);
  j["delta_fail"] = p.delta_fail;
  j["gamma_repair"] = p.gamma_repair;
  j["swap_failure_repair"] = p.swap_failure_repair;
  j["handover_keeps_task"] = p.handover_keeps_task;
  return j;
}

SystemParams apply_override(const SystemParams& p, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  std::string key(assignment.substr(0, eq));
  std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json j = params_to_json(p);
  if (!j.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  j[key] = value;
  if (!value.is_null()) {
    if (key == "t_s") j["p_a_override"] = nullptr;
    if (key == "p_a_override") j["t_s"] = nullptr;
    if (key == "mu_loc") j["mu_r"] = nullptr;
    if (key == "mu_r") j["mu_loc"] = nullptr;
  }
  return params_from_json(j);
}

}  // namespace mecdep
