#include "swflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace swflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config: " + path + ": " + msg);
}

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void check_keys(const json& obj, const std::vector<std::string>& known,
                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) != known.end()) continue;
    std::string best;
    int best_d = 1 << 20;
    for (const auto& k : known) {
      int d = levenshtein(it.key(), k);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    std::string msg = "unknown key \"" + it.key() + "\"";
    if (best_d <= 2) msg += " (did you mean \"" + best + "\"?)";
    fail(path, msg);
  }
}

template <class T>
T get_req(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required key");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path + "." + key, "wrong type");
  }
}

template <class T>
T get_opt(const json& obj, const std::string& key, const std::string& path, T def) {
  if (!obj.contains(key)) return def;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path + "." + key, "wrong type");
  }
}

FlowConfig from_json(const json& root) {
  check_keys(root, {"grid", "k", "S0", "dt", "t_end", "integrator", "dealias", "init",
                    "output", "blowup_sup_f", "fd"},
             "config");

  FlowConfig c;
  if (!root.contains("grid")) fail("config.grid", "missing required key");
  const json& jg = root.at("grid");
  check_keys(jg, {"n", "sizes", "lengths"}, "config.grid");
  int n = get_req<int>(jg, "n", "config.grid");
  auto sizes = get_req<std::vector<int>>(jg, "sizes", "config.grid");
  auto lengths = get_opt<std::vector<double>>(jg, "lengths", "config.grid", {});
  try {
    c.grid = make_grid(n, sizes, lengths);
  } catch (const std::invalid_argument& e) {
    fail("config.grid", e.what());
  }

  c.k = get_req<int>(root, "k", "config");
  if (c.k < 0) fail("config.k", "must be >= 0");
  c.s0 = get_req<double>(root, "S0", "config");
  c.dt = get_req<double>(root, "dt", "config");
  if (!(c.dt > 0.0)) fail("config.dt", "must be positive");
  c.t_end = get_req<double>(root, "t_end", "config");
  if (c.t_end < 0.0) fail("config.t_end", "must be >= 0");
  std::string integ = get_req<std::string>(root, "integrator", "config");
  if (integ == "rk4_direct")
    c.integrator = Integrator::rk4_direct;
  else if (integ == "imex_deturck")
    c.integrator = Integrator::imex_deturck;
  else
    fail("config.integrator", "must be \"rk4_direct\" or \"imex_deturck\"");
  c.dealias = get_req<bool>(root, "dealias", "config");

  if (!root.contains("init")) fail("config.init", "missing required key");
  const json& ji = root.at("init");
  check_keys(ji, {"seed", "kmax", "amp_phi", "amp_a", "spinor_rank"}, "config.init");
  c.init.seed = get_req<std::uint64_t>(ji, "seed", "config.init");
  c.init.kmax = get_req<int>(ji, "kmax", "config.init");
  c.init.amp_phi = get_req<double>(ji, "amp_phi", "config.init");
  c.init.amp_a = get_req<double>(ji, "amp_a", "config.init");
  c.init.spinor_rank = get_opt<int>(ji, "spinor_rank", "config.init", 1);
  if (c.init.spinor_rank < 1) fail("config.init.spinor_rank", "must be >= 1");
  for (int a = 0; a < c.grid.n; ++a)
    if (3 * c.init.kmax >= c.grid.sizes[a]) fail("config.init.kmax", "must satisfy kmax < N/3");

  if (root.contains("output")) {
    const json& jo = root.at("output");
    check_keys(jo, {"record_every", "snapshot_every"}, "config.output");
    c.record_every = get_opt<int>(jo, "record_every", "config.output", 1);
    c.snapshot_every = get_opt<int>(jo, "snapshot_every", "config.output", 0);
    if (c.record_every < 1) fail("config.output.record_every", "must be >= 1");
  }
  c.blowup_sup_f = get_opt<double>(root, "blowup_sup_f", "config", 1e6);
  if (!(c.blowup_sup_f > 0.0)) fail("config.blowup_sup_f", "must be positive");

  if (root.contains("fd")) {
    const json& jf = root.at("fd");
    check_keys(jf, {"h", "num_directions"}, "config.fd");
    c.fd_h = get_opt<double>(jf, "h", "config.fd", 1e-4);
    c.fd_directions = get_opt<int>(jf, "num_directions", "config.fd", 20);
    if (c.fd_h < 1e-6 || c.fd_h > 1e-3) fail("config.fd.h", "must lie in [1e-6, 1e-3]");
    if (c.fd_directions < 1) fail("config.fd.num_directions", "must be >= 1");
  }
  return c;
}

}  // namespace

FlowConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  return from_json(root);
}

FlowConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string config_to_json(const FlowConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid.n}, {"sizes", c.grid.sizes}, {"lengths", c.grid.lengths}};
  j["k"] = c.k;
  j["S0"] = c.s0;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["integrator"] = to_string(c.integrator);
  j["dealias"] = c.dealias;
  j["init"] = {{"seed", c.init.seed},
               {"kmax", c.init.kmax},
               {"amp_phi", c.init.amp_phi},
               {"amp_a", c.init.amp_a},
               {"spinor_rank", c.init.spinor_rank}};
  j["output"] = {{"record_every", c.record_every}, {"snapshot_every", c.snapshot_every}};
  j["blowup_sup_f"] = c.blowup_sup_f;
  j["fd"] = {{"h", c.fd_h}, {"num_directions", c.fd_directions}};
  return j.dump(2);
}

}  // namespace swflow
