#include "ctscuc/network.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ctscuc {

using nlohmann::json;

std::size_t Case::bus_position(int bus_id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return i;
  throw CaseError(CaseError::Kind::Reference, fmt::format("unknown bus {}", bus_id));
}

std::size_t Case::branch_position(int branch_id) const {
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].id == branch_id) return i;
  throw CaseError(CaseError::Kind::Reference, fmt::format("unknown branch {}", branch_id));
}

std::size_t Case::generator_position(int generator_id) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].id == generator_id) return i;
  throw CaseError(CaseError::Kind::Reference,
                  fmt::format("unknown generator {}", generator_id));
}

bool Case::has_bus(int bus_id) const {
  return std::any_of(buses.begin(), buses.end(), [&](const Bus& b) { return b.id == bus_id; });
}

double Case::total_demand(int period) const {
  const auto& row = demand.at(static_cast<std::size_t>(period));
  return std::accumulate(row.begin(), row.end(), 0.0);
}

int Case::lowest_bus_id() const {
  if (buses.empty()) throw CaseError(CaseError::Kind::Invariant, "case has no buses");
  return std::min_element(buses.begin(), buses.end(),
                          [](const Bus& a, const Bus& b) { return a.id < b.id; })
      ->id;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void syntax_error(const std::string& msg) {
  throw CaseError(CaseError::Kind::Syntax, msg);
}

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string context) : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object()) syntax_error(context_ + ": expected an object");
  }

  template <typename T>
  T required(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) syntax_error(fmt::format("{}: missing field '{}'", context_, key));
    return convert<T>(*it, key);
  }

  template <typename T>
  T optional(const char* key, T fallback) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return fallback;
    return convert<T>(*it, key);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (key == "radial")
        syntax_error(fmt::format("{}: 'radial' is computed and cannot be set", context_));
      if (!seen_.count(key)) syntax_error(fmt::format("{}: unknown field '{}'", context_, key));
    }
  }

 private:
  template <typename T>
  T convert(const json& v, const char* key) const {
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer())
          syntax_error(fmt::format("{}: field '{}' must be an integer", context_, key));
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number())
          syntax_error(fmt::format("{}: field '{}' must be a number", context_, key));
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
          syntax_error(fmt::format("{}: field '{}' must be a boolean", context_, key));
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
          syntax_error(fmt::format("{}: field '{}' must be a string", context_, key));
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      syntax_error(fmt::format("{}: field '{}': {}", context_, key, e.what()));
    }
  }

  const json& obj_;
  std::string context_;
  std::unordered_set<std::string> seen_;
};

const json& require_array(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) syntax_error(fmt::format("case: missing field '{}'", key));
  if (!it->is_array()) syntax_error(fmt::format("case: field '{}' must be an array", key));
  return *it;
}

}  // namespace

Case parse_case(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    syntax_error(fmt::format("malformed case file: {}", e.what()));
  }

  Case c;
  ObjectReader top(doc, "case");
  c.name = top.optional<std::string>("name", "");
  c.notes = top.optional<std::string>("notes", "");
  c.base_mva = top.optional<double>("base_mva", 100.0);
  c.horizon = top.required<int>("horizon");
  require_array(doc, "buses");
  require_array(doc, "generators");
  require_array(doc, "branches");
  require_array(doc, "demand");
  top.required<json>("buses");
  top.required<json>("generators");
  top.required<json>("branches");
  top.required<json>("demand");
  top.reject_unknown();

  std::unordered_set<int> ids;
  for (const auto& item : doc["buses"]) {
    ObjectReader r(item, "bus");
    Bus b;
    b.id = r.required<int>("id");
    b.name = r.optional<std::string>("name", "");
    r.reject_unknown();
    if (!ids.insert(b.id).second)
      throw CaseError(CaseError::Kind::DuplicateId, fmt::format("duplicate bus id {}", b.id));
    c.buses.push_back(std::move(b));
  }

  ids.clear();
  for (const auto& item : doc["generators"]) {
    ObjectReader r(item, "generator");
    Generator g;
    g.id = r.required<int>("id");
    g.bus = r.required<int>("bus");
    g.p_min = r.required<double>("p_min");
    g.p_max = r.required<double>("p_max");
    g.cost_energy = r.required<double>("cost_energy");
    g.cost_noload = r.required<double>("cost_noload");
    g.cost_startup = r.required<double>("cost_startup");
    g.ramp_hr = r.required<double>("ramp_hr");
    g.ramp_su = r.required<double>("ramp_su");
    g.ramp_sd = r.required<double>("ramp_sd");
    g.ramp_10 = r.required<double>("ramp_10");
    g.min_up = r.required<int>("min_up");
    g.min_down = r.required<int>("min_down");
    g.initial_on = r.optional<bool>("initial_on", false);
    g.initial_output = r.optional<double>("initial_output", 0.0);
    // Omitted history means the unit has settled: nothing is forced at t=1.
    g.initial_hours_in_state =
        r.optional<int>("initial_hours_in_state", std::max(g.min_up, g.min_down));
    r.reject_unknown();
    if (!ids.insert(g.id).second)
      throw CaseError(CaseError::Kind::DuplicateId, fmt::format("duplicate generator id {}", g.id));
    if (!c.has_bus(g.bus))
      throw CaseError(CaseError::Kind::Reference,
                      fmt::format("generator {} references unknown bus {}", g.id, g.bus));
    c.generators.push_back(g);
  }

  ids.clear();
  for (const auto& item : doc["branches"]) {
    ObjectReader r(item, "branch");
    Branch k;
    k.id = r.required<int>("id");
    k.from_bus = r.required<int>("from_bus");
    k.to_bus = r.required<int>("to_bus");
    k.susceptance = r.required<double>("susceptance");
    k.rating_long_term = r.required<double>("rating_long_term");
    k.rating_emergency = r.required<double>("rating_emergency");
    k.switchable = r.optional<bool>("switchable", true);
    r.reject_unknown();
    if (!ids.insert(k.id).second)
      throw CaseError(CaseError::Kind::DuplicateId, fmt::format("duplicate branch id {}", k.id));
    for (int bus : {k.from_bus, k.to_bus})
      if (!c.has_bus(bus))
        throw CaseError(CaseError::Kind::Reference,
                        fmt::format("branch {} references unknown bus {}", k.id, bus));
    if (k.from_bus == k.to_bus)
      throw CaseError(CaseError::Kind::Invariant,
                      fmt::format("self-loop branch {} at bus {}", k.id, k.from_bus));
    c.branches.push_back(k);
  }

  const auto& demand = doc["demand"];
  if (c.horizon < 1) throw CaseError(CaseError::Kind::Invariant, "horizon must be at least 1");
  if (demand.size() != static_cast<std::size_t>(c.horizon))
    syntax_error(fmt::format("demand has {} periods but horizon is {}", demand.size(), c.horizon));
  for (std::size_t t = 0; t < demand.size(); ++t) {
    const auto& row = demand[t];
    if (!row.is_array() || row.size() != c.buses.size())
      syntax_error(fmt::format("demand period {} must list one value per bus ({})", t + 1,
                               c.buses.size()));
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) syntax_error(fmt::format("demand period {}: non-numeric entry", t + 1));
      values.push_back(v.get<double>());
    }
    c.demand.push_back(std::move(values));
  }
  return c;
}

Case read_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CaseError(CaseError::Kind::Syntax, fmt::format("cannot open case file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str());
}

std::string serialize_case(const Case& c) {
  json doc = json::object();
  if (!c.name.empty()) doc["name"] = c.name;
  if (!c.notes.empty()) doc["notes"] = c.notes;
  doc["base_mva"] = c.base_mva;
  doc["horizon"] = c.horizon;
  doc["buses"] = json::array();
  for (const auto& b : c.buses) doc["buses"].push_back({{"id", b.id}, {"name", b.name}});
  doc["generators"] = json::array();
  for (const auto& g : c.generators) {
    doc["generators"].push_back({{"id", g.id},
                                 {"bus", g.bus},
                                 {"p_min", g.p_min},
                                 {"p_max", g.p_max},
                                 {"cost_energy", g.cost_energy},
                                 {"cost_noload", g.cost_noload},
                                 {"cost_startup", g.cost_startup},
                                 {"ramp_hr", g.ramp_hr},
                                 {"ramp_su", g.ramp_su},
                                 {"ramp_sd", g.ramp_sd},
                                 {"ramp_10", g.ramp_10},
                                 {"min_up", g.min_up},
                                 {"min_down", g.min_down},
                                 {"initial_on", g.initial_on},
                                 {"initial_output", g.initial_output},
                                 {"initial_hours_in_state", g.initial_hours_in_state}});
  }
  doc["branches"] = json::array();
  for (const auto& k : c.branches) {
    doc["branches"].push_back({{"id", k.id},
                               {"from_bus", k.from_bus},
                               {"to_bus", k.to_bus},
                               {"susceptance", k.susceptance},
                               {"rating_long_term", k.rating_long_term},
                               {"rating_emergency", k.rating_emergency},
                               {"switchable", k.switchable}});
  }
  doc["demand"] = c.demand;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Graph queries

namespace {

struct Adjacency {
  // adjacency[bus_pos] = list of (neighbour bus_pos, branch position)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;
};

Adjacency build_adjacency(const Case& c) {
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < c.buses.size(); ++i) pos[c.buses[i].id] = i;
  Adjacency adj;
  adj.edges.resize(c.buses.size());
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    auto f = pos.find(br.from_bus);
    auto t = pos.find(br.to_bus);
    if (f == pos.end() || t == pos.end()) continue;
    adj.edges[f->second].emplace_back(t->second, k);
    adj.edges[t->second].emplace_back(f->second, k);
  }
  return adj;
}

std::size_t count_reachable(const Adjacency& adj) {
  if (adj.edges.empty()) return 0;
  std::vector<char> seen(adj.edges.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto [w, k] : adj.edges[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_connected(const Case& c) {
  if (c.buses.empty()) return false;
  return count_reachable(build_adjacency(c)) == c.buses.size();
}

std::vector<std::string> validate_case(const Case& c) {
  std::vector<std::string> out;
  auto add = [&out](std::string s) { out.push_back(std::move(s)); };

  if (!(c.base_mva > 0)) add(fmt::format("base_mva must be positive (got {})", c.base_mva));
  if (c.horizon < 1) add(fmt::format("horizon must be at least 1 (got {})", c.horizon));
  if (c.buses.empty()) add("case has no buses");

  std::unordered_set<int> seen;
  for (const auto& b : c.buses)
    if (!seen.insert(b.id).second) add(fmt::format("bus {}: duplicate id", b.id));
  seen.clear();
  for (const auto& g : c.generators) {
    auto who = fmt::format("generator {}", g.id);
    if (!seen.insert(g.id).second) add(who + ": duplicate id");
    if (!c.has_bus(g.bus)) add(fmt::format("{}: unknown bus {}", who, g.bus));
    if (g.p_min < 0) add(who + ": p_min must be non-negative");
    if (g.p_min > g.p_max) add(fmt::format("{}: p_min {} exceeds p_max {}", who, g.p_min, g.p_max));
    if (g.ramp_hr < 0 || g.ramp_su < 0 || g.ramp_sd < 0 || g.ramp_10 < 0)
      add(who + ": ramp limits must be non-negative");
    if (g.min_up < 1) add(who + ": min_up must be at least 1");
    if (g.min_down < 1) add(who + ": min_down must be at least 1");
    if (g.initial_hours_in_state < 0) add(who + ": initial_hours_in_state must be non-negative");
    if (g.initial_on) {
      if (g.initial_output < g.p_min || g.initial_output > g.p_max)
        add(fmt::format("{}: initial_output {} outside [p_min, p_max] while initially on", who,
                        g.initial_output));
    } else if (g.initial_output != 0.0) {
      add(fmt::format("{}: initial_output must be 0 while initially off", who));
    }
  }
  seen.clear();
  for (const auto& k : c.branches) {
    auto who = fmt::format("branch {}", k.id);
    if (!seen.insert(k.id).second) add(who + ": duplicate id");
    if (!c.has_bus(k.from_bus)) add(fmt::format("{}: unknown bus {}", who, k.from_bus));
    if (!c.has_bus(k.to_bus)) add(fmt::format("{}: unknown bus {}", who, k.to_bus));
    if (k.from_bus == k.to_bus) add(who + ": self-loop branch");
    if (k.susceptance == 0.0) add(who + ": susceptance must be non-zero");
    if (!(k.rating_long_term > 0)) add(who + ": rating_long_term must be positive");
    if (k.rating_long_term > k.rating_emergency)
      add(fmt::format("{}: rating_long_term {} exceeds rating_emergency {}", who,
                      k.rating_long_term, k.rating_emergency));
  }

  if (c.demand.size() != static_cast<std::size_t>(std::max(c.horizon, 0)))
    add(fmt::format("demand has {} periods but horizon is {}", c.demand.size(), c.horizon));
  for (std::size_t t = 0; t < c.demand.size(); ++t) {
    if (c.demand[t].size() != c.buses.size())
      add(fmt::format("demand period {}: expected {} entries", t + 1, c.buses.size()));
    for (std::size_t i = 0; i < c.demand[t].size(); ++i)
      if (c.demand[t][i] < 0)
        add(fmt::format("demand period {} bus {}: negative demand", t + 1,
                        i < c.buses.size() ? c.buses[i].id : -1));
  }

  if (!c.buses.empty() && !is_connected(c)) add("network disconnected");
  return out;
}

std::set<int> find_radial_branches(const Case& c) {
  const Adjacency adj = build_adjacency(c);
  const std::size_t n = adj.edges.size();
  if (n == 0 || count_reachable(adj) != n)
    throw CaseError(CaseError::Kind::Topology, "network disconnected");

  // Iterative Tarjan low-link. The tree edge into a vertex is skipped by
  // branch position, so a parallel branch still counts as a back edge.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> disc(n, kNone), low(n, 0);
  struct Frame {
    std::size_t vertex;
    std::size_t parent_edge;
    std::size_t next;
  };
  std::set<int> bridges;
  std::size_t timer = 0;
  std::vector<Frame> stack;
  stack.push_back({0, kNone, 0});
  disc[0] = low[0] = timer++;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < adj.edges[f.vertex].size()) {
      auto [w, k] = adj.edges[f.vertex][f.next++];
      if (k == f.parent_edge) continue;
      if (disc[w] == kNone) {
        disc[w] = low[w] = timer++;
        stack.push_back({w, k, 0});
      } else {
        low[f.vertex] = std::min(low[f.vertex], disc[w]);
      }
      continue;
    }
    const Frame done = f;
    stack.pop_back();
    if (!stack.empty()) {
      auto& parent = stack.back();
      low[parent.vertex] = std::min(low[parent.vertex], low[done.vertex]);
      if (low[done.vertex] > disc[parent.vertex]) bridges.insert(c.branches[done.parent_edge].id);
    }
  }
  return bridges;
}

std::set<int> mark_radial_branches(Case& c) {
  auto bridges = find_radial_branches(c);
  for (auto& k : c.branches) k.radial = bridges.count(k.id) > 0;
  c.radial_flags_computed = true;
  return bridges;
}

ContingencySet build_contingency_set(const Case& c) {
  if (!c.radial_flags_computed)
    throw CaseError(CaseError::Kind::Topology,
                    "radial flags not computed; call mark_radial_branches first");
  ContingencySet set;
  for (const auto& k : c.branches)
    if (!k.radial) set.members.push_back(k.id);
  std::sort(set.members.begin(), set.members.end());
  return set;
}

Case truncate_horizon(const Case& c, int periods) {
  if (periods < 1 || periods > c.horizon)
    throw CaseError(CaseError::Kind::Invariant,
                    fmt::format("cannot keep {} of {} periods", periods, c.horizon));
  Case out = c;
  out.horizon = periods;
  out.demand.resize(static_cast<std::size_t>(periods));
  return out;
}

Case load_case(const std::string& path) {
  Case c = read_case_file(path);
  auto problems = validate_case(c);
  if (!problems.empty()) {
    std::string msg = fmt::format("invalid case '{}':", path);
    for (const auto& p : problems) msg += "\n  " + p;
    throw CaseError(CaseError::Kind::Invariant, msg);
  }
  mark_radial_branches(c);
  return c;
}

}  // namespace ctscuc
