#include "subsidylab/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "subsidylab/system_function.hpp"

namespace subsidylab {

using nlohmann::ordered_json;

namespace {

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

const ordered_json& need(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(std::string("missing required field \"") + key + "\"");
  return *it;
}

double as_number(const ordered_json& j, const char* what) {
  if (!j.is_number())
    throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

int as_int(const ordered_json& j, const char* what) {
  if (!j.is_number_integer())
    throw SchemaError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> as_number_array(const ordered_json& j, const char* what) {
  if (!j.is_array())
    throw SchemaError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_number(v, what));
  return out;
}

// File indices are 1-based; internal ones 0-based.
std::vector<int> as_index_array(const ordered_json& j, const char* what) {
  if (!j.is_array())
    throw SchemaError(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    const int e = as_int(v, what);
    if (e < 1)
      throw SchemaError(std::string(what) + " indices are 1-based");
    out.push_back(e - 1);
  }
  return out;
}

SpNode parse_sp_node(const ordered_json& j) {
  if (!j.is_object())
    throw SchemaError("series-parallel node must be an object");
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "leaf") {
    const int c = as_int(need(j, "component"), "leaf component");
    if (c < 1) throw SchemaError("leaf component indices are 1-based");
    return SpNode::leaf(c - 1);
  }
  if (kind != "series" && kind != "parallel")
    throw SchemaError("series-parallel node kind must be leaf, series or "
                      "parallel");
  const ordered_json& kids = need(j, "children");
  if (!kids.is_array() || kids.empty())
    throw SchemaError("series-parallel node needs a nonempty children array");
  std::vector<SpNode> children;
  children.reserve(kids.size());
  for (const auto& kid : kids) children.push_back(parse_sp_node(kid));
  return kind == "series" ? SpNode::series(std::move(children))
                          : SpNode::parallel(std::move(children));
}

SystemFunction parse_phi(const ordered_json& j, int n) {
  if (!j.is_object()) throw SchemaError("phi must be an object");
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "cnf") {
    const ordered_json& cl = need(j, "clauses");
    if (!cl.is_array()) throw SchemaError("cnf clauses must be an array");
    std::vector<std::vector<int>> clauses;
    clauses.reserve(cl.size());
    for (const auto& c : cl) {
      if (!c.is_array()) throw SchemaError("each cnf clause must be an array");
      std::vector<int> lits;
      lits.reserve(c.size());
      for (const auto& l : c) lits.push_back(as_int(l, "cnf literal"));
      clauses.push_back(std::move(lits));
    }
    return SystemFunction::from_cnf(n, std::move(clauses));
  }
  if (kind == "sp") return SystemFunction::from_sp(n, parse_sp_node(need(j, "root")));
  if (kind == "table") {
    const ordered_json& vals = need(j, "values");
    if (!vals.is_array()) throw SchemaError("table values must be an array");
    std::vector<char> table;
    table.reserve(vals.size());
    for (const auto& v : vals) {
      if (v.is_boolean())
        table.push_back(v.get<bool>() ? 1 : 0);
      else
        table.push_back(as_int(v, "table value") != 0 ? 1 : 0);
    }
    return SystemFunction::from_table(n, std::move(table));
  }
  throw SchemaError("phi kind must be cnf, sp or table");
}

std::optional<double> optional_h(const ordered_json& j) {
  auto it = j.find("H");
  if (it == j.end()) return std::nullopt;
  return as_number(*it, "H");
}

MaintenanceGame parse_maintenance(const ordered_json& j) {
  const int n = as_int(need(j, "n"), "n");
  if (n < 1) throw SchemaError("n must be positive");
  std::vector<double> costs = as_number_array(need(j, "costs"), "costs");
  std::vector<double> p = as_number_array(need(j, "p"), "p");
  SystemFunction phi = parse_phi(need(j, "phi"), n);
  return make_maintenance_game(std::move(costs), std::move(p), std::move(phi),
                               optional_h(j));
}

CostSharingGame parse_cost_sharing(const ordered_json& j) {
  const int agents = as_int(need(j, "agents"), "agents");
  const ordered_json& acts = need(j, "actions");
  if (!acts.is_array() || acts.empty())
    throw SchemaError("actions must be a nonempty array");
  std::vector<CsgAction> actions;
  actions.reserve(acts.size());
  for (const auto& a : acts) {
    if (!a.is_object()) throw SchemaError("each action must be an object");
    CsgAction action;
    action.id = need(a, "id").get<std::string>();
    action.avail = as_index_array(need(a, "avail"), "avail");
    actions.push_back(std::move(action));
  }
  const ordered_json& ws = need(j, "worlds");
  if (!ws.is_array() || ws.empty())
    throw SchemaError("worlds must be a nonempty array");
  std::vector<CsgWorld> worlds;
  worlds.reserve(ws.size());
  for (const auto& w : ws) {
    if (!w.is_object()) throw SchemaError("each world must be an object");
    CsgWorld world;
    world.prob = as_number(need(w, "prob"), "world prob");
    const ordered_json& costs = need(w, "costs");
    if (!costs.is_object())
      throw SchemaError("world costs must map action ids to numbers");
    world.costs.reserve(actions.size());
    for (const auto& action : actions) {
      auto it = costs.find(action.id);
      if (it == costs.end())
        throw SchemaError("world is missing a cost for action \"" +
                          action.id + "\"");
      world.costs.push_back(as_number(*it, "action cost"));
    }
    worlds.push_back(std::move(world));
  }
  return make_cost_sharing_game(agents, std::move(actions), std::move(worlds),
                                optional_h(j));
}

}  // namespace

LoadedGame parse_game(const std::string& text) {
  const ordered_json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("game file must hold a JSON object");
  const std::string type = need(j, "type").get<std::string>();
  LoadedGame game;
  if (type == "maintenance") {
    game.type = LoadedGame::Type::kMaintenance;
    game.cmg = parse_maintenance(j);
  } else if (type == "cost_sharing") {
    game.type = LoadedGame::Type::kCostSharing;
    game.csg = parse_cost_sharing(j);
  } else {
    throw SchemaError("game type must be maintenance or cost_sharing");
  }
  return game;
}

LoadedGame load_game(const std::string& path) {
  return parse_game(read_text_file(path));
}

MaintenanceSubsidy parse_maintenance_scheme(const std::string& text,
                                            const MaintenanceGame& g) {
  const ordered_json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("scheme file must hold a JSON object");
  const std::string type = need(j, "type").get<std::string>();
  MaintenanceSubsidy scheme;
  if (type == "uniform") {
    scheme = MaintenanceSubsidy::uniform(as_number(need(j, "sigma"), "sigma"));
  } else if (type == "per_agent") {
    scheme = MaintenanceSubsidy::per_agent_scheme(
        as_number_array(need(j, "sigma"), "sigma"));
  } else if (type == "conditional") {
    scheme = MaintenanceSubsidy::conditional(
        as_number_array(need(j, "prior"), "prior"),
        as_number_array(need(j, "on_y1"), "on_y1"),
        as_number_array(need(j, "on_y0"), "on_y0"));
  } else {
    throw SchemaError("scheme type must be uniform, per_agent or conditional");
  }
  scheme.validate(g.n, g.H);
  return scheme;
}

MaintenanceSubsidy load_maintenance_scheme(const std::string& path,
                                           const MaintenanceGame& g) {
  return parse_maintenance_scheme(read_text_file(path), g);
}

CsgSubsidy parse_csg_scheme(const std::string& text,
                            const CostSharingGame& g) {
  const ordered_json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("scheme file must hold a JSON object");
  const std::string type = need(j, "type").get<std::string>();
  if (type != "csg")
    throw SchemaError("cost-sharing scheme type must be csg");
  const ordered_json& amounts = need(j, "amounts");
  if (!amounts.is_object())
    throw SchemaError("amounts must map action ids to numbers");
  CsgSubsidy sub = CsgSubsidy::none(g);
  for (const auto& [id, val] : amounts.items()) {
    bool found = false;
    for (std::size_t a = 0; a < g.actions.size(); ++a) {
      if (g.actions[a].id == id) {
        sub.amount[a] = as_number(val, "subsidy amount");
        found = true;
        break;
      }
    }
    if (!found) throw SchemaError("unknown action id \"" + id + "\"");
  }
  sub.validate(g);
  return sub;
}

CsgSubsidy load_csg_scheme(const std::string& path, const CostSharingGame& g) {
  return parse_csg_scheme(read_text_file(path), g);
}

Graph parse_graph(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() &&
         std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
  if (pos < text.size() && text[pos] == '{') {
    const ordered_json j = parse_json(text);
    const int n = as_int(need(j, "n"), "n");
    const ordered_json& es = need(j, "edges");
    if (!es.is_array()) throw SchemaError("edges must be an array");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(es.size());
    for (const auto& e : es) {
      if (!e.is_array() || e.size() != 2)
        throw SchemaError("each edge must be a [u, v] pair");
      const int u = as_int(e[0], "edge endpoint");
      const int v = as_int(e[1], "edge endpoint");
      if (u < 1 || v < 1)
        throw SchemaError("edge endpoints are 1-based");
      edges.emplace_back(u - 1, v - 1);
    }
    return make_graph(n, std::move(edges));
  }
  // Plain text: vertex count, then endpoint pairs.
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n)) throw SchemaError("edge list must start with the vertex "
                                    "count");
  std::vector<std::pair<int, int>> edges;
  int u = 0, v = 0;
  while (in >> u) {
    if (!(in >> v)) throw SchemaError("edge list has a dangling endpoint");
    if (u < 1 || v < 1) throw SchemaError("edge endpoints are 1-based");
    edges.emplace_back(u - 1, v - 1);
  }
  return make_graph(n, std::move(edges));
}

Graph load_graph(const std::string& path) {
  return parse_graph(read_text_file(path));
}

SetCoverInstance parse_set_cover(const std::string& text) {
  const ordered_json j = parse_json(text);
  if (!j.is_object())
    throw SchemaError("set cover file must hold a JSON object");
  const int n = as_int(need(j, "n"), "n");
  const ordered_json& ss = need(j, "sets");
  if (!ss.is_array()) throw SchemaError("sets must be an array");
  std::vector<std::vector<int>> sets;
  sets.reserve(ss.size());
  for (const auto& s : ss) sets.push_back(as_index_array(s, "set element"));
  return make_set_cover(n, std::move(sets), as_int(need(j, "k"), "k"));
}

SetCoverInstance load_set_cover(const std::string& path) {
  return parse_set_cover(read_text_file(path));
}

GameDistribution parse_distribution(const std::string& text) {
  const ordered_json j = parse_json(text);
  if (!j.is_object())
    throw SchemaError("distribution file must hold a JSON object");
  GameDistribution dist;
  const std::string family = need(j, "family").get<std::string>();
  if (family == "series")
    dist.family = GameDistribution::Family::kSeries;
  else if (family == "parallel")
    dist.family = GameDistribution::Family::kParallel;
  else if (family == "sp_random")
    dist.family = GameDistribution::Family::kSpRandom;
  else if (family == "cnf_random")
    dist.family = GameDistribution::Family::kCnfRandom;
  else if (family == "csg_random")
    dist.family = GameDistribution::Family::kCsgRandom;
  else
    throw SchemaError("family must be series, parallel, sp_random, "
                      "cnf_random or csg_random");
  if (auto it = j.find("cost_law"); it != j.end()) {
    const std::string law = it->get<std::string>();
    if (law == "uniform")
      dist.cost_law = GameDistribution::CostLaw::kUniform;
    else if (law == "triangular")
      dist.cost_law = GameDistribution::CostLaw::kTriangular;
    else if (law == "point")
      dist.cost_law = GameDistribution::CostLaw::kPoint;
    else
      throw SchemaError("cost_law must be uniform, triangular or point");
  }
  if (auto it = j.find("prior_law"); it != j.end()) {
    const std::string law = it->get<std::string>();
    if (law == "uniform")
      dist.prior_law = GameDistribution::PriorLaw::kUniform;
    else if (law == "point")
      dist.prior_law = GameDistribution::PriorLaw::kPoint;
    else
      throw SchemaError("prior_law must be uniform or point");
  }
  if (auto it = j.find("n"); it != j.end()) dist.n = as_int(*it, "n");
  if (auto it = j.find("cost_lo"); it != j.end())
    dist.cost_lo = as_number(*it, "cost_lo");
  if (auto it = j.find("cost_hi"); it != j.end())
    dist.cost_hi = as_number(*it, "cost_hi");
  if (auto it = j.find("cost_mode"); it != j.end())
    dist.cost_mode = as_number(*it, "cost_mode");
  if (auto it = j.find("prior_lo"); it != j.end())
    dist.prior_lo = as_number(*it, "prior_lo");
  if (auto it = j.find("prior_hi"); it != j.end())
    dist.prior_hi = as_number(*it, "prior_hi");
  if (auto it = j.find("H"); it != j.end()) dist.H = as_number(*it, "H");
  if (auto it = j.find("cnf_clauses"); it != j.end())
    dist.cnf_clauses = as_int(*it, "cnf_clauses");
  if (auto it = j.find("csg_actions"); it != j.end())
    dist.csg_actions = as_int(*it, "csg_actions");
  if (auto it = j.find("csg_worlds"); it != j.end())
    dist.csg_worlds = as_int(*it, "csg_worlds");
  dist.validate();
  return dist;
}

GameDistribution load_distribution(const std::string& path) {
  return parse_distribution(read_text_file(path));
}

namespace {

ordered_json sp_node_to_json(const SpNode& node) {
  ordered_json j;
  switch (node.kind) {
    case SpNode::Kind::kLeaf:
      j["kind"] = "leaf";
      j["component"] = node.component + 1;
      return j;
    case SpNode::Kind::kSeries:
      j["kind"] = "series";
      break;
    case SpNode::Kind::kParallel:
      j["kind"] = "parallel";
      break;
  }
  ordered_json kids = ordered_json::array();
  for (const auto& kid : node.children) kids.push_back(sp_node_to_json(kid));
  j["children"] = std::move(kids);
  return j;
}

ordered_json phi_to_json(const SystemFunction& phi) {
  ordered_json j;
  switch (phi.kind()) {
    case SystemFunction::Kind::kCnf: {
      j["kind"] = "cnf";
      j["clauses"] = phi.clauses();
      break;
    }
    case SystemFunction::Kind::kSp: {
      j["kind"] = "sp";
      j["root"] = sp_node_to_json(phi.sp_root());
      break;
    }
    case SystemFunction::Kind::kTable: {
      j["kind"] = "table";
      ordered_json vals = ordered_json::array();
      for (char v : phi.table()) vals.push_back(v ? 1 : 0);
      j["values"] = std::move(vals);
      break;
    }
  }
  return j;
}

}  // namespace

ordered_json game_to_json(const MaintenanceGame& g) {
  ordered_json j;
  j["type"] = "maintenance";
  j["n"] = g.n;
  j["costs"] = g.costs;
  j["p"] = g.p;
  j["phi"] = phi_to_json(g.phi);
  j["H"] = g.H;
  return j;
}

ordered_json game_to_json(const CostSharingGame& g) {
  ordered_json j;
  j["type"] = "cost_sharing";
  j["agents"] = g.agents;
  ordered_json acts = ordered_json::array();
  for (const auto& a : g.actions) {
    ordered_json aj;
    aj["id"] = a.id;
    ordered_json avail = ordered_json::array();
    for (int i : a.avail) avail.push_back(i + 1);
    aj["avail"] = std::move(avail);
    acts.push_back(std::move(aj));
  }
  j["actions"] = std::move(acts);
  ordered_json worlds = ordered_json::array();
  for (const auto& w : g.worlds) {
    ordered_json wj;
    wj["prob"] = w.prob;
    ordered_json costs;
    for (std::size_t a = 0; a < g.actions.size(); ++a)
      costs[g.actions[a].id] = w.costs[a];
    wj["costs"] = std::move(costs);
    worlds.push_back(std::move(wj));
  }
  j["worlds"] = std::move(worlds);
  j["H"] = g.H;
  return j;
}

namespace {

void dump_value(const ordered_json& j, std::string& out, int indent,
                int level) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v))
        throw SchemaError("non-finite number has no JSON representation");
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out += buf;
      return;
    }
    case nlohmann::json::value_t::string:
      // Round-trip through nlohmann for escaping only; strings have no
      // formatting ambiguity.
      out += nlohmann::json(j.get<std::string>()).dump();
      return;
    default:
      break;
  }
  const std::string pad((level + 1) * indent, ' ');
  const std::string close_pad(level * indent, ' ');
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      dump_value(j[i], out, indent, level + 1);
      if (i + 1 < j.size()) out += ",";
      out += "\n";
    }
    out += close_pad + "]";
    return;
  }
  if (j.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  std::size_t i = 0;
  for (const auto& [key, value] : j.items()) {
    out += pad;
    out += nlohmann::json(key).dump();
    out += ": ";
    dump_value(value, out, indent, level + 1);
    if (++i < j.size()) out += ",";
    out += "\n";
  }
  out += close_pad + "}";
}

}  // namespace

std::string canonical_dump(const ordered_json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  out += "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write file: " + path);
}

}  // namespace subsidylab
