#include "pjacobi/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

#include "pjacobi/error.hpp"
#include "pjacobi/models.hpp"

namespace pjacobi::harness {

using json = nlohmann::ordered_json;

namespace {

std::string join_issues(const std::vector<FieldIssue>& issues) {
  std::string out = "invalid config";
  for (const auto& i : issues) out += "\n  " + (i.field.empty() ? std::string("<root>") : i.field) + ": " + i.reason;
  return out;
}

std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Reader {
 public:
  std::vector<FieldIssue> issues;
  std::vector<std::string> warnings;

  void fail(const std::string& path, std::string reason) { issues.push_back({path, std::move(reason)}); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void known_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : j.items())
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) warnings.push_back("unknown field " + child(path, key));
  }

  const json* require(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
      fail(child(path, key), "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::int64_t> integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    return j.get<std::int64_t>();
  }

  std::optional<std::int64_t> positive(const json& j, const std::string& path) {
    auto v = integer(j, path);
    if (v && *v <= 0) {
      fail(path, "must be positive");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> seed(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
      fail(path, "expected a non-negative integer");
      return std::nullopt;
    }
    return j.get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<std::vector<std::int64_t>> int_list(const json& j, const std::string& path, bool need_positive) {
    if (!j.is_array() || j.empty()) {
      fail(path, "expected a non-empty array of integers");
      return std::nullopt;
    }
    std::vector<std::int64_t> out;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto v = need_positive ? positive(j[i], item(path, i)) : integer(j[i], item(path, i));
      if (v) out.push_back(*v);
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<double>> times(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      fail(path, "expected a non-empty array of times");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto v = number(j[i], item(path, i));
      if (!v) return std::nullopt;
      if (*v < 0.0) {
        fail(item(path, i), "times must be non-negative");
        return std::nullopt;
      }
      if (!out.empty() && *v <= out.back()) {
        fail(item(path, i), "times must be strictly ascending");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<std::string>> string_list(const json& j, const std::string& path) {
    if (!j.is_array()) {
      fail(path, "expected an array of strings");
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto s = string(j[i], item(path, i));
      if (!s) return std::nullopt;
      out.push_back(*s);
    }
    return out;
  }
};

bool in_cell(const Site& x, const std::vector<std::int64_t>& q) {
  for (std::size_t j = 0; j < q.size(); ++j)
    if (x[j] < 0 || x[j] >= q[j]) return false;
  return true;
}

std::optional<Site> site_field(Reader& r, const json& rec, const std::string& path, std::size_t dim) {
  const json* s = r.require(rec, path, "site");
  if (!s) return std::nullopt;
  auto v = r.int_list(*s, child(path, "site"), false);
  if (!v) return std::nullopt;
  if (v->size() != dim) {
    r.fail(child(path, "site"), "expected " + std::to_string(dim) + " coordinates");
    return std::nullopt;
  }
  return Site(v->begin(), v->end());
}

std::optional<OperatorSpec> read_operator(Reader& r, const json& root) {
  const bool has_model = root.contains("model");
  const bool has_explicit = root.contains("d") || root.contains("q") || root.contains("hoppings") ||
                            root.contains("potentials");
  if (has_model && has_explicit) {
    r.fail("model", "give either a builtin model or explicit d/q/hoppings/potentials, not both");
    return std::nullopt;
  }
  if (!has_model && !has_explicit) return std::nullopt;

  OperatorSpec spec;
  if (has_model) {
    auto name = r.string(root["model"], "model");
    if (!name) return std::nullopt;
    try {
      spec.data = models::builtin(*name);
    } catch (const Error& e) {
      r.fail("model", e.what());
      return std::nullopt;
    }
    spec.model = *name;
    return spec;
  }

  const json* d = r.require(root, "", "d");
  const json* q = r.require(root, "", "q");
  if (!d || !q) return std::nullopt;
  auto dim = r.positive(*d, "d");
  auto period = r.int_list(*q, "q", true);
  if (!dim || !period) return std::nullopt;
  if (static_cast<std::size_t>(*dim) != period->size()) {
    r.fail("q", "expected " + std::to_string(*dim) + " periods");
    return std::nullopt;
  }
  const auto n = static_cast<std::size_t>(*dim);
  spec.data.dim = static_cast<int>(*dim);
  spec.data.period = *period;

  std::size_t before = r.issues.size();
  std::map<std::pair<Site, int>, std::size_t> seen_hop;
  if (root.contains("hoppings")) {
    const json& list = root["hoppings"];
    if (!list.is_array()) r.fail("hoppings", "expected an array");
    else
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = item("hoppings", i);
        const json& rec = list[i];
        if (!r.object(rec, path)) continue;
        r.known_keys(rec, path, {"site", "axis", "re", "im"});
        auto x = site_field(r, rec, path, n);
        const json* ax = r.require(rec, path, "axis");
        auto axis = ax ? r.integer(*ax, child(path, "axis")) : std::nullopt;
        auto re = rec.contains("re") ? r.number(rec["re"], child(path, "re")) : std::optional<double>(0.0);
        auto im = rec.contains("im") ? r.number(rec["im"], child(path, "im")) : std::optional<double>(0.0);
        if (!x || !axis || !re || !im) continue;
        if (!in_cell(*x, spec.data.period)) {
          r.fail(child(path, "site"), "site outside the period cell");
          continue;
        }
        if (*axis < 1 || *axis > *dim) {
          r.fail(child(path, "axis"), "axis must be in 1.." + std::to_string(*dim));
          continue;
        }
        const std::pair<Site, int> key{*x, static_cast<int>(*axis)};
        if (auto [it, fresh] = seen_hop.emplace(key, i); !fresh) {
          r.fail(path, "duplicate record for this (site, axis); first given at " + item("hoppings", it->second));
          continue;
        }
        spec.data.hoppings[key] = Complex(*re, *im);
      }
  }
  std::map<Site, std::size_t> seen_pot;
  if (root.contains("potentials")) {
    const json& list = root["potentials"];
    if (!list.is_array()) r.fail("potentials", "expected an array");
    else
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = item("potentials", i);
        const json& rec = list[i];
        if (!r.object(rec, path)) continue;
        r.known_keys(rec, path, {"site", "value"});
        auto x = site_field(r, rec, path, n);
        const json* v = r.require(rec, path, "value");
        auto value = v ? r.number(*v, child(path, "value")) : std::nullopt;
        if (!x || !value) continue;
        if (!in_cell(*x, spec.data.period)) {
          r.fail(child(path, "site"), "site outside the period cell");
          continue;
        }
        if (auto [it, fresh] = seen_pot.emplace(*x, i); !fresh) {
          r.fail(path, "duplicate record for this site; first given at " + item("potentials", it->second));
          continue;
        }
        spec.data.potential[*x] = *value;
      }
  }
  if (r.issues.size() != before) return std::nullopt;

  const auto cell = Geometry::torus(std::vector<std::int64_t>(n, 1), spec.data.period);
  for (std::size_t c = 0; c < cell.size(); ++c) {
    const Site x = cell.site(c);
    for (int j = 1; j <= spec.data.dim; ++j) spec.data.hoppings.try_emplace({x, j}, 1.0);
    spec.data.potential.try_emplace(x, 0.0);
  }
  const auto report = validate(spec.data);
  for (const auto& v : report.violations) {
    std::string path = "potentials";
    if (v.axis > 0) {
      auto it = seen_hop.find({v.site, v.axis});
      path = it != seen_hop.end() ? item("hoppings", it->second) : "hoppings";
    } else if (auto it = seen_pot.find(v.site); it != seen_pot.end()) {
      path = item("potentials", it->second);
    }
    r.fail(path, v.message);
  }
  if (!report.ok()) return std::nullopt;
  return spec;
}

std::optional<StateSpec> read_state(Reader& r, const json& j, const std::string& path) {
  if (!r.object(j, path)) return std::nullopt;
  if (j.size() != 1) {
    r.fail(path, "expected exactly one of delta, random, amplitudes");
    return std::nullopt;
  }
  StateSpec s;
  const auto& [key, value] = *j.items().begin();
  const std::string sub = child(path, key);
  if (key == "delta") {
    auto v = r.int_list(value, sub, false);
    if (!v) return std::nullopt;
    s.kind = StateSpec::Kind::kDelta;
    s.site = Site(v->begin(), v->end());
  } else if (key == "random") {
    if (!r.object(value, sub)) return std::nullopt;
    r.known_keys(value, sub, {"radius"});
    const json* rad = r.require(value, sub, "radius");
    auto radius = rad ? r.integer(*rad, child(sub, "radius")) : std::nullopt;
    if (!radius) return std::nullopt;
    if (*radius < 0) {
      r.fail(child(sub, "radius"), "must be non-negative");
      return std::nullopt;
    }
    s.kind = StateSpec::Kind::kRandom;
    s.radius = *radius;
  } else if (key == "amplitudes") {
    if (!value.is_array() || value.empty()) {
      r.fail(sub, "expected a non-empty array");
      return std::nullopt;
    }
    s.kind = StateSpec::Kind::kExplicit;
    std::set<Site> seen;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const std::string p = item(sub, i);
      if (!r.object(value[i], p)) return std::nullopt;
      r.known_keys(value[i], p, {"site", "re", "im"});
      const json* st = r.require(value[i], p, "site");
      auto x = st ? r.int_list(*st, child(p, "site"), false) : std::nullopt;
      auto re = value[i].contains("re") ? r.number(value[i]["re"], child(p, "re")) : std::optional<double>(0.0);
      auto im = value[i].contains("im") ? r.number(value[i]["im"], child(p, "im")) : std::optional<double>(0.0);
      if (!x || !re || !im) return std::nullopt;
      Site site(x->begin(), x->end());
      if (!seen.insert(site).second) {
        r.fail(p, "duplicate site");
        return std::nullopt;
      }
      s.entries.emplace_back(std::move(site), Complex(*re, *im));
    }
  } else {
    r.fail(sub, "unknown state kind");
    return std::nullopt;
  }
  return s;
}

std::optional<Task> read_task(Reader& r, const json& root) {
  const json* t = r.require(root, "", "task");
  if (!t || !r.object(*t, "task")) return std::nullopt;
  if (t->size() != 1) {
    r.fail("task", "expected exactly one of bands, evolve, velocity, verify");
    return std::nullopt;
  }
  const auto& [kind, body] = *t->items().begin();
  const std::string path = child("task", kind);
  if (!r.object(body, path)) return std::nullopt;

  if (kind == "bands") {
    r.known_keys(body, path, {"N"});
    const json* n = r.require(body, path, "N");
    auto res = n ? r.int_list(*n, child(path, "N"), true) : std::nullopt;
    if (!res) return std::nullopt;
    return BandsTask{*res};
  }
  if (kind == "evolve") {
    r.known_keys(body, path, {"geometry", "state", "times", "h"});
    EvolveTask task;
    bool ok = true;
    if (const json* g = r.require(body, path, "geometry"); g && r.object(*g, child(path, "geometry"))) {
      const std::string gp = child(path, "geometry");
      if (g->size() == 1 && (g->contains("box") || g->contains("torus"))) {
        task.torus = g->contains("torus");
        const char* key = task.torus ? "torus" : "box";
        auto ext = r.int_list((*g)[key], child(gp, key), true);
        if (ext) task.extent = *ext;
        else ok = false;
      } else {
        r.fail(gp, "expected exactly one of box, torus");
        ok = false;
      }
    } else {
      ok = false;
    }
    const json* st = r.require(body, path, "state");
    auto state = st ? read_state(r, *st, child(path, "state")) : std::nullopt;
    const json* tm = r.require(body, path, "times");
    auto times = tm ? r.times(*tm, child(path, "times")) : std::nullopt;
    if (body.contains("h")) {
      auto h = r.number(body["h"], child(path, "h"));
      if (!h) {
        ok = false;
      } else if (*h <= 0.0) {
        r.fail(child(path, "h"), "must be positive");
        ok = false;
      } else {
        task.h = *h;
      }
    }
    if (!ok || !state || !times) return std::nullopt;
    task.state = *state;
    task.times = *times;
    return task;
  }
  if (kind == "velocity") {
    r.known_keys(body, path, {"N", "box", "state", "times", "axis"});
    VelocityTask task;
    const json* n = r.require(body, path, "N");
    auto res = n ? r.int_list(*n, child(path, "N"), true) : std::nullopt;
    bool ok = res.has_value();
    if (body.contains("box")) {
      auto box = r.int_list(body["box"], child(path, "box"), true);
      if (box) task.box = *box;
      else ok = false;
    }
    const json* st = r.require(body, path, "state");
    auto state = st ? read_state(r, *st, child(path, "state")) : std::nullopt;
    const json* tm = r.require(body, path, "times");
    auto times = tm ? r.times(*tm, child(path, "times")) : std::nullopt;
    if (times && times->front() <= 0.0) {
      r.fail(child(path, "times"), "velocity times must be positive");
      ok = false;
    }
    if (body.contains("axis")) {
      auto axis = r.positive(body["axis"], child(path, "axis"));
      if (axis) task.axis = static_cast<int>(*axis);
      else ok = false;
    }
    if (!ok || !state || !times) return std::nullopt;
    task.resolution = *res;
    task.state = *state;
    task.times = *times;
    return task;
  }
  if (kind == "verify") {
    r.known_keys(body, path, {"suites", "models", "seeds", "tolerances"});
    VerifyTask task;
    bool ok = true;
    if (body.contains("suites")) {
      auto s = r.string_list(body["suites"], child(path, "suites"));
      if (s) task.suites = *s;
      else ok = false;
    }
    if (body.contains("models")) {
      auto m = r.string_list(body["models"], child(path, "models"));
      if (m) {
        for (std::size_t i = 0; i < m->size(); ++i) {
          try {
            models::builtin((*m)[i]);
          } catch (const Error& e) {
            r.fail(item(child(path, "models"), i), e.what());
            ok = false;
          }
        }
        task.models = *m;
      } else {
        ok = false;
      }
    }
    if (body.contains("seeds")) {
      const json& s = body["seeds"];
      if (!s.is_array()) {
        r.fail(child(path, "seeds"), "expected an array");
        ok = false;
      } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
          auto v = r.seed(s[i], item(child(path, "seeds"), i));
          if (v) task.seeds.push_back(*v);
          else ok = false;
        }
      }
    }
    if (body.contains("tolerances")) {
      const json& tol = body["tolerances"];
      const std::string tp = child(path, "tolerances");
      if (!r.object(tol, tp)) {
        ok = false;
      } else {
        for (const auto& [name, value] : tol.items()) {
          auto v = r.number(value, child(tp, name));
          if (v && *v > 0.0) task.tolerances[name] = *v;
          else {
            if (v) r.fail(child(tp, name), "must be positive");
            ok = false;
          }
        }
      }
    }
    if (!ok) return std::nullopt;
    return task;
  }
  r.fail(path, "unknown task");
  return std::nullopt;
}

void check_dims(Reader& r, const ExperimentConfig& c) {
  if (!c.op) return;
  const auto d = static_cast<std::size_t>(c.op->data.dim);
  auto dims = [&](std::size_t got, const std::string& path) {
    if (got != d) r.fail(path, "expected " + std::to_string(d) + " entries");
  };
  auto state = [&](const StateSpec& s, const std::string& path) {
    if (s.kind == StateSpec::Kind::kDelta) dims(s.site.size(), child(path, "delta"));
    for (std::size_t i = 0; i < s.entries.size(); ++i)
      dims(s.entries[i].first.size(), child(item(child(path, "amplitudes"), i), "site"));
  };
  if (const auto* b = std::get_if<BandsTask>(&c.task)) dims(b->resolution.size(), "task.bands.N");
  if (const auto* e = std::get_if<EvolveTask>(&c.task)) {
    dims(e->extent.size(), e->torus ? "task.evolve.geometry.torus" : "task.evolve.geometry.box");
    state(e->state, "task.evolve.state");
  }
  if (const auto* v = std::get_if<VelocityTask>(&c.task)) {
    dims(v->resolution.size(), "task.velocity.N");
    if (v->box) dims(v->box->size(), "task.velocity.box");
    state(v->state, "task.velocity.state");
    if (v->axis > c.op->data.dim) r.fail("task.velocity.axis", "axis must be in 1.." + std::to_string(d));
  }
}

json emit_state(const StateSpec& s) {
  switch (s.kind) {
    case StateSpec::Kind::kDelta:
      return {{"delta", s.site}};
    case StateSpec::Kind::kRandom:
      return {{"random", {{"radius", s.radius}}}};
    case StateSpec::Kind::kExplicit: {
      json list = json::array();
      for (const auto& [x, a] : s.entries) list.push_back({{"site", x}, {"re", a.real()}, {"im", a.imag()}});
      return {{"amplitudes", list}};
    }
  }
  return {};
}

}  // namespace

SchemaError::SchemaError(std::vector<FieldIssue> issues) : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string_view task_name(const Task& task) {
  static constexpr std::string_view names[] = {"bands", "evolve", "velocity", "verify"};
  return names[task.index()];
}

ParseResult parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::vector<FieldIssue>{{"", e.what()}});
  }
  Reader r;
  if (!r.object(root, "")) throw SchemaError(r.issues);
  r.known_keys(root, "", {"model", "d", "q", "hoppings", "potentials", "task", "output", "seed"});

  ParseResult result;
  auto op = read_operator(r, root);
  auto task = read_task(r, root);
  if (root.contains("seed")) {
    if (auto s = r.seed(root["seed"], "seed")) result.config.seed = *s;
  }
  if (root.contains("output")) {
    const json& out = root["output"];
    if (r.object(out, "output")) {
      r.known_keys(out, "output", {"dir"});
      if (out.contains("dir"))
        if (auto d = r.string(out["dir"], "output.dir")) result.config.out_dir = *d;
    }
  }
  if (task) {
    result.config.task = *task;
    if (!op && !std::holds_alternative<VerifyTask>(*task) && r.issues.empty())
      r.fail("model", "an operator (model or d/q) is required for task " + std::string(task_name(*task)));
  }
  result.config.op = op;
  if (task) check_dims(r, result.config);
  if (!r.issues.empty()) throw SchemaError(r.issues);
  result.warnings = std::move(r.warnings);
  return result;
}

std::string emit_config(const ExperimentConfig& config) {
  json root;
  if (config.op) {
    if (config.op->model) {
      root["model"] = *config.op->model;
    } else {
      const auto& d = config.op->data;
      root["d"] = d.dim;
      root["q"] = d.period;
      json hops = json::array();
      for (const auto& [key, a] : d.hoppings)
        hops.push_back({{"site", key.first}, {"axis", key.second}, {"re", a.real()}, {"im", a.imag()}});
      root["hoppings"] = hops;
      json pots = json::array();
      for (const auto& [x, b] : d.potential) pots.push_back({{"site", x}, {"value", b.real()}});
      root["potentials"] = pots;
    }
  }
  json task;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, BandsTask>) {
          task["bands"] = {{"N", t.resolution}};
        } else if constexpr (std::is_same_v<T, EvolveTask>) {
          task["evolve"] = {{"geometry", {{t.torus ? "torus" : "box", t.extent}}},
                            {"state", emit_state(t.state)},
                            {"times", t.times},
                            {"h", t.h}};
        } else if constexpr (std::is_same_v<T, VelocityTask>) {
          json body = {{"N", t.resolution}};
          if (t.box) body["box"] = *t.box;
          body["state"] = emit_state(t.state);
          body["times"] = t.times;
          body["axis"] = t.axis;
          task["velocity"] = body;
        } else {
          json body = json::object();
          if (!t.suites.empty()) body["suites"] = t.suites;
          if (!t.models.empty()) body["models"] = t.models;
          if (!t.seeds.empty()) body["seeds"] = t.seeds;
          if (!t.tolerances.empty()) body["tolerances"] = t.tolerances;
          task["verify"] = body;
        }
      },
      config.task);
  root["task"] = task;
  root["output"] = {{"dir", config.out_dir}};
  root["seed"] = config.seed;
  return root.dump(2) + "\n";
}

}  // namespace pjacobi::harness
