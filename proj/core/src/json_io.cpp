#include "grouplim/json_io.hpp"

#include <fstream>

#include "grouplim/error.hpp"

namespace grouplim::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Int as_int(const json& j) {
  if (!j.is_number_integer()) throw ValidationError("expected an integer, got " + j.dump());
  return j.get<Int>();
}

double as_double(const json& j) {
  if (!j.is_number()) throw ValidationError("expected a number, got " + j.dump());
  return j.get<double>();
}

Complex as_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {as_double(j[0]), as_double(j[1])};
  if (j.is_object()) return {as_double(field(j, "re")), j.contains("im") ? as_double(j.at("im")) : 0.0};
  throw ValidationError("expected a number or [re, im], got " + j.dump());
}

}  // namespace

GroupSpec group_from_json(const json& j) {
  const json& m = j.is_array() ? j : field(j, "moduli");
  if (!m.is_array()) throw ValidationError("moduli must be an array");
  std::vector<Int> moduli;
  for (const auto& x : m) moduli.push_back(as_int(x));
  return make_group(std::move(moduli));
}

json to_json(const GroupSpec& G) {
  return json{{"moduli", std::vector<Int>(G.moduli().begin(), G.moduli().end())}};
}

Elem elem_from_json(const json& j, const GroupSpec& G) {
  std::vector<Int> c;
  if (j.is_array()) {
    for (const auto& x : j) c.push_back(as_int(x));
  } else {
    c.push_back(as_int(j));
  }
  if (c.size() != G.rank()) throw ValidationError("element " + j.dump() + " has the wrong length");
  return G.reduce(std::move(c));
}

json to_json(const Elem& g) { return json(g.coords); }

DenseFn dense_from_json(const json& j) {
  GroupSpec G = group_from_json(field(j, "group"));
  const json& vals = field(j, "values");
  if (!vals.is_array()) throw ValidationError("values must be an array");
  std::vector<Complex> v;
  v.reserve(vals.size());
  for (const auto& x : vals) v.push_back(as_complex(x));
  return DenseFn(std::move(G), std::move(v));
}

json to_json(const DenseFn& f) {
  json vals = json::array();
  for (Complex z : f.values()) vals.push_back(json::array({z.real(), z.imag()}));
  return json{{"group", to_json(f.group())}, {"values", std::move(vals)}};
}

SparseFn sparse_from_json(const json& j) {
  GroupSpec G = group_from_json(field(j, "group"));
  SparseFn f(G);
  const json& entries = field(j, "entries");
  if (!entries.is_array()) throw ValidationError("entries must be an array");
  for (const auto& e : entries) {
    const Elem g = elem_from_json(field(e, "elem"), G);
    if (f.entries().count(g)) throw ValidationError("repeated element " + to_string(g));
    f.set(g, {as_double(field(e, "re")), e.contains("im") ? as_double(e.at("im")) : 0.0});
  }
  if (j.contains("l2") && !j.at("l2").is_null()) f.set_declared_l2(as_double(j.at("l2")));
  return f;
}

json to_json(const SparseFn& f) {
  json entries = json::array();
  for (const auto& [g, z] : f.entries()) entries.push_back({{"elem", to_json(g)}, {"re", z.real()}, {"im", z.imag()}});
  json out{{"group", to_json(f.group())}, {"entries", std::move(entries)}};
  if (f.declared_l2()) out["l2"] = *f.declared_l2();
  return out;
}

bool is_sparse_json(const json& j) { return j.is_object() && j.contains("entries"); }

ConfigSystem config_from_json(const json& j) {
  if (j.is_string()) return builtin_config(j.get<std::string>());
  const json& forms = field(j, "forms");
  if (!forms.is_array()) throw ValidationError("forms must be an array");
  std::vector<std::vector<Int>> rows;
  for (const auto& r : forms) {
    if (!r.is_array()) throw ValidationError("each form must be an array of coefficients");
    std::vector<Int> c;
    for (const auto& x : r) c.push_back(as_int(x));
    rows.push_back(std::move(c));
  }
  return make_config(rows, j.value("name", std::string{}));
}

Graph graph_from_json(const json& j) {
  const Int n = as_int(field(j, "n"));
  if (n < 0) throw ValidationError("vertex count must be nonnegative");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw ValidationError("edges are pairs of vertices");
    const Int u = as_int(e[0]), v = as_int(e[1]);
    if (u < 0 || v < 0) throw ValidationError("vertex indices must be nonnegative");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

json to_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const PartialIso& phi) {
  json pairs = json::array();
  for (const auto& [g, h] : phi.pairs) pairs.push_back(json::array({to_json(g), to_json(h)}));
  return json{{"weight", phi.weight}, {"pairs", std::move(pairs)}};
}

json to_json(const DistBracket& b) {
  json out{{"lo", b.lo},
           {"hi", b.hi},
           {"exact", b.exact},
           {"weight_capped", b.weight_capped},
           {"budget_exceeded", b.budget_exceeded},
           {"probes", b.probes},
           {"nodes", b.nodes}};
  out["witness"] = b.witness ? to_json(*b.witness) : json(nullptr);
  return out;
}

json to_json(const OptResult& r) {
  json trace = json::array();
  for (auto [it, v] : r.trace) trace.push_back(json::array({it, v}));
  std::vector<double> f = r.f_star.real_values();
  return json{{"value", r.value},
              {"grad_norm", r.grad_norm},
              {"restarts_used", r.restarts_used},
              {"best_run", r.best_run},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"group", to_json(r.f_star.group())},
              {"f_star", std::move(f)},
              {"trace", std::move(trace)}};
}

json to_json(const BridgeReport& r) {
  return json{{"hom", to_json(r.hom)},
              {"config", to_json(r.config)},
              {"difference", r.difference},
              {"ok", r.ok},
              {"detail", r.detail}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace grouplim::io
