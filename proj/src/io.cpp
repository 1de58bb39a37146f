#include "exdecomp/io.hpp"

#include <fstream>
#include <sstream>

#include "exdecomp/errors.hpp"

namespace exdecomp {
namespace {

Json edges_json(const std::vector<Edge>& es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back({e.u, e.v});
  return a;
}

std::vector<Edge> edges_from(const Json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InputError("edge must be [u, v]");
    out.push_back(make_edge(e[0].get<int>(), e[1].get<int>()));
  }
  return out;
}

Json rational_json(const Rational& r) { return r.str(); }

Rational rational_from(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<int64_t>());
  if (j.is_number()) return Rational::from_double(j.get<double>());
  throw InputError("expected a number or a fraction string");
}

Json grid_json(const CellGrid& g) {
  Json cells = Json::array();
  for (const auto& c : g.cells) cells.push_back(edges_json(c.edges()));
  return {{"K", g.K}, {"cells", cells}};
}

CellGrid grid_from(const Json& j, int n) {
  CellGrid g;
  g.K = j.at("K").get<int>();
  for (const auto& c : j.at("cells")) g.cells.emplace_back(n, edges_from(c));
  return g;
}

Json locale_json(const std::optional<Locale>& l) {
  if (!l) return nullptr;
  return {l->i, l->j};
}

std::optional<Locale> locale_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return Locale{j.at(0).get<int>(), j.at(1).get<int>()};
}

// Converts json library errors into InputError with context.
template <typename F>
auto parse_guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("malformed " + what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Report& r) {
  Json clauses = Json::array();
  for (const auto& c : r.clauses()) {
    Json x = {{"clause", c.clause}, {"passed", c.passed}};
    if (!c.detail.empty()) x["detail"] = c.detail;
    if (!c.witness_vertices.empty()) x["witness_vertices"] = c.witness_vertices;
    if (!c.witness_edges.empty()) x["witness_edges"] = edges_json(c.witness_edges);
    if (c.slack) x["slack"] = *c.slack;
    if (c.advisory) x["advisory"] = true;
    clauses.push_back(std::move(x));
  }
  return {{"subject", r.subject()}, {"ok", r.ok()}, {"clauses", clauses}};
}

Report report_from_json(const Json& j) {
  return parse_guard("report", [&] {
    Report r(j.value("subject", std::string{}));
    for (const auto& c : j.at("clauses")) {
      bool adv = c.value("advisory", false);
      std::string name = c.at("clause").get<std::string>();
      bool passed = c.at("passed").get<bool>();
      std::string detail = c.value("detail", std::string{});
      ClauseResult& x = adv ? r.add_advisory(name, passed, detail)
                            : r.add(name, passed, detail);
      if (c.contains("witness_vertices")) {
        x.witness_vertices = c["witness_vertices"].get<std::vector<int>>();
      }
      if (c.contains("witness_edges")) x.witness_edges = edges_from(c["witness_edges"]);
      if (c.contains("slack")) x.slack = c["slack"].get<double>();
    }
    return r;
  });
}

Json to_json(const Params& p) {
  return {{"D", p.D},
          {"phi_n", p.phi_n},
          {"lambda_n", p.lambda_n},
          {"K", p.K},
          {"eps0", rational_json(p.eps0)},
          {"eps", rational_json(p.eps)},
          {"eps_prime", rational_json(p.eps_prime)},
          {"seed", p.seed}};
}

void apply_params(Params& p, const Json& j) {
  parse_guard("params", [&] {
    if (!j.is_object()) throw InputError("params must be an object");
    if (j.contains("D")) p.D = j["D"].get<int64_t>();
    if (j.contains("phi_n")) p.phi_n = j["phi_n"].get<int64_t>();
    if (j.contains("lambda_n")) p.lambda_n = j["lambda_n"].get<int64_t>();
    if (j.contains("K")) p.K = j["K"].get<int>();
    if (j.contains("eps0")) p.eps0 = rational_from(j["eps0"]);
    if (j.contains("eps")) p.eps = rational_from(j["eps"]);
    if (j.contains("eps_prime")) p.eps_prime = rational_from(j["eps_prime"]);
    if (j.contains("seed")) p.seed = j["seed"].get<uint64_t>();
    return 0;
  });
}

Params params_from_json(const Json& j) {
  Params p;
  for (const char* k : {"D", "phi_n", "lambda_n", "K"}) {
    if (!j.contains(k)) throw InputError(std::string("params missing '") + k + "'");
  }
  apply_params(p, j);
  return p;
}

Json to_json(const Instance& inst) {
  const Partition& p = inst.P;
  Json a = Json::array(), b = Json::array();
  for (const auto& s : p.A_clusters()) a.push_back(s);
  for (const auto& s : p.B_clusters()) b.push_back(s);
  return {{"n", inst.G.n()},
          {"edges", edges_json(inst.G.edges())},
          {"partition",
           {{"K", p.K()},
            {"m", p.m()},
            {"eps0", rational_json(p.eps0())},
            {"A0", p.A0()},
            {"B0", p.B0()},
            {"A", a},
            {"B", b}}},
          {"G0", edges_json(inst.G0.edges())},
          {"params", to_json(inst.params)},
          {"meta", inst.meta}};
}

Instance instance_from_json(const Json& j) {
  return parse_guard("instance", [&] {
    Instance inst;
    const int n = j.at("n").get<int>();
    if (n < 0) throw InputError("n must be non-negative");
    inst.G = Graph(n, edges_from(j.at("edges")));
    const Json& pj = j.at("partition");
    std::vector<VertexSet> a, b;
    for (const auto& s : pj.at("A")) a.push_back(s.get<VertexSet>());
    for (const auto& s : pj.at("B")) b.push_back(s.get<VertexSet>());
    inst.P = Partition(n, pj.at("K").get<int>(), pj.at("m").get<int>(),
                       rational_from(pj.at("eps0")),
                       pj.at("A0").get<VertexSet>(), pj.at("B0").get<VertexSet>(),
                       std::move(a), std::move(b));
    inst.G0 = Graph(n, edges_from(j.value("G0", Json::array())));
    inst.params = params_from_json(j.at("params"));
    inst.meta = j.value("meta", std::string{});
    return inst;
  });
}

Json to_json(const Certificate& c) {
  Json out;
  out["schema"] = c.schema;
  out["instance_hash"] = c.instance_hash;
  out["regime"] = c.regime;
  out["status"] = c.status;
  if (c.failure) {
    out["failure"] = {{"stage", c.failure->stage},
                      {"clause", c.failure->clause},
                      {"message", c.failure->message},
                      {"witness", c.failure->witness}};
  } else {
    out["failure"] = nullptr;
  }
  out["params"] = to_json(c.params);
  Json sys = Json::array();
  for (const auto& r : c.systems) {
    sys.push_back({{"kind", to_string(r.system.kind)},
                   {"locale", locale_json(r.system.locale)},
                   {"edges", edges_json(r.system.ps.graph.edges())},
                   {"isolated", r.system.ps.isolated},
                   {"stage", r.stage},
                   {"role", r.role},
                   {"origin", {r.origin.i, r.origin.j}}});
  }
  out["systems"] = std::move(sys);
  if (c.slices) {
    out["slices"] = {{"H", grid_json(c.slices->H)},
                     {"Hpp", grid_json(c.slices->Hpp)},
                     {"moved_in", c.slices->moved_in},
                     {"moved_out", c.slices->moved_out},
                     {"report", to_json(c.slices->report)}};
  } else {
    out["slices"] = nullptr;
  }
  out["branch"] = c.branch;
  out["W"] = c.W;
  out["Wprime"] = c.Wprime;
  out["W0"] = c.W0;
  Json counts = Json::array();
  for (const auto& k : c.counts) {
    counts.push_back({{"cell", {k.i, k.j}},
                      {"localized", k.localized},
                      {"target", k.target},
                      {"two_edge", k.two_edge},
                      {"special", k.special}});
  }
  out["counts"] = std::move(counts);
  Json rel = Json::array();
  for (const auto& k : c.relabeling) {
    rel.push_back({{"cell", {k.i, k.j}},
                   {"nonlocal", k.nonlocal},
                   {"filled_from_local", k.filled_from_local},
                   {"local_two_edge", k.local_two_edge},
                   {"local_special", k.local_special}});
  }
  out["relabeling"] = std::move(rel);
  out["preconditions"] = to_json(c.preconditions);
  out["verification"] = to_json(c.verification);
  return out;
}

Certificate certificate_from_json(const Json& j, int n) {
  return parse_guard("certificate", [&] {
    Certificate c;
    c.schema = j.at("schema").get<int>();
    if (c.schema != 1) throw InputError("unsupported certificate schema");
    c.instance_hash = j.at("instance_hash").get<std::string>();
    c.regime = j.at("regime").get<std::string>();
    c.status = j.at("status").get<std::string>();
    if (j.contains("failure") && !j["failure"].is_null()) {
      const Json& f = j["failure"];
      c.failure = Failure{f.at("stage").get<std::string>(),
                          f.at("clause").get<std::string>(),
                          f.value("message", std::string{}),
                          f.value("witness", std::vector<int>{})};
    }
    c.params = params_from_json(j.at("params"));
    for (const auto& s : j.at("systems")) {
      SystemRecord r;
      std::string kind = s.at("kind").get<std::string>();
      if (kind != "HES" && kind != "MES") {
        throw InputError("system kind must be HES or MES");
      }
      r.system.kind = kind == "HES" ? SystemKind::kHES : SystemKind::kMES;
      r.system.locale = locale_from(s.at("locale"));
      r.system.ps = PathSystem(Graph(n, edges_from(s.at("edges"))),
                               s.value("isolated", VertexSet{}));
      r.stage = s.value("stage", std::string{});
      r.role = s.value("role", std::string{});
      if (s.contains("origin")) {
        r.origin = Locale{s["origin"].at(0).get<int>(), s["origin"].at(1).get<int>()};
      }
      c.systems.push_back(std::move(r));
    }
    if (j.contains("slices") && !j["slices"].is_null()) {
      const Json& sj = j["slices"];
      SliceDecomposition sd;
      sd.H = grid_from(sj.at("H"), n);
      sd.Hpp = grid_from(sj.at("Hpp"), n);
      sd.moved_in = sj.value("moved_in", std::vector<int64_t>{});
      sd.moved_out = sj.value("moved_out", std::vector<int64_t>{});
      if (sj.contains("report")) sd.report = report_from_json(sj["report"]);
      c.slices = std::move(sd);
    }
    c.branch = j.value("branch", std::string{});
    c.W = j.value("W", std::vector<Vertex>{});
    c.Wprime = j.value("Wprime", std::vector<Vertex>{});
    c.W0 = j.value("W0", std::vector<Vertex>{});
    for (const auto& k : j.value("counts", Json::array())) {
      CellCount x;
      x.i = k.at("cell").at(0).get<int>();
      x.j = k.at("cell").at(1).get<int>();
      x.localized = k.value("localized", int64_t{0});
      x.target = k.value("target", int64_t{0});
      x.two_edge = k.value("two_edge", int64_t{0});
      x.special = k.value("special", int64_t{0});
      c.counts.push_back(x);
    }
    for (const auto& k : j.value("relabeling", Json::array())) {
      CellRelabeling x;
      x.i = k.at("cell").at(0).get<int>();
      x.j = k.at("cell").at(1).get<int>();
      x.nonlocal = k.value("nonlocal", int64_t{0});
      x.filled_from_local = k.value("filled_from_local", int64_t{0});
      x.local_two_edge = k.value("local_two_edge", int64_t{0});
      x.local_special = k.value("local_special", int64_t{0});
      c.relabeling.push_back(x);
    }
    if (j.contains("preconditions")) c.preconditions = report_from_json(j["preconditions"]);
    if (j.contains("verification")) c.verification = report_from_json(j["verification"]);
    return c;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump() << '\n';
}

}  // namespace exdecomp
