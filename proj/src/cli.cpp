#include "mucert/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "mucert/certify.hpp"
#include "mucert/sim.hpp"

namespace mucert::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void input_error(const std::string& field, const std::string& msg) {
  throw InvalidInputError("config field '" + field + "': " + msg);
}

double parse_p(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
    input_error("norm.p", "unrecognized string '" + s + "' (use a number or \"inf\")");
  }
  if (!v.is_number()) input_error("norm.p", "must be a number or \"inf\"");
  return v.get<double>();
}

std::string iso_timestamp() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json default_config() {
  return json{
      {"seed", 12345},
      {"out", ""},
      {"model", {{"name", "enzyme"}, {"params", json::object()}}},
      {"norm", {{"p", 1.0}, {"q", json::array()}}},
      {"grid", {{"points", 33}, {"cap", 10.0}}},
      {"weights", {{"count", 41}, {"min", 1e-3}, {"max", 1e3}}},
      {"impossibility", {{"q", 1.0}, {"b_cap", 1e6}}},
      {"space", {{"length", 1.0}, {"cells", 64}}},
      {"diffusion", json::array({0.1, 0.1})},
      {"integration", {{"t_end", 10.0}, {"dt", 1e-3}, {"tolerance", 0.01}}},
      {"csv_stride", 1},
  };
}

DenseMatrix matrix_from_json(const json& m, const std::string& field) {
  if (!m.is_array() || m.empty() || !m[0].is_array()) {
    input_error(field, "must be a non-empty array of rows");
  }
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<double> entries;
  entries.reserve(rows * cols);
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != cols) input_error(field, "ragged rows");
    for (const auto& v : row) {
      if (!v.is_number()) input_error(field, "non-numeric entry");
      entries.push_back(v.get<double>());
    }
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

struct ModelBundle {
  VectorField field;
  std::map<std::string, double> params;
};

ModelBundle model_from_config(const json& cfg) {
  const json& m = cfg.at("model");
  if (!m.contains("name") || !m.at("name").is_string()) {
    input_error("model.name", "required string");
  }
  const std::string name = m.at("name").get<std::string>();
  std::map<std::string, double> params;
  if (m.contains("params")) {
    for (const auto& [k, v] : m.at("params").items()) {
      if (!v.is_number()) input_error("model.params." + k, "must be numeric");
      params[k] = v.get<double>();
    }
  }
  try {
    if (m.contains("matrix")) {
      const DenseMatrix a = matrix_from_json(m.at("matrix"), "model.matrix");
      return {make_model(name, params, &a), params};
    }
    return {make_model(name, params), params};
  } catch (const Error& e) {
    input_error("model", e.what());
  }
}

WeightedNorm norm_from_config(const json& cfg, std::size_t dim) {
  const json& n = cfg.at("norm");
  const double p = parse_p(n.at("p"));
  std::vector<double> q;
  if (n.contains("q") && !n.at("q").empty()) {
    for (const auto& v : n.at("q")) {
      if (!v.is_number()) input_error("norm.q", "non-numeric weight");
      q.push_back(v.get<double>());
    }
    if (q.size() != dim) {
      input_error("norm.q", "expected " + std::to_string(dim) + " weights, got " +
                                std::to_string(q.size()));
    }
  } else {
    q.assign(dim, 1.0);
  }
  try {
    return WeightedNorm(p, DenseVector(std::move(q)));
  } catch (const Error& e) {
    input_error("norm", e.what());
  }
}

GridSpec grid_from_config(const json& cfg) {
  const json& g = cfg.at("grid");
  GridSpec spec;
  spec.points_per_axis = g.at("points").get<int>();
  spec.unbounded_cap = g.at("cap").get<double>();
  if (spec.points_per_axis < 1) input_error("grid.points", "must be >= 1");
  if (!(spec.unbounded_cap > 0.0)) input_error("grid.cap", "must be positive");
  return spec;
}

GraphLaplacian graph_from_config(const json& cfg) {
  if (!cfg.contains("graph")) input_error("graph", "required for this command");
  const json& g = cfg.at("graph");
  const std::size_t nodes = g.contains("nodes") ? g.at("nodes").get<std::size_t>() : 0;
  if (nodes < 2) input_error("graph.nodes", "need at least 2 nodes");
  try {
    if (g.contains("topology")) {
      const std::string topo = g.at("topology").get<std::string>();
      const double w = g.contains("weight") ? g.at("weight").get<double>() : 1.0;
      if (topo == "path") return path_laplacian(nodes, w);
      if (topo == "complete") return complete_laplacian(nodes, w);
      input_error("graph.topology", "unknown topology '" + topo + "'");
    }
    if (!g.contains("edges") || !g.at("edges").is_array()) {
      input_error("graph.edges", "required edge list [[i, j, weight], ...]");
    }
    std::vector<Edge> edges;
    for (const auto& e : g.at("edges")) {
      if (!e.is_array() || e.size() < 2) input_error("graph.edges", "malformed edge");
      Edge edge;
      edge.i = e[0].get<std::size_t>();
      edge.j = e[1].get<std::size_t>();
      edge.weight = e.size() > 2 ? e[2].get<double>() : 1.0;
      edges.push_back(edge);
    }
    return laplacian_from_edges(nodes, edges);
  } catch (const Error& e) {
    input_error("graph", e.what());
  }
}

std::string graph_name(const json& cfg) {
  const json& g = cfg.at("graph");
  std::string name = g.contains("topology") ? g.at("topology").get<std::string>()
                                            : std::string("edges");
  return name + "-" + std::to_string(g.at("nodes").get<std::size_t>());
}

DiffusionMatrix diffusion_from_config(const json& cfg, std::size_t dim) {
  if (!cfg.contains("diffusion")) input_error("diffusion", "required for this command");
  std::vector<double> d;
  for (const auto& v : cfg.at("diffusion")) d.push_back(v.get<double>());
  if (d.size() != dim) {
    input_error("diffusion", "expected " + std::to_string(dim) + " rates");
  }
  try {
    return DiffusionMatrix(DenseVector(std::move(d)));
  } catch (const Error& e) {
    input_error("diffusion", e.what());
  }
}

/// Initial states come as an explicit stacked array or as {"seed": k} for a
/// reproducible draw strictly inside the domain box (cap applied to
/// unbounded edges, 5% margin).
DenseVector state_from_config(const json& cfg, const std::string& key,
                              const BoxDomain& box, std::size_t cells, double cap,
                              std::uint64_t fallback_seed) {
  const std::size_t n = box.dim();
  std::uint64_t seed = fallback_seed;
  if (cfg.contains(key)) {
    const json& u = cfg.at(key);
    if (u.is_array()) {
      std::vector<double> vals;
      for (const auto& v : u) vals.push_back(v.get<double>());
      if (vals.size() != n * cells) {
        input_error(key, "expected " + std::to_string(n * cells) + " entries");
      }
      return DenseVector(std::move(vals));
    }
    if (u.is_object() && u.contains("seed")) {
      seed = u.at("seed").get<std::uint64_t>();
    } else {
      input_error(key, "must be an array or {\"seed\": k}");
    }
  }
  std::mt19937_64 rng(seed);
  DenseVector out(n * cells);
  for (std::size_t k = 0; k < cells; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double lo = box.lower[i], hi = box.upper[i];
      if (std::isinf(lo)) lo = -cap;
      if (std::isinf(hi)) hi = cap;
      const double m = 0.05 * (hi - lo);
      out[k * n + i] = std::uniform_real_distribution<double>(lo + m, hi - m)(rng);
    }
  }
  return out;
}

struct Integration {
  double t_end;
  double dt;
  double tolerance;
};

Integration integration_from_config(const json& cfg) {
  const json& i = cfg.at("integration");
  Integration out{i.at("t_end").get<double>(), i.at("dt").get<double>(),
                  i.at("tolerance").get<double>()};
  if (!(out.t_end > 0.0)) input_error("integration.t_end", "must be positive");
  if (!(out.dt > 0.0)) input_error("integration.dt", "must be positive");
  if (!(out.tolerance >= 0.0)) input_error("integration.tolerance", "must be >= 0");
  return out;
}

fs::path output_dir(const json& cfg) {
  std::string out = cfg.at("out").get<std::string>();
  if (out.empty()) {
    const char* env = std::getenv("MUCERT_OUT");
    out = env != nullptr ? env : ".";
  }
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
}

void write_series_csv(const fs::path& path,
                      const std::vector<std::pair<double, double>>& series,
                      double value0, double rate, double tolerance, int stride) {
  std::string out = "t,distance_or_W,envelope,margin\n";
  char line[128];
  int row = 0;
  for (const auto& [t, v] : series) {
    if (stride > 1 && row++ % stride != 0) continue;
    const double env = value0 * std::exp(rate * t);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", t, v, env,
                  env * (1.0 + tolerance) - v);
    out += line;
  }
  write_text(path, out);
}

json norm_to_json(const WeightedNorm& w) {
  json q = json::array();
  for (std::size_t i = 0; i < w.q.size(); ++i) q.push_back(w.q[i]);
  return json{{"p", std::isinf(w.p) ? json("inf") : json(w.p)}, {"q", q}};
}

json vector_to_json(const DenseVector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json certificate_to_json(const ContractionCertificate& cert) {
  return json{{"model", cert.model},
              {"params", cert.model_params},
              {"norm", norm_to_json(cert.norm)},
              {"rate", cert.rate_c},
              {"grid",
               {{"points", cert.evidence.grid_spec.points_per_axis},
                {"cap", cert.evidence.grid_spec.unbounded_cap},
                {"description", cert.evidence.grid_spec.describe()}}},
              {"argmax", vector_to_json(cert.evidence.argmax_point)},
              {"argmax_time", cert.evidence.argmax_time},
              {"diffusion_note", cert.diffusion_note},
              {"caveat",
               "evidence-grade: the rate is a finite-grid supremum of the weighted "
               "measure; interior maxima between grid points are not excluded"},
              {"timestamp", iso_timestamp()}};
}

struct CommandOutcome {
  json result;
  std::string status = "ok";
  int exit_code = kExitOk;
  std::string summary;
};

CommandOutcome cmd_measure(const json& cfg, std::uint64_t seed) {
  if (!cfg.contains("matrix")) input_error("matrix", "required for 'measure'");
  const DenseMatrix a = matrix_from_json(cfg.at("matrix"), "matrix");
  if (!a.is_square()) input_error("matrix", "must be square");
  const WeightedNorm w = norm_from_config(cfg, a.rows());
  const MeasureResult mu = mu_weighted(a, w, seed);

  CommandOutcome out;
  out.result = {{"value", mu.value},
                {"exact", mu.exact},
                {"p", std::isinf(mu.p) ? json("inf") : json(mu.p)}};
  if (!mu.h_trace.empty()) {
    out.result["h_trace_first"] = mu.h_trace.front().second;
    out.result["h_trace_last"] = mu.h_trace.back().second;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", mu.value);
  out.summary = std::string("mu = ") + buf + (mu.exact ? " (closed form)" : " (estimate)");
  return out;
}

CommandOutcome cmd_certify(const json& cfg, std::uint64_t seed) {
  const ModelBundle model = model_from_config(cfg);
  const WeightedNorm w = norm_from_config(cfg, model.field.dim());
  const GridSpec grid = grid_from_config(cfg);

  CommandOutcome out;
  try {
    const ContractionCertificate cert =
        issue_certificate(model.field, w, grid, seed, model.params);
    out.result = {{"certified", true},
                  {"rate", cert.rate_c},
                  {"norm", norm_to_json(cert.norm)},
                  {"argmax", vector_to_json(cert.evidence.argmax_point)},
                  {"grid", cert.evidence.grid_spec.describe()},
                  {"certificate_file", "certificate.json"}};
    out.result["certificate"] = certificate_to_json(cert);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", cert.rate_c);
    out.summary = "contractive: rate c = " + std::string(buf) +
                  " (evidence-grade grid supremum; transfers to any diffusion)";
  } catch (const CertificationRefused& e) {
    out.status = "refused";
    out.exit_code = kExitViolation;
    out.result = {{"certified", false},
                  {"rate", e.rate},
                  {"argmax", e.argmax_point},
                  {"grid", grid.describe()}};
    out.summary = std::string("refused: ") + e.what();
  }
  return out;
}

CommandOutcome cmd_search_weights(const json& cfg, std::uint64_t seed) {
  const ModelBundle model = model_from_config(cfg);
  const double p = parse_p(cfg.at("norm").at("p"));
  const GridSpec grid = grid_from_config(cfg);
  WeightCandidates cands;
  cands.count = cfg.at("weights").at("count").get<int>();
  cands.min = cfg.at("weights").at("min").get<double>();
  cands.max = cfg.at("weights").at("max").get<double>();

  const WeightSearchResult res =
      search_weights(model.field, p, grid, cands, seed, model.params);

  CommandOutcome out;
  out.result = {{"rate", res.rate},
                {"norm", norm_to_json(res.best_norm)},
                {"certified", res.certificate.has_value()},
                {"argmax", vector_to_json(res.evidence.argmax_point)},
                {"grid", grid.describe()}};
  if (res.certificate) {
    out.result["certificate"] = certificate_to_json(*res.certificate);
    out.result["certificate_file"] = "certificate.json";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", res.rate);
    out.summary = "best weights certify rate c = " + std::string(buf);
  } else {
    out.status = "refused";
    out.exit_code = kExitViolation;
    out.summary = "no candidate weight certifies a negative rate";
  }
  return out;
}

CommandOutcome cmd_impossibility(const json& cfg, std::uint64_t seed) {
  const ModelBundle model = model_from_config(cfg);
  if (model.field.name() != "enzyme") {
    input_error("model.name", "'impossibility' applies to the enzyme model");
  }
  EnzymeParams params;
  const auto take = [&](const char* key, double& slot) {
    if (model.params.count(key)) slot = model.params.at(key);
  };
  take("z", params.z);
  take("delta", params.delta);
  take("k1", params.k1);
  take("k2", params.k2);
  take("s_y", params.s_y);

  const double p = parse_p(cfg.at("norm").at("p"));
  const double q = cfg.at("impossibility").at("q").get<double>();
  const double b_cap = cfg.at("impossibility").at("b_cap").get<double>();

  const ImpossibilityWitness wit = impossibility_search(params, p, q, b_cap, seed);

  CommandOutcome out;
  out.result = {{"p", std::isinf(p) ? json("inf") : json(p)},
                {"q", wit.q},
                {"witness_point", vector_to_json(wit.witness_point)},
                {"direction_lambda", wit.direction_lambda},
                {"lower_bound", wit.lower_bound},
                {"mu_at_witness", wit.mu_at_witness},
                {"b", wit.b}};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "witness at x = %.6g: mu >= %.3e",
                wit.witness_point[0], wit.lower_bound);
  out.summary = buf;
  return out;
}

struct SimulationSetup {
  NetworkSystem system;
  WeightedNorm norm;
  DenseVector u0;
  DenseVector v0;
  double rate;
  std::string rate_source;
};

SimulationSetup simulation_setup(const json& cfg, std::uint64_t seed, bool pde) {
  ModelBundle model = model_from_config(cfg);
  const WeightedNorm w = norm_from_config(cfg, model.field.dim());
  const GridSpec grid = grid_from_config(cfg);
  const DiffusionMatrix d = diffusion_from_config(cfg, model.field.dim());

  NetworkSystem sys = [&]() {
    if (pde) {
      const json& s = cfg.at("space");
      try {
        return discretize_pde(model.field, d,
                              SpatialGrid(s.at("length").get<double>(),
                                          s.at("cells").get<std::size_t>()));
      } catch (const Error& e) {
        input_error("space", e.what());
      }
    }
    return assemble_network(model.field, graph_from_config(cfg), d);
  }();

  double rate;
  std::string source;
  if (cfg.contains("rate_c")) {
    rate = cfg.at("rate_c").get<double>();
    source = "config";
  } else {
    rate = lipschitz_constant(model.field, w, grid, seed).value;
    source = "certified";
  }

  const std::size_t cells = sys.n_compartments();
  DenseVector u0 = state_from_config(cfg, "u0", model.field.domain(), cells,
                                     grid.unbounded_cap, seed + 1);
  DenseVector v0 = state_from_config(cfg, "v0", model.field.domain(), cells,
                                     grid.unbounded_cap, seed + 2);
  return {std::move(sys), w, std::move(u0), std::move(v0), rate, source};
}

CommandOutcome cmd_simulate(const json& cfg, std::uint64_t seed, bool pde,
                            const fs::path& out_dir) {
  const SimulationSetup setup = simulation_setup(cfg, seed, pde);
  const Integration integ = integration_from_config(cfg);

  const ContractionReport rep =
      verify_contraction(setup.system, setup.u0, setup.v0, setup.norm, setup.rate,
                         integ.t_end, integ.dt, integ.tolerance);

  const double d0 = rep.distances.empty() ? 0.0 : rep.distances.front().second;
  write_series_csv(out_dir / "series.csv", rep.distances, d0, rep.rate_c, rep.tolerance,
                   cfg.at("csv_stride").get<int>());

  CommandOutcome out;
  out.result = {{"rate", rep.rate_c},
                {"rate_source", setup.rate_source},
                {"bound_ok", rep.bound_ok},
                {"max_violation", rep.max_violation},
                {"worst_time", rep.worst_time},
                {"max_dini_excess", rep.max_dini_excess},
                {"distance0", d0},
                {"steps", rep.steps_checked},
                {"norm", norm_to_json(rep.norm)},
                {"csv", "series.csv"}};
  if (rep.bound_ok) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "envelope holds (worst ratio excess %.3e)",
                  rep.max_violation);
    out.summary = buf;
  } else {
    out.status = "bound_violation";
    out.exit_code = kExitViolation;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "envelope violated at t = %.6g (ratio excess %.3e)",
                  rep.worst_time, rep.max_violation);
    out.summary = buf;
  }
  return out;
}

CommandOutcome cmd_sync(const json& cfg, std::uint64_t seed, const fs::path& out_dir) {
  const ModelBundle model = model_from_config(cfg);
  const WeightedNorm w = norm_from_config(cfg, model.field.dim());
  const GridSpec grid = grid_from_config(cfg);
  const GraphLaplacian topo = graph_from_config(cfg);
  const DiffusionMatrix d = diffusion_from_config(cfg, model.field.dim());
  const Integration integ = integration_from_config(cfg);

  const DenseVector u0 = state_from_config(cfg, "u0", model.field.domain(),
                                           topo.n_nodes(), grid.unbounded_cap, seed + 1);

  const SyncReport rep = verify_sync(model.field, topo, d, w, u0, integ.t_end, integ.dt,
                                     integ.tolerance, grid, seed, graph_name(cfg));

  const double w0 = rep.w_series.empty() ? 0.0 : rep.w_series.front().second;
  write_series_csv(out_dir / "series.csv", rep.w_series, w0, rep.rate_c, rep.tolerance,
                   cfg.at("csv_stride").get<int>());

  CommandOutcome out;
  out.result = {{"topology", rep.topology},
                {"lambda", rep.lambda},
                {"rate", rep.rate_c},
                {"bound_ok", rep.bound_ok},
                {"max_violation", rep.max_violation},
                {"worst_time", rep.worst_time},
                {"guaranteed", rep.guaranteed},
                {"W0", w0},
                {"steps", rep.steps_checked},
                {"norm", norm_to_json(rep.norm)},
                {"csv", "series.csv"}};
  if (rep.bound_ok) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "synchronization envelope holds (lambda = %.6g)",
                  rep.lambda);
    out.summary = buf;
  } else {
    out.status = "bound_violation";
    out.exit_code = kExitViolation;
    out.summary = "synchronization envelope violated";
  }
  return out;
}

}  // namespace

json effective_config(const json& user) {
  json cfg = default_config();
  cfg.merge_patch(user);
  if (!cfg.contains("command") || !cfg.at("command").is_string()) {
    input_error("command", "required string");
  }
  return cfg;
}

int run(const json& user_config) {
  json cfg;
  CommandOutcome outcome;
  fs::path dir;
  try {
    cfg = effective_config(user_config);
    const std::string command = cfg.at("command").get<std::string>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    dir = output_dir(cfg);

    if (command == "measure") {
      outcome = cmd_measure(cfg, seed);
    } else if (command == "certify") {
      outcome = cmd_certify(cfg, seed);
    } else if (command == "search-weights") {
      outcome = cmd_search_weights(cfg, seed);
    } else if (command == "impossibility") {
      outcome = cmd_impossibility(cfg, seed);
    } else if (command == "simulate-pde") {
      outcome = cmd_simulate(cfg, seed, /*pde=*/true, dir);
    } else if (command == "simulate-network") {
      outcome = cmd_simulate(cfg, seed, /*pde=*/false, dir);
    } else if (command == "sync") {
      outcome = cmd_sync(cfg, seed, dir);
    } else {
      input_error("command", "unknown command '" + command + "'");
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  json result{{"command", cfg.at("command")},
              {"timestamp", iso_timestamp()},
              {"seed", cfg.at("seed")},
              {"inputs", cfg},
              {"status", outcome.status},
              {"result", outcome.result}};

  // Certificates additionally land in their own document.
  if (outcome.result.contains("certificate")) {
    write_text(dir / "certificate.json", outcome.result.at("certificate").dump(2) + "\n");
  }
  write_text(dir / "result.json", result.dump(2) + "\n");
  std::cout << outcome.summary << "\n";
  return outcome.exit_code;
}

json result_schema() {
  static const char* kSchema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "mucert result document",
  "type": "object",
  "required": ["command", "timestamp", "seed", "inputs", "status", "result"],
  "properties": {
    "command": {"type": "string",
                "enum": ["measure", "certify", "search-weights", "impossibility",
                          "simulate-pde", "simulate-network", "sync"]},
    "timestamp": {"type": "string"},
    "seed": {"type": "integer", "minimum": 0},
    "inputs": {"type": "object"},
    "status": {"type": "string", "enum": ["ok", "refused", "bound_violation"]},
    "result": {"type": "object"}
  },
  "commandResults": {
    "measure": {"required": {"value": "number", "exact": "boolean"}},
    "certify": {"required": {"certified": "boolean", "rate": "number"}},
    "search-weights": {"required": {"certified": "boolean", "rate": "number"}},
    "impossibility": {"required": {"q": "number", "witness_point": "array",
                                    "lower_bound": "number", "mu_at_witness": "number"}},
    "simulate-pde": {"required": {"bound_ok": "boolean", "rate": "number",
                                   "max_violation": "number", "csv": "string"}},
    "simulate-network": {"required": {"bound_ok": "boolean", "rate": "number",
                                       "max_violation": "number", "csv": "string"}},
    "sync": {"required": {"bound_ok": "boolean", "rate": "number", "lambda": "number",
                           "csv": "string"}}
  }
})";
  return json::parse(kSchema);
}

namespace {

bool type_matches(const json& v, const std::string& type) {
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer();
  if (type == "boolean") return v.is_boolean();
  if (type == "string") return v.is_string();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  return false;
}

}  // namespace

bool validate_result(const json& result, std::string* why) {
  const json schema = result_schema();
  const auto fail = [&](const std::string& reason) {
    if (why != nullptr) *why = reason;
    return false;
  };

  for (const auto& req : schema.at("required")) {
    const std::string key = req.get<std::string>();
    if (!result.contains(key)) return fail("missing key '" + key + "'");
    const json& prop = schema.at("properties").at(key);
    if (!type_matches(result.at(key), prop.at("type").get<std::string>())) {
      return fail("key '" + key + "' has the wrong type");
    }
    if (prop.contains("enum")) {
      bool found = false;
      for (const auto& e : prop.at("enum")) found |= (e == result.at(key));
      if (!found) return fail("key '" + key + "' outside its enum");
    }
  }

  const std::string command = result.at("command").get<std::string>();
  const json& per = schema.at("commandResults").at(command).at("required");
  for (const auto& [key, type] : per.items()) {
    if (!result.at("result").contains(key)) {
      return fail("result missing key '" + key + "' for command " + command);
    }
    if (!type_matches(result.at("result").at(key), type.get<std::string>())) {
      return fail("result key '" + key + "' has the wrong type");
    }
  }
  return true;
}

}  // namespace mucert::cli
