// Command line front end: flags mirror the JSON config keys; a config file
// provides the base document and explicit flags override it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mucert/cli.hpp"

namespace {

using nlohmann::json;

json parse_json_arg(const std::string& text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    throw CLI::ValidationError(what, "invalid JSON: " + text);
  }
  return parsed;
}

struct CommonFlags {
  std::string config_file;
  std::string out;
  long long seed = -1;
  std::string model;
  std::vector<std::string> params;
  std::string matrix;
  std::string p;
  std::vector<double> q;
  int points = -1;
  double cap = -1.0;
  std::string graph;
  std::string topology;
  long long nodes = -1;
  long long cells = -1;
  double length = -1.0;
  std::vector<double> diffusion;
  double t_end = -1.0;
  double dt = -1.0;
  double tolerance = -1.0;
  double rate_c = std::numeric_limits<double>::quiet_NaN();
  bool have_rate = false;
  long long u0_seed = -1;
  long long v0_seed = -1;
  std::string u0;
  std::string v0;
  int wcount = -1;
  double wmin = -1.0;
  double wmax = -1.0;
  double iq = std::numeric_limits<double>::quiet_NaN();
  double b_cap = -1.0;
  int csv_stride = -1;
};

void register_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file (flags override it)");
  cmd->add_option("--out", f.out, "output directory (default $MUCERT_OUT or .)");
  cmd->add_option("--seed", f.seed, "seed for randomized estimators");
  cmd->add_option("--model", f.model, "model name: enzyme | enzyme-full | linear");
  cmd->add_option("--param", f.params, "model parameter key=value (repeatable)");
  cmd->add_option("--matrix", f.matrix, "matrix as JSON rows, e.g. [[-2,1],[1,-2]]");
  cmd->add_option("--p", f.p, "norm exponent (number or 'inf')");
  cmd->add_option("--q", f.q, "diagonal weights");
  cmd->add_option("--points", f.points, "grid points per axis");
  cmd->add_option("--cap", f.cap, "truncation for unbounded box edges");
  cmd->add_option("--graph", f.graph, "graph JSON: {\"nodes\":N,\"edges\":[[i,j,w],..]}");
  cmd->add_option("--topology", f.topology, "named topology: path | complete");
  cmd->add_option("--nodes", f.nodes, "node count for --topology");
  cmd->add_option("--cells", f.cells, "spatial cells for simulate-pde");
  cmd->add_option("--length", f.length, "spatial interval length");
  cmd->add_option("--diffusion", f.diffusion, "per-species diffusion rates");
  cmd->add_option("--t-end", f.t_end, "integration horizon");
  cmd->add_option("--dt", f.dt, "integration step");
  cmd->add_option("--tolerance", f.tolerance, "multiplicative envelope tolerance");
  cmd->add_option("--rate-c", f.rate_c, "use this rate instead of certifying")
      ->each([&f](const std::string&) { f.have_rate = true; });
  cmd->add_option("--u0-seed", f.u0_seed, "seed for the first initial state");
  cmd->add_option("--v0-seed", f.v0_seed, "seed for the second initial state");
  cmd->add_option("--u0", f.u0, "first initial state as a JSON array");
  cmd->add_option("--v0", f.v0, "second initial state as a JSON array");
  cmd->add_option("--weight-count", f.wcount, "weight candidates per axis");
  cmd->add_option("--weight-min", f.wmin, "smallest weight candidate");
  cmd->add_option("--weight-max", f.wmax, "largest weight candidate");
  cmd->add_option("--impossibility-q", f.iq, "tested diagonal weight");
  cmd->add_option("--b-cap", f.b_cap, "witness search cap on b = k1 + k2 x");
  cmd->add_option("--csv-stride", f.csv_stride, "keep every k-th CSV row");
}

json config_from_flags(const std::string& command, const CommonFlags& f) {
  json cfg = json::object();
  if (!f.config_file.empty()) {
    std::ifstream is(f.config_file);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + f.config_file);
    cfg = json::parse(is, nullptr, false);
    if (cfg.is_discarded()) {
      throw CLI::ValidationError("--config", "invalid JSON in " + f.config_file);
    }
  }
  cfg["command"] = command;
  if (!f.out.empty()) cfg["out"] = f.out;
  if (f.seed >= 0) cfg["seed"] = f.seed;
  if (!f.model.empty()) cfg["model"]["name"] = f.model;
  for (const std::string& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--param", "expected key=value, got " + kv);
    }
    cfg["model"]["params"][kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  if (!f.matrix.empty()) {
    const json m = parse_json_arg(f.matrix, "--matrix");
    if (command == "measure") {
      cfg["matrix"] = m;
    } else {
      cfg["model"]["matrix"] = m;
    }
  }
  if (!f.p.empty()) {
    try {
      cfg["norm"]["p"] = std::stod(f.p);
    } catch (...) {
      cfg["norm"]["p"] = f.p;  // "inf"
    }
  }
  if (!f.q.empty()) cfg["norm"]["q"] = f.q;
  if (f.points > 0) cfg["grid"]["points"] = f.points;
  if (f.cap > 0.0) cfg["grid"]["cap"] = f.cap;
  if (!f.graph.empty()) cfg["graph"] = parse_json_arg(f.graph, "--graph");
  if (!f.topology.empty()) cfg["graph"]["topology"] = f.topology;
  if (f.nodes > 0) cfg["graph"]["nodes"] = f.nodes;
  if (f.cells > 0) cfg["space"]["cells"] = f.cells;
  if (f.length > 0.0) cfg["space"]["length"] = f.length;
  if (!f.diffusion.empty()) cfg["diffusion"] = f.diffusion;
  if (f.t_end > 0.0) cfg["integration"]["t_end"] = f.t_end;
  if (f.dt > 0.0) cfg["integration"]["dt"] = f.dt;
  if (f.tolerance >= 0.0) cfg["integration"]["tolerance"] = f.tolerance;
  if (f.have_rate) cfg["rate_c"] = f.rate_c;
  if (f.u0_seed >= 0) cfg["u0"] = {{"seed", f.u0_seed}};
  if (f.v0_seed >= 0) cfg["v0"] = {{"seed", f.v0_seed}};
  if (!f.u0.empty()) cfg["u0"] = parse_json_arg(f.u0, "--u0");
  if (!f.v0.empty()) cfg["v0"] = parse_json_arg(f.v0, "--v0");
  if (f.wcount > 0) cfg["weights"]["count"] = f.wcount;
  if (f.wmin > 0.0) cfg["weights"]["min"] = f.wmin;
  if (f.wmax > 0.0) cfg["weights"]["max"] = f.wmax;
  if (!std::isnan(f.iq)) cfg["impossibility"]["q"] = f.iq;
  if (f.b_cap > 0.0) cfg["impossibility"]["b_cap"] = f.b_cap;
  if (f.csv_stride > 0) cfg["csv_stride"] = f.csv_stride;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mucert: contraction certificates for reaction networks in weighted L^p norms, "
      "with diffusion-robust simulation checks"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"measure", "matrix measure mu_{p,Q} of a given matrix"},
      {"certify", "certify a model contractive in a given weighted norm"},
      {"search-weights", "search diagonal weights minimizing the rate"},
      {"impossibility", "find a witness that no p > 1 weighted norm certifies"},
      {"simulate-pde", "check the contraction envelope on the discretized PDE"},
      {"simulate-network", "check the contraction envelope on a compartment graph"},
      {"sync", "check the synchronization envelope on a compartment graph"},
  };

  std::vector<CommonFlags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, commands[i].second);
    register_flags(sub, flags[i]);
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) {
      try {
        return mucert::cli::run(config_from_flags(commands[i].first, flags[i]));
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mucert::cli::kExitInputError;
      }
    }
  }
  return mucert::cli::kExitInputError;
}
