// Command-line front end: gen, solve, equilibrium, probe, check, experiment.
// Exit codes: 0 success, 1 domain/validation errors, 2 usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccs/equilibrium.hpp"
#include "ccs/experiments.hpp"
#include "ccs/instance_gen.hpp"
#include "ccs/io.hpp"
#include "ccs/model.hpp"
#include "ccs/optimizers.hpp"
#include "ccs/tree.hpp"
#include "ccs/version.hpp"

namespace {

using ccs::Vec;
using nlohmann::json;

void print_banner(const std::string& config_line) {
  std::cout << ccs::kArtifactName << ' ' << ccs::kArtifactVersion << '\n';
  std::cout << "config: " << config_line << '\n';
}

int resolve_workers(int cli_workers) {
  if (const char* env = std::getenv("SPILLOVER_FORGE_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      throw std::invalid_argument("SPILLOVER_FORGE_WORKERS is not an integer");
    }
  }
  return std::max(1, cli_workers);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("bad number '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

// Inline comma-separated doubles, a JSON array file, or {"p": [...]}.
Vec parse_allocation_arg(const std::string& arg, int n) {
  std::vector<double> inline_vals;
  bool inline_ok = true;
  try {
    inline_vals = parse_double_list(arg);
  } catch (...) {
    inline_ok = false;
  }
  Vec p;
  if (inline_ok) {
    p.resize(static_cast<Eigen::Index>(inline_vals.size()));
    for (std::size_t i = 0; i < inline_vals.size(); ++i) p[i] = inline_vals[i];
  } else {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open allocation file: " + arg);
    json j = json::parse(in);
    const json& arr = j.is_object() ? j.at("p") : j;
    p.resize(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) p[i] = arr[i].get<double>();
  }
  ccs::validate_allocation(p, n);
  return p;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<std::pair<int, int>> parse_edges(const std::string& s) {
  std::vector<std::pair<int, int>> edges;
  if (s.empty()) return edges;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto dash = cell.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("bad edge '" + cell + "'");
    edges.emplace_back(std::stoi(cell.substr(0, dash)), std::stoi(cell.substr(dash + 1)));
  }
  return edges;
}

struct GenOpts {
  std::string kind;
  int n = 10;
  double r = 0.5;
  double qstar = 1.0;
  std::uint64_t seed = 0;
  std::string edges;
  std::string out;
};

int run_gen(const GenOpts& o) {
  std::ostringstream cfg;
  cfg << "gen kind=" << o.kind << " n=" << o.n << " r=" << o.r << " qstar=" << o.qstar
      << " seed=" << o.seed << " out=" << o.out;
  print_banner(cfg.str());

  ccs::Instance inst;
  if (o.kind == "random-graph") {
    inst = ccs::random_graph_instance({o.n, o.r, o.qstar, o.seed});
  } else if (o.kind == "random-tree") {
    inst = ccs::to_instance(ccs::random_tree_instance(o.n, o.qstar, o.seed));
  } else if (o.kind == "clique") {
    inst = ccs::clique_reduction_instance(o.n, parse_edges(o.edges));
  } else if (o.kind == "wta-counter") {
    inst = ccs::counterexample_wta().first;
  } else if (o.kind == "tullock-counter") {
    inst = ccs::counterexample_tullock().first;
  } else {
    throw std::invalid_argument("unknown instance kind '" + o.kind + "'");
  }
  ccs::save_instance(inst, o.out);
  std::cout << "wrote " << o.out << " (n=" << inst.n << ", label=\"" << inst.label << "\")\n";
  return 0;
}

struct SolveOpts {
  std::string instance;
  std::string algo;
  double epsilon = 0.05;
  bool epsilon_given = false;
  std::string out;
  bool timings = false;
};

int run_solve(const SolveOpts& o) {
  std::ostringstream cfg;
  cfg << "solve instance=" << o.instance << " algo=" << o.algo << " epsilon=" << o.epsilon;
  print_banner(cfg.str());

  const ccs::Instance inst = ccs::load_instance(o.instance);
  ccs::SolveOutcome out;
  if (o.algo == "gcs") {
    out = ccs::gcs(inst);
  } else if (o.algo == "nsr") {
    out = ccs::nsr_solve(inst, o.epsilon);
  } else if (o.algo == "hop") {
    out = ccs::hop_solve(ccs::tree_from_instance(inst), o.epsilon);
  } else if (o.algo == "oracle-subset") {
    out = ccs::brute_force_subset_oracle(
        inst, o.epsilon_given ? std::optional<double>(o.epsilon) : std::nullopt);
  } else if (o.algo == "oracle-alloc") {
    out = ccs::brute_force_allocation_oracle(inst, o.epsilon);
  } else if (o.algo == "equal") {
    out.algorithm = "equal";
    out.p = ccs::equal_allocation(inst.n);
    const ccs::EquilibriumResult eq = ccs::greatest_equilibrium(inst, out.p);
    out.predicted_sw = eq.sw;
    for (int i = 0; i < inst.n; ++i)
      if (eq.profile[i] >= 1.0 - 1e-9) out.predicted_active.push_back(i);
  } else {
    throw std::invalid_argument("unknown algorithm '" + o.algo + "'");
  }

  std::cout << "algorithm=" << out.algorithm << " predicted_sw=" << out.predicted_sw
            << " active=" << out.predicted_active.size() << '\n';
  if (o.timings) std::fprintf(stderr, "elapsed: %.6f s\n", out.elapsed_sec);
  if (!o.out.empty()) write_json(ccs::solve_outcome_to_json(out, o.timings), o.out);
  return 0;
}

struct EquilibriumOpts {
  std::string instance;
  std::string p;
  double delta = 0.01;
  std::string trace;
  std::string out;
};

int run_equilibrium(const EquilibriumOpts& o) {
  std::ostringstream cfg;
  cfg << "equilibrium instance=" << o.instance << " p=" << o.p << " delta=" << o.delta;
  print_banner(cfg.str());

  const ccs::Instance inst = ccs::load_instance(o.instance);
  const Vec p = parse_allocation_arg(o.p, inst.n);

  ccs::SolverConfig scfg;
  scfg.effort_grid_step = o.delta;
  scfg.keep_trace = !o.trace.empty();
  const ccs::EquilibriumResult res = ccs::greatest_equilibrium(inst, p, scfg);

  std::cout << "converged=" << (res.converged ? "yes" : "no") << " sweeps=" << res.iterations
            << " sw=" << res.sw << " verified=" << (res.verified ? "yes" : "no") << '\n';
  if (!o.out.empty()) write_json(ccs::equilibrium_result_to_json(res), o.out);
  if (!o.trace.empty()) {
    std::ofstream tr(o.trace);
    if (!tr) throw std::runtime_error("cannot write " + o.trace);
    tr << "iter";
    for (int i = 0; i < inst.n; ++i) tr << ",x_" << (i + 1);
    tr << '\n';
    for (std::size_t t = 0; t < res.trace.size(); ++t) {
      tr << (t + 1);
      char buf[40];
      for (int i = 0; i < inst.n; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", res.trace[t][i]);
        tr << buf;
      }
      tr << '\n';
    }
  }
  return res.converged ? 0 : 1;
}

struct ProbeOpts {
  std::string fixture;
  std::string instance;
  std::string mech = "pra";
  std::string p;
  double delta = 0.01;
  int workers = 1;
  std::string out;
};

int run_probe(const ProbeOpts& o) {
  std::ostringstream cfg;
  cfg << "probe " << (o.fixture.empty() ? "instance=" + o.instance : "fixture=" + o.fixture)
      << " delta=" << o.delta;
  print_banner(cfg.str());

  ccs::Instance inst;
  ccs::MechanismSpec mech;
  if (!o.fixture.empty()) {
    if (o.fixture == "wta-counter") std::tie(inst, mech) = ccs::counterexample_wta();
    else if (o.fixture == "tullock-counter") std::tie(inst, mech) = ccs::counterexample_tullock();
    else throw std::invalid_argument("unknown fixture '" + o.fixture + "'");
  } else {
    if (o.instance.empty()) throw std::invalid_argument("probe needs --fixture or --instance");
    inst = ccs::load_instance(o.instance);
    if (o.mech == "pra") {
      if (o.p.empty()) throw std::invalid_argument("pra probe needs --p");
      mech = ccs::Pra{parse_allocation_arg(o.p, inst.n)};
    } else if (o.mech == "wta") {
      mech = ccs::Wta{};
    } else if (o.mech == "tullock") {
      mech = ccs::Tullock{};
    } else {
      throw std::invalid_argument("unknown mechanism '" + o.mech + "'");
    }
  }

  const int workers = resolve_workers(o.workers);
  const auto pne = ccs::find_pne_grid(inst, mech, o.delta, {}, workers);
  if (pne.empty()) std::cout << "no grid PNE found\n";
  else std::cout << "found " << pne.size() << " grid PNE\n";

  if (!o.out.empty()) {
    json j;
    j["count"] = pne.size();
    j["pne"] = json::array();
    for (const auto& x : pne) {
      json row = json::array();
      for (Eigen::Index i = 0; i < x.size(); ++i) row.push_back(x[i]);
      j["pne"].push_back(row);
    }
    write_json(j, o.out);
  }
  return 0;
}

struct CheckOpts {
  std::string instance;
  std::string mech = "pra";
  std::string p;
  int samples = 200;
  double h = 1e-3;
  std::uint64_t seed = 0;
  std::string out;
};

int run_check(const CheckOpts& o) {
  std::ostringstream cfg;
  cfg << "check instance=" << o.instance << " mech=" << o.mech << " samples=" << o.samples
      << " step=" << o.h << " seed=" << o.seed;
  print_banner(cfg.str());

  const ccs::Instance inst = ccs::load_instance(o.instance);
  const auto comp = ccs::check_complementarity(inst, o.samples, o.h, o.seed);
  std::cout << "complementarity: " << (comp.pass ? "pass" : "FAIL")
            << (comp.vacuous ? " (vacuous: single player)" : "")
            << " worst=" << comp.worst_value << '\n';

  ccs::MechanismSpec mech;
  if (o.mech == "pra")
    mech = ccs::Pra{o.p.empty() ? ccs::equal_allocation(inst.n)
                                : parse_allocation_arg(o.p, inst.n)};
  else if (o.mech == "wta") mech = ccs::Wta{};
  else if (o.mech == "tullock") mech = ccs::Tullock{};
  else throw std::invalid_argument("unknown mechanism '" + o.mech + "'");

  const auto ax = ccs::check_axioms(mech, inst.n, o.samples, o.seed);
  if (!ax.applicable) {
    std::cout << "axioms: " << ax.note << '\n';
  } else {
    std::cout << "axioms: monotonicity " << (ax.monotonicity_pass ? "pass" : "FAIL")
              << " (worst=" << ax.worst_monotonicity << "), separability "
              << (ax.separability_pass ? "pass" : "FAIL") << '\n';
  }

  if (!o.out.empty()) {
    json j;
    j["complementarity"] = {{"pass", comp.pass},
                            {"vacuous", comp.vacuous},
                            {"worst_value", comp.worst_value}};
    j["axioms"] = {{"applicable", ax.applicable},
                   {"note", ax.note},
                   {"monotonicity_pass", ax.monotonicity_pass},
                   {"worst_monotonicity", ax.worst_monotonicity},
                   {"separability_pass", ax.separability_pass}};
    write_json(j, o.out);
  }

  const bool ok = comp.pass && (!ax.applicable || (ax.monotonicity_pass && ax.separability_pass));
  return ok ? 0 : 1;
}

struct ExperimentOpts {
  std::string sweep;
  std::string values;
  int fixed_n = 100;
  double fixed_r = 0.5;
  double fixed_qstar = 1.0;
  int instances = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir;
};

int run_experiment(const ExperimentOpts& o) {
  std::ostringstream cfgline;
  cfgline << "experiment sweep=" << o.sweep << " values=" << o.values << " fixed-n=" << o.fixed_n
          << " fixed-r=" << o.fixed_r << " fixed-qstar=" << o.fixed_qstar
          << " instances=" << o.instances << " seed=" << o.seed << " out-dir=" << o.out_dir;
  print_banner(cfgline.str());

  ccs::SweepConfig cfg;
  cfg.axis = ccs::sweep_axis_from_string(o.sweep);
  cfg.axis_values = parse_double_list(o.values);
  cfg.fixed_n = o.fixed_n;
  cfg.fixed_r = o.fixed_r;
  cfg.fixed_qstar = o.fixed_qstar;
  cfg.instances_per_point = o.instances;
  cfg.master_seed = o.seed;
  cfg.workers = resolve_workers(o.workers);

  std::filesystem::create_directories(o.out_dir);
  const auto records = ccs::run_sweep(cfg);
  const auto table = ccs::aggregate(cfg, records);

  const std::string base = o.out_dir + "/sweep_" + ccs::to_string(cfg.axis);
  ccs::emit_records_csv(records, base + "_records.csv");
  ccs::emit_csv(table, base + "_aggregate.csv");
  ccs::emit_plot(table, base + ".svg");

  for (const auto& row : table)
    std::cout << ccs::to_string(cfg.axis) << '=' << row.axis_value << ' ' << row.algorithm
              << ": mean_sw=" << row.mean_sw << " mean_active=" << row.mean_active
              << " theory_sw=" << row.theory_sw << " theory_active=" << row.theory_active << '\n';
  std::cout << "wrote " << base << "_records.csv, " << base << "_aggregate.csv, " << base
            << ".svg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"content-creation spillover games: instances, equilibria, allocation design"};
  app.require_subcommand(1);

  GenOpts gen_opts;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--kind", gen_opts.kind,
                  "random-graph | random-tree | clique | wta-counter | tullock-counter")
      ->required();
  gen->add_option("--n", gen_opts.n, "player count");
  gen->add_option("--r", gen_opts.r, "edge probability");
  gen->add_option("--qstar", gen_opts.qstar, "upper support of q and g");
  gen->add_option("--seed", gen_opts.seed, "generator seed");
  gen->add_option("--edges", gen_opts.edges, "clique graph edges, e.g. 0-1,1-2");
  gen->add_option("--out", gen_opts.out, "output instance path")->required();

  SolveOpts solve_opts;
  auto* solve = app.add_subcommand("solve", "run an allocation algorithm");
  solve->add_option("--instance", solve_opts.instance, "instance file")->required();
  solve->add_option("--algo", solve_opts.algo,
                    "gcs | nsr | hop | oracle-subset | oracle-alloc | equal")
      ->required();
  auto* eps_opt = solve->add_option("--epsilon", solve_opts.epsilon, "budget grid step");
  solve->add_option("--out", solve_opts.out, "output JSON path");
  solve->add_flag("--timings", solve_opts.timings, "include wall time in the output");

  EquilibriumOpts eq_opts;
  auto* equilibrium = app.add_subcommand("equilibrium", "greatest equilibrium of a PRA game");
  equilibrium->add_option("--instance", eq_opts.instance, "instance file")->required();
  equilibrium->add_option("--p", eq_opts.p, "allocation: inline doubles or a JSON file")
      ->required();
  equilibrium->add_option("--delta", eq_opts.delta, "effort grid step");
  equilibrium->add_option("--trace", eq_opts.trace, "per-sweep CSV path");
  equilibrium->add_option("--out", eq_opts.out, "output JSON path");

  ProbeOpts probe_opts;
  auto* probe = app.add_subcommand("probe", "exhaustive grid search for pure equilibria");
  probe->add_option("--fixture", probe_opts.fixture, "wta-counter | tullock-counter");
  probe->add_option("--instance", probe_opts.instance, "instance file");
  probe->add_option("--mech", probe_opts.mech, "pra | wta | tullock");
  probe->add_option("--p", probe_opts.p, "PRA allocation");
  probe->add_option("--delta", probe_opts.delta, "strategy grid step");
  probe->add_option("--workers", probe_opts.workers, "worker threads");
  probe->add_option("--out", probe_opts.out, "output JSON path");

  CheckOpts check_opts;
  auto* check = app.add_subcommand("check", "model and mechanism diagnostics");
  check->add_option("--instance", check_opts.instance, "instance file")->required();
  check->add_option("--mech", check_opts.mech, "pra | wta | tullock");
  check->add_option("--p", check_opts.p, "PRA allocation (default: equal)");
  check->add_option("--samples", check_opts.samples, "sample points");
  check->add_option("--step", check_opts.h, "finite-difference step");
  check->add_option("--seed", check_opts.seed, "sampler seed");
  check->add_option("--out", check_opts.out, "output JSON path");

  ExperimentOpts exp_opts;
  auto* experiment = app.add_subcommand("experiment", "random-graph parameter sweep");
  experiment->add_option("--sweep", exp_opts.sweep, "n | r | qstar")->required();
  experiment->add_option("--values", exp_opts.values, "comma-separated axis values")->required();
  experiment->add_option("--fixed-n", exp_opts.fixed_n, "player count when not swept");
  experiment->add_option("--fixed-r", exp_opts.fixed_r, "edge probability when not swept");
  experiment->add_option("--fixed-qstar", exp_opts.fixed_qstar, "quality support when not swept");
  experiment->add_option("--instances", exp_opts.instances, "instances per axis point");
  experiment->add_option("--seed", exp_opts.seed, "master seed");
  experiment->add_option("--workers", exp_opts.workers, "worker threads");
  experiment->add_option("--out-dir", exp_opts.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    solve_opts.epsilon_given = eps_opt->count() > 0;
    if (gen->parsed()) return run_gen(gen_opts);
    if (solve->parsed()) return run_solve(solve_opts);
    if (equilibrium->parsed()) return run_equilibrium(eq_opts);
    if (probe->parsed()) return run_probe(probe_opts);
    if (check->parsed()) return run_check(check_opts);
    if (experiment->parsed()) return run_experiment(exp_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
