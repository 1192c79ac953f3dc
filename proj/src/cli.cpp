// Copyright 2026 The dpfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpfl/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "dpfl/chart.hpp"
#include "dpfl/io.hpp"
#include "dpfl/util.hpp"

namespace dpfl {

namespace {

// Writes to the output path atomically, or to stdout when no path given.
void deliver(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
  } else {
    atomic_write_file(out, content);
  }
}

int sweep_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("DPFL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw)
      hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

std::string info_summary(const InfoReport& r, bool bits) {
  const double f = bits ? 1.0 / std::log(2.0) : 1.0;
  const char* unit = bits ? "bits" : "nats";
  std::string s;
  s += "I(X;T1)    = " + format_significant(r.i_x_t1 * f, 6) + " " + unit + "\n";
  s += "I(X;T2)    = " + format_significant(r.i_x_t2 * f, 6) + " " + unit + "\n";
  s += "I(T1;T2)   = " + format_significant(r.i_t1_t2 * f, 6) + " " + unit + "\n";
  s += "I(Y;T1,T2) = " + format_significant(r.i_y_t1t2 * f, 6) + " " + unit + "\n";
  s += "functional = " + format_significant(r.functional_value * f, 6) + " " +
       unit + "\n";
  return s;
}

std::string record_csv_line(const TradeoffRecord& rec) {
  return records_to_csv({rec});
}

struct SolveFlags {
  std::string input;
  std::string request;
  std::string out;
  std::string format = "json";
  Eigen::Index dim1 = 0;
  Eigen::Index dim2 = 0;
  double beta = 1.0;
  double lambda = 1.0;
  double gamma = 0.0;
  double tol = 1e-8;
  int max_iter = 2000;
  std::uint64_t seed = 1;
  int restarts = 1;
  bool trace = false;
  bool bits = false;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--beta", f.beta, "Multiplier on I(X;T1)");
  cmd->add_option("--lambda", f.lambda, "Multiplier on I(X;T2)");
  cmd->add_option("--gamma", f.gamma, "Multiplier on I(T1;T2)");
  cmd->add_option("--tol", f.tol, "Convergence tolerance on |dF|");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap");
  cmd->add_option("--seed", f.seed, "Initialization seed");
  cmd->add_option("--restarts", f.restarts, "Best-of-n restarts");
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--format", f.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--trace", f.trace, "Include the functional trace (json)");
  cmd->add_flag("--bits", f.bits, "Print the console summary in bits");
}

// Fills params/config from a request file when --request is used.
void apply_request(const SolveFlags& f, bool gaussian, SolveRequest& req) {
  if (!f.request.empty()) {
    req = load_solve_request(f.request);
    if (gaussian && req.model.empty())
      throw ValidationError("solve request: 'model' is required here");
    if (!gaussian && req.source.empty())
      throw ValidationError("solve request: 'source' is required here");
    return;
  }
  if (f.input.empty())
    throw ValidationError("an input file (or --request) is required");
  (gaussian ? req.model : req.source) = f.input;
  if (gaussian) {
    req.d1 = f.dim1;
    req.d2 = f.dim2;
  } else {
    req.card_t1 = f.dim1;
    req.card_t2 = f.dim2;
  }
  req.params.beta = f.beta;
  req.params.lambda = f.lambda;
  req.params.gamma = f.gamma;
  req.tol = f.tol;
  req.max_iter = f.max_iter;
  req.seed = f.seed;
  req.restarts = f.restarts;
}

TradeoffRecord to_record(const LagrangeParams& p, std::uint64_t seed,
                         const InfoReport& report, int iterations,
                         bool converged) {
  TradeoffRecord rec;
  rec.beta = p.beta;
  rec.lambda = p.lambda;
  rec.gamma = p.gamma;
  rec.seed = seed;
  rec.report = report;
  rec.iterations = iterations;
  rec.converged = converged;
  return rec;
}

int cmd_check(const std::string& path, bool bits) {
  const std::string text = read_file(path);
  const double f = bits ? 1.0 / std::log(2.0) : 1.0;
  const char* unit = bits ? "bits" : "nats";
  // Auto-detect by schema: discrete sources carry "joint", Gaussian models
  // carry "sigma_x".
  if (text.find("\"joint\"") != std::string::npos) {
    const JointSource src = joint_source_from_json_text(text);
    std::cout << "joint source: |X| = " << src.card_x()
              << ", |Y| = " << src.card_y() << "\n"
              << "I(X;Y) = " << format_significant(src.mutual_info() * f, 6)
              << " " << unit << "\n";
    return 0;
  }
  const GaussianModel model = gaussian_model_from_json_text(text);
  std::cout << "gaussian model: N_X = " << model.n_x()
            << ", N_Y = " << model.n_y() << "\n"
            << "I(X;Y) = " << format_significant(model.mutual_info() * f, 6)
            << " " << unit << "\n";
  return 0;
}

int cmd_solve_discrete(const SolveFlags& f) {
  SolveRequest req;
  apply_request(f, /*gaussian=*/false, req);
  const JointSource source = load_joint_source(req.source);
  const Eigen::Index c1 = req.card_t1 > 0 ? req.card_t1 : source.card_x();
  const Eigen::Index c2 = req.card_t2 > 0 ? req.card_t2 : source.card_x();
  const SolveResult res = solve_best_of(source, c1, c2, req.params, req.tol,
                                        req.max_iter, req.seed, req.restarts);
  if (res.max_trace_increase > 1e-9) {
    std::cerr << "warning: non-monotone trace (max increase "
              << format_significant(res.max_trace_increase, 3) << ")\n";
  }
  if (!res.converged)
    std::cerr << "warning: not converged within " << req.max_iter
              << " iterations\n";
  if (f.format == "csv") {
    deliver(f.out, record_csv_line(to_record(req.params, req.seed, res.report,
                                             res.iterations, res.converged)));
  } else {
    deliver(f.out,
            solve_result_to_json_text(res.report, res.converged,
                                      res.iterations,
                                      f.trace ? &res.trace : nullptr));
  }
  if (!f.out.empty()) std::cout << info_summary(res.report, f.bits);
  return 0;
}

int cmd_solve_gaussian(const SolveFlags& f) {
  SolveRequest req;
  apply_request(f, /*gaussian=*/true, req);
  const GaussianModel model = load_gaussian_model(req.model);
  const Eigen::Index d1 = req.d1 > 0 ? req.d1 : model.n_x();
  const Eigen::Index d2 = req.d2 > 0 ? req.d2 : model.n_x();
  const GaussianSolveResult res = solve_gaussian_best_of(
      model, d1, d2, req.params, req.tol, req.max_iter, req.seed, req.restarts);
  if (res.max_trace_increase > 1e-9) {
    std::cerr << "warning: non-monotone trace (max increase "
              << format_significant(res.max_trace_increase, 3) << ")\n";
  }
  if (!res.converged)
    std::cerr << "warning: not converged within " << req.max_iter
              << " iterations\n";
  if (f.format == "csv") {
    deliver(f.out, record_csv_line(to_record(req.params, req.seed, res.report,
                                             res.iterations, res.converged)));
  } else {
    deliver(f.out,
            solve_result_to_json_text(res.report, res.converged,
                                      res.iterations,
                                      f.trace ? &res.trace : nullptr));
  }
  if (!f.out.empty()) std::cout << info_summary(res.report, f.bits);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              const std::string& format, const std::string& svg_out,
              const std::string& x_name, const std::string& y_name) {
  const SweepConfig cfg = load_sweep_config(config_path);
  std::vector<TradeoffRecord> records;
  if (cfg.solver == "discrete") {
    const JointSource source = load_joint_source(cfg.problem);
    records = run_sweep(cfg.grid, source, sweep_threads());
  } else {
    const GaussianModel model = load_gaussian_model(cfg.problem);
    records = run_sweep(cfg.grid, model, sweep_threads());
  }
  int failures = 0;
  for (const auto& r : records)
    if (!r.error.empty()) ++failures;
  if (failures > 0)
    std::cerr << "warning: " << failures << " of " << records.size()
              << " sweep points failed\n";

  const InfoField x_field = parse_info_field(x_name);
  const InfoField y_field = parse_info_field(y_name);
  if (format == "json") {
    deliver(out, records_to_json_text(records));
  } else if (format == "svg") {
    deliver(out, render_svg(records, x_field, y_field));
  } else {
    deliver(out, records_to_csv(records));
  }
  if (!svg_out.empty()) emit_svg(records, x_field, y_field, svg_out);
  return 0;
}

int cmd_gen_model(Eigen::Index nx, Eigen::Index ny, double coupling,
                  std::uint64_t seed, const std::string& out) {
  const GaussianModel model = gen_gaussian_model(nx, ny, coupling, seed);
  deliver(out, gaussian_model_to_json_text(model));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "Two-agent compression/prediction trade-off solver "
      "(discrete and Gaussian sources)"};
  app.require_subcommand(1);

  // check
  std::string check_path;
  bool check_bits = false;
  CLI::App* check = app.add_subcommand(
      "check", "Validate a problem file and print its dimensions and I(X;Y)");
  check->add_option("file", check_path, "Joint source or Gaussian model JSON")
      ->required();
  check->add_flag("--bits", check_bits, "Print in bits");

  // solve-discrete
  SolveFlags sd;
  CLI::App* solve_d =
      app.add_subcommand("solve-discrete", "Run the discrete solver");
  solve_d->add_option("--source", sd.input, "Joint source JSON file");
  solve_d->add_option("--request", sd.request, "Solve request JSON file");
  solve_d->add_option("--card-t1", sd.dim1, "Alphabet size of T1 (default |X|)");
  solve_d->add_option("--card-t2", sd.dim2, "Alphabet size of T2 (default |X|)");
  add_solver_flags(solve_d, sd);

  // solve-gaussian
  SolveFlags sg;
  CLI::App* solve_g =
      app.add_subcommand("solve-gaussian", "Run the Gaussian solver");
  solve_g->add_option("--model", sg.input, "Gaussian model JSON file");
  solve_g->add_option("--request", sg.request, "Solve request JSON file");
  solve_g->add_option("--d1", sg.dim1, "Dimension of T1 (default N_X)");
  solve_g->add_option("--d2", sg.dim2, "Dimension of T2 (default N_X)");
  add_solver_flags(solve_g, sg);

  // sweep
  std::string sweep_config, sweep_out, sweep_svg;
  std::string sweep_format = "csv";
  std::string sweep_x = "i_x_t1", sweep_y = "i_y_t1t2";
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sweep a multiplier grid, emit CSV/JSON/SVG");
  sweep->add_option("--config", sweep_config, "Sweep config JSON")->required();
  sweep->add_option("--out", sweep_out, "Output path (default: stdout)");
  sweep->add_option("--format", sweep_format, "csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sweep->add_option("--svg", sweep_svg, "Also write an SVG chart here");
  sweep->add_option("--x", sweep_x, "Chart x field");
  sweep->add_option("--y", sweep_y, "Chart y field");

  // gen-model
  Eigen::Index gen_nx = 10, gen_ny = 10;
  double gen_coupling = 1.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand(
      "gen-model", "Generate a random SPD Gaussian model");
  gen->add_option("--nx", gen_nx, "Dimension of X");
  gen->add_option("--ny", gen_ny, "Dimension of Y");
  gen->add_option("--coupling", gen_coupling, "Cross-block scale in [0, 1]");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  std::string prog = "dpfl";
  argv.push_back(prog.data());
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*check) return cmd_check(check_path, check_bits);
    if (*solve_d) return cmd_solve_discrete(sd);
    if (*solve_g) return cmd_solve_gaussian(sg);
    if (*sweep)
      return cmd_sweep(sweep_config, sweep_out, sweep_format, sweep_svg,
                       sweep_x, sweep_y);
    if (*gen)
      return cmd_gen_model(gen_nx, gen_ny, gen_coupling, gen_seed, gen_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace dpfl
