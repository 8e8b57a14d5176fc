// Batch front end.  One subcommand per invocation:
//
//   step       run a single distillation step on a Bell-diagonal input
//   pipeline   optimize an iterated schedule plus hashing for one input
//   sweep      write the two-scheme comparison curve as CSV
//   search     exhaustively score measured-subspace candidates, emit CSV
//   group      group orders, the transposition table, transvection matrices
//   decompose  factor a symplectic matrix into two-pair operations
//   verify     run the acceptance checks
//
// Exit codes: 0 success, 1 verification or validation failure, 2 usage.
// All numeric output uses 12 significant digits.

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "belldistil/bellstate.hpp"
#include "belldistil/gf2.hpp"
#include "belldistil/pipeline.hpp"
#include "belldistil/protocol.hpp"
#include "belldistil/search.hpp"
#include "belldistil/symplectic.hpp"
#include "belldistil/textio.hpp"
#include "belldistil/verify.hpp"

namespace {

using namespace belldistil;

BellDiagonal parse_state(const std::string& text) {
  double a, b, c, d;
  char tail;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &a, &b, &c, &d, &tail) != 4)
    throw std::invalid_argument("--state expects four comma-separated numbers");
  return {a, b, c, d};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string join_coeffs(const std::vector<double>& q) {
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) s += " ";
    s += format_g12(q[i]);
  }
  return s;
}

struct StateFlags {
  double werner = -1.0;
  std::string state;

  void attach(CLI::App* cmd) {
    auto* w = cmd->add_option("--werner", werner,
                              "input fidelity F; state (F, r, r, r)");
    auto* s = cmd->add_option("--state", state,
                              "input coefficients p00,p01,p10,p11");
    w->excludes(s);
    s->excludes(w);
  }

  BellDiagonal resolve() const {
    if (!state.empty()) return parse_state(state);
    if (werner >= 0.0) return BellDiagonal::werner(werner);
    throw std::invalid_argument("need --werner or --state");
  }
};

const DistillationStep& named_scheme(const std::string& name) {
  if (name == "dej") return dej_step();
  if (name == "proposed") return proposed_step();
  throw std::invalid_argument("unknown scheme \"" + name +
                              "\" (want dej or proposed)");
}

int run_step(const BellDiagonal& p, const DistillationStep& step) {
  StepOutcome out = apply_step(p, step);
  std::printf("step: %d -> %d\n", step.n, step.m);
  std::printf("measured directions:\n");
  for (const auto& v : step.s.basis()) std::printf("  %s\n", v.str().c_str());
  std::printf("input: %s\n",
              join_coeffs({p[0], p[1], p[2], p[3]}).c_str());
  std::printf("success: %s\n", format_g12(out.success).c_str());
  std::printf("output: %s\n", join_coeffs(out.state.coeffs()).c_str());
  std::printf("fidelity: %s\n", format_g12(out.state.fidelity()).c_str());
  return 0;
}

int run_pipeline(const BellDiagonal& p, const std::string& scheme,
                 int max_steps) {
  std::pair<Schedule, YieldResult> opt =
      scheme == "dej" ? optimize_dej_schedule(p, {max_steps})
                      : optimize_schedule(p, {max_steps});
  const Schedule& sched = opt.first;
  const YieldResult& res = opt.second;
  std::string shape;
  for (const auto& item : sched.steps) {
    if (!shape.empty()) shape += ", ";
    shape += std::to_string(item.step.n) + "-to-" + std::to_string(item.step.m);
  }
  if (!shape.empty()) shape += ", ";
  shape += "hashing";
  std::printf("scheme: %s\n", scheme.c_str());
  std::printf("schedule: %s\n", shape.c_str());
  for (std::size_t i = 0; i < res.per_step.size(); ++i) {
    const StepRecord& r = res.per_step[i];
    std::printf("step %zu: fidelity %s  success %s  cost x%s\n", i + 1,
                format_g12(r.fidelity).c_str(), format_g12(r.success).c_str(),
                format_g12(r.cost_multiplier).c_str());
  }
  std::printf("final state: %s\n",
              join_coeffs({res.final_state[0], res.final_state[1],
                           res.final_state[2], res.final_state[3]})
                  .c_str());
  std::printf("hashing yield: %s\n", format_g12(res.hashing_yield).c_str());
  std::printf("inverse yield: %s  (log10 %s)\n",
              format_g12(res.inverse_yield).c_str(),
              format_g12(res.log10_inverse_yield).c_str());
  return 0;
}

int run_sweep(double fmin, double fmax, int points, int max_steps,
              const std::string& out_path) {
  const auto rows = figure1_sweep(sweep_grid(fmin, fmax, points), max_steps);
  write_file(out_path, sweep_to_csv(rows));
  std::fprintf(stderr, "wrote %d rows to %s\n", points, out_path.c_str());
  return 0;
}

int run_search(const BellDiagonal& p, int n, int m, const std::string& objective,
               int top, int shards, std::uint64_t max_candidates,
               const std::string& out_path) {
  const Objective obj = Objective::parse(objective);
  SearchOptions opts;
  const u128 total = isotropic_subspace_count(n, n - m);
  const u128 cap = top > 0 ? u128(top) : std::min<u128>(total, 100000);
  opts.top_k = static_cast<int>(std::min<u128>(cap, 1u << 30));
  opts.shards = shards;
  opts.max_candidates = max_candidates;
  SearchReport report = best_step(p, n, m, obj, opts);
  const std::string csv = search_report_to_csv(report);
  if (out_path.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_file(out_path, csv);
  std::fprintf(stderr, "objective %s: evaluated %llu candidates in %.2f s%s\n",
               obj.str().c_str(),
               static_cast<unsigned long long>(report.states_evaluated),
               report.wall_seconds,
               report.degenerate_ties ? " (all candidates tied)" : "");
  return 0;
}

int run_group(int pairs, bool table, bool enumerate,
              const std::string& transvection) {
  if (!transvection.empty()) {
    const PauliVector u = PauliVector::from_string(transvection);
    std::printf("%s\n", transvection_matrix(u).matrix().str().c_str());
    return 0;
  }
  if (table) {
    const auto& t = s6_gamma_table();
    for (unsigned u = 1; u <= 15; ++u)
      std::printf("%s -> (%d %d)\n", PauliVector{u128{u}, 4}.str().c_str(),
                  t[u - 1].i, t[u - 1].j);
    return 0;
  }
  if (enumerate) {
    if (pairs != 2)
      throw std::invalid_argument("--enumerate is only available for 2 pairs");
    for (const auto& g : sp4_group())
      std::printf("%s\n\n", g.matrix().str().c_str());
    return 0;
  }
  std::printf("|Sp on %d pairs| = %s\n", pairs,
              u128_to_string(symplectic_group_order(pairs)).c_str());
  return 0;
}

int run_decompose(const std::string& matrix_path, int pairs,
                  std::uint64_t seed) {
  SymplecticMatrix a =
      matrix_path.empty()
          ? [&] {
              std::mt19937_64 rng(seed);
              return random_symplectic(rng, pairs, 3 * pairs + 2);
            }()
          : SymplecticMatrix(BitMatrix::parse(read_file(matrix_path)));
  std::printf("input matrix:\n%s\n", a.matrix().str().c_str());
  const auto ops = decompose_two_qubit(a);
  SymplecticMatrix prod = SymplecticMatrix::identity(a.dim());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const TwoQubitOp& op = ops[i];
    if (op.l < 0)
      std::printf("op %zu: pair %d\n", i + 1, op.k);
    else
      std::printf("op %zu: pairs %d,%d\n", i + 1, op.k, op.l);
    std::printf("%s\n", op.op4.matrix().str().c_str());
    prod = prod * op.embedded();
  }
  const bool ok = prod == a;
  std::printf("%zu operations; product %s the input\n", ops.size(),
              ok ? "matches" : "DOES NOT match");
  return ok ? 0 : 1;
}

int run_verify(bool corrupt, std::uint64_t seed) {
  VerifyOptions opts;
  opts.corrupt_s6_table = corrupt;
  opts.seed = seed;
  const auto results = run_acceptance_suite(opts);
  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::printf("%s\n", format_check_line(results[i], static_cast<int>(i) + 1,
                                          static_cast<int>(results.size()))
                            .c_str());
    if (!results[i].pass) ++failed;
  }
  std::printf("%d/%zu checks passed\n",
              static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-pair distillation toolkit"};
  app.require_subcommand(1);

  StateFlags step_state;
  std::string step_scheme = "dej", step_file;
  auto* step = app.add_subcommand("step", "run a single distillation step");
  step_state.attach(step);
  auto* scheme_opt = step->add_option("--scheme", step_scheme,
                                      "built-in scheme: dej or proposed");
  step->add_option("--file", step_file, "read the step from a text file")
      ->excludes(scheme_opt);

  StateFlags pipe_state;
  std::string pipe_scheme = "proposed";
  int pipe_max_steps = 25;
  auto* pipe = app.add_subcommand("pipeline",
                                  "optimize an iterated schedule plus hashing");
  pipe_state.attach(pipe);
  pipe->add_option("--scheme", pipe_scheme, "proposed (default) or dej");
  pipe->add_option("--max-steps", pipe_max_steps, "recurrence depth bound");

  double fmin = 0.55, fmax = 0.95;
  int points = 9, sweep_max_steps = 25;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "write the comparison curve CSV");
  sweep->add_option("--fmin", fmin, "grid start, must exceed 0.5")->required();
  sweep->add_option("--fmax", fmax, "grid end, must be below 1")->required();
  sweep->add_option("--points", points, "grid size")->required();
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_option("--max-steps", sweep_max_steps, "recurrence depth bound");

  StateFlags search_state;
  int search_n = 2, search_m = 1, search_top = 0, search_shards = 1;
  std::uint64_t search_max_candidates = 20'000'000;
  std::string search_objective = "fidelity", search_out;
  auto* search = app.add_subcommand(
      "search", "score all measured-subspace candidates for an n -> m step");
  search_state.attach(search);
  search->add_option("--n", search_n, "input pairs")->required();
  search->add_option("--m", search_m, "kept pairs")->required();
  search->add_option("--objective", search_objective,
                     "fidelity | success | fidelity-at-min-success:<t> | "
                     "inverse-yield-proxy");
  search->add_option("--top", search_top,
                     "candidates to list; 0 = all (capped at 100000)");
  search->add_option("--shards", search_shards, "parallel enumeration shards");
  search->add_option("--max-candidates", search_max_candidates,
                     "refuse larger candidate spaces");
  search->add_option("--out", search_out, "CSV path (default: stdout)");

  int group_pairs = 2;
  bool group_table = false, group_enumerate = false;
  std::string group_transvection;
  auto* group = app.add_subcommand("group", "group orders and tables");
  group->add_option("--pairs", group_pairs, "number of pairs");
  group->add_flag("--table", group_table,
                  "print the two-pair transposition table");
  group->add_flag("--enumerate", group_enumerate,
                  "print all 720 two-pair matrices");
  group->add_option("--transvection", group_transvection,
                    "print the matrix for this direction, e.g. 1011");

  std::string dec_matrix;
  int dec_pairs = 3;
  std::uint64_t dec_seed = 1;
  auto* dec = app.add_subcommand(
      "decompose", "factor a symplectic matrix into two-pair operations");
  dec->add_option("--matrix", dec_matrix,
                  "file with one row bitstring per line");
  dec->add_option("--pairs", dec_pairs, "size of the random test matrix");
  dec->add_option("--seed", dec_seed, "seed for the random test matrix");

  bool verify_corrupt = false;
  std::uint64_t verify_seed = VerifyOptions{}.seed;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--seed", verify_seed, "seed for randomized checks");
  verify->add_flag("--corrupt-s6-table", verify_corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(step)) {
      if (!step_file.empty())
        return run_step(step_state.resolve(),
                        step_from_string(read_file(step_file)));
      return run_step(step_state.resolve(), named_scheme(step_scheme));
    }
    if (app.got_subcommand(pipe)) {
      if (pipe_scheme != "dej" && pipe_scheme != "proposed")
        throw std::invalid_argument("unknown scheme \"" + pipe_scheme + "\"");
      return run_pipeline(pipe_state.resolve(), pipe_scheme, pipe_max_steps);
    }
    if (app.got_subcommand(sweep))
      return run_sweep(fmin, fmax, points, sweep_max_steps, sweep_out);
    if (app.got_subcommand(search))
      return run_search(search_state.resolve(), search_n, search_m,
                        search_objective, search_top, search_shards,
                        search_max_candidates, search_out);
    if (app.got_subcommand(group))
      return run_group(group_pairs, group_table, group_enumerate,
                       group_transvection);
    if (app.got_subcommand(dec))
      return run_decompose(dec_matrix, dec_pairs, dec_seed);
    if (app.got_subcommand(verify))
      return run_verify(verify_corrupt, verify_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
