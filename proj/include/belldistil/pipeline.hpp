#pragma once

// Iterated distillation pipelines: a sequence of 1-output steps with
// optional reordering after each, a terminal hashing stage, and the cost
// accounting that turns success rates into an inverse asymptotic yield
// (input pairs consumed per perfect output pair).

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "belldistil/bellstate.hpp"
#include "belldistil/protocol.hpp"
#include "belldistil/textio.hpp"

namespace belldistil {

// Asymptotic yield of the hashing stage, clamped at zero.
inline double hashing_yield(const BellDiagonal& p) {
  return std::max(0.0, 1.0 - shannon_entropy(p));
}

// Smallest fidelity at which hashing a Werner state returns anything,
// located by bisection.
inline double hashing_threshold(double tol = 1e-9) {
  double lo = 0.5, hi = 1.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (hashing_yield(BellDiagonal::werner(mid)) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Schedule {
  struct Item {
    DistillationStep step;
    bool reorder_after = true;
  };
  std::vector<Item> steps;
  bool hashing = true;
};

struct StepRecord {
  double fidelity;  // after the optional reorder
  double success;
  double cost_multiplier;  // n / success
};

struct YieldResult {
  std::vector<StepRecord> per_step;
  BellDiagonal final_state;
  double hashing_yield;
  double inverse_yield;
  double log10_inverse_yield;
};

// Feeds the state through the schedule.  Every step must keep exactly one
// pair.  Without the hashing stage no perfect pairs come out, so the
// inverse yield is infinite by convention.
inline YieldResult run_recurrence(const BellDiagonal& p0, const Schedule& sched) {
  BellDiagonal p = p0;
  double cost = 1.0;
  std::vector<StepRecord> records;
  records.reserve(sched.steps.size());
  for (const auto& item : sched.steps) {
    if (item.step.m != 1)
      throw std::invalid_argument("recurrence steps must keep exactly one pair");
    StepOutcome out = apply_step(p, item.step);
    p = out.state.to_single();
    if (item.reorder_after) p = sort_descending(p).first;
    double mult = item.step.n / out.success;
    cost *= mult;
    records.push_back({p.fidelity(), out.success, mult});
  }
  double yield = hashing_yield(p);
  double inf = std::numeric_limits<double>::infinity();
  double inverse = (sched.hashing && yield > 0.0) ? cost / yield : inf;
  return {std::move(records), p, yield, inverse, std::log10(inverse)};
}

struct OptimizeOptions {
  int max_steps = 25;
};

namespace detail {

// Scans k = 0 .. max_steps copies of the base step (plus, optionally, one
// final 2-to-1 step), all with reordering and terminal hashing, and keeps
// the schedule with the smallest inverse yield; ties go to fewer steps.
// When every candidate is infinite the highest-got fidelity schedule is
// returned, its infinite yield marking the failure.
inline std::pair<Schedule, YieldResult> optimize_with_base(
    const BellDiagonal& p0, const DistillationStep& base, bool allow_final_classic,
    int max_steps) {
  if (max_steps < 0) throw std::invalid_argument("max_steps must be nonnegative");
  const double inf = std::numeric_limits<double>::infinity();

  auto make_schedule = [&](int k, bool final_classic) {
    Schedule sched;
    for (int i = 0; i < k; ++i) sched.steps.push_back({base, true});
    if (final_classic) sched.steps.push_back({dej_step(), true});
    return sched;
  };

  double best_l = inf;
  int best_total = std::numeric_limits<int>::max();
  int best_k = 0;
  bool best_final = false;
  double fallback_fid = -1.0;
  int fallback_k = 0;
  bool fallback_final = false;

  auto consider = [&](double l, int k, bool final_classic, double fid) {
    int total = k + (final_classic ? 1 : 0);
    if (l < best_l || (l == best_l && total < best_total)) {
      best_l = l;
      best_total = total;
      best_k = k;
      best_final = final_classic;
    }
    if (fid > fallback_fid) {
      fallback_fid = fid;
      fallback_k = k;
      fallback_final = final_classic;
    }
  };

  BellDiagonal p = p0;
  double cost = 1.0;
  for (int k = 0;; ++k) {
    double yield = hashing_yield(p);
    consider(yield > 0.0 ? cost / yield : inf, k, false, p.fidelity());
    if (allow_final_classic) {
      try {
        StepOutcome out = apply_step(p, dej_step());
        BellDiagonal q = sort_descending(out.state.to_single()).first;
        double c2 = cost * (2.0 / out.success);
        double y2 = hashing_yield(q);
        consider(y2 > 0.0 ? c2 / y2 : inf, k, true, q.fidelity());
      } catch (const std::domain_error&) {
      }
    }
    if (k == max_steps) break;
    try {
      StepOutcome out = apply_step(p, base);
      p = sort_descending(out.state.to_single()).first;
      cost *= base.n / out.success;
    } catch (const std::domain_error&) {
      break;
    }
  }

  Schedule winner = std::isinf(best_l) ? make_schedule(fallback_k, fallback_final)
                                       : make_schedule(best_k, best_final);
  YieldResult result = run_recurrence(p0, winner);
  return {std::move(winner), std::move(result)};
}

}  // namespace detail

// Best count of 4-to-1 steps, with one final 2-to-1 step allowed.
inline std::pair<Schedule, YieldResult> optimize_schedule(
    const BellDiagonal& p0, const OptimizeOptions& opts = {}) {
  return detail::optimize_with_base(p0, proposed_step(), true, opts.max_steps);
}

// Best count of 2-to-1 steps.
inline std::pair<Schedule, YieldResult> optimize_dej_schedule(
    const BellDiagonal& p0, const OptimizeOptions& opts = {}) {
  return detail::optimize_with_base(p0, dej_step(), false, opts.max_steps);
}

struct SweepRow {
  double f;
  double log10_proposed;
  double log10_dej;
  int k_proposed;
  int k_dej;
};

inline std::vector<double> sweep_grid(double fmin, double fmax, int points) {
  if (!(fmin > 0.5) || !(fmax < 1.0) || !(fmin < fmax))
    throw std::invalid_argument("need 0.5 < fmin < fmax < 1");
  if (points < 2) throw std::invalid_argument("need at least 2 grid points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = fmin + (fmax - fmin) * i / (points - 1);
  return grid;
}

// Inverse-yield comparison of the two recurrence schemes over a fidelity
// grid; points are evaluated in parallel and reported in grid order.
inline std::vector<SweepRow> figure1_sweep(const std::vector<double>& grid,
                                           int max_steps = 25) {
  auto at = [max_steps](double f) {
    BellDiagonal p = BellDiagonal::werner(f);
    auto proposed = optimize_schedule(p, {max_steps});
    auto dej = optimize_dej_schedule(p, {max_steps});
    return SweepRow{f, proposed.second.log10_inverse_yield,
                    dej.second.log10_inverse_yield,
                    static_cast<int>(proposed.first.steps.size()),
                    static_cast<int>(dej.first.steps.size())};
  };
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(grid.size());
  for (double f : grid)
    futures.push_back(std::async(std::launch::async, at, f));
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (auto& fut : futures) rows.push_back(fut.get());
  return rows;
}

// The k columns count all recurrence steps in the chosen schedule; on the
// proposed side that includes the optional final 2-to-1 step.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  out +=
      "# proposed side: best count of 4-to-1 steps plus at most one final "
      "2-to-1 step; dej side: best count of 2-to-1 steps.\n"
      "# every step reorders its output; both sides end with hashing; k "
      "columns count all recurrence steps in the chosen schedule.\n"
      "F,log10L_proposed,log10L_dej,k_proposed,k_dej\n";
  for (const auto& row : rows) {
    out += format_g12(row.f) + "," + format_g12(row.log10_proposed) + "," +
           format_g12(row.log10_dej) + "," + std::to_string(row.k_proposed) +
           "," + std::to_string(row.k_dej) + "\n";
  }
  return out;
}

}  // namespace belldistil
