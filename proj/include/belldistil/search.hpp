#pragma once

// Exhaustive search over distillation steps.  A candidate step is identified
// with its measured subspace S alone: success and fidelity need nothing else,
// so the search walks all (n-m)-dimensional isotropic subspaces, scores them
// through that cheap path, and only completes full matrices for the top
// candidates.  The walk is shardable by the value of the top RREF row, which
// makes parallel runs bit-identical to serial ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "belldistil/bellstate.hpp"
#include "belldistil/gf2.hpp"
#include "belldistil/protocol.hpp"
#include "belldistil/textio.hpp"

namespace belldistil {

struct Objective {
  enum class Kind {
    fidelity,
    success,
    fidelity_at_min_success,
    inverse_yield_proxy,
  };

  Kind kind = Kind::fidelity;
  double min_success = 0.0;

  // "fidelity" | "success" | "fidelity-at-min-success:<t>" |
  // "inverse-yield-proxy"
  static Objective parse(const std::string& text) {
    Objective obj;
    if (text == "fidelity") {
      obj.kind = Kind::fidelity;
    } else if (text == "success") {
      obj.kind = Kind::success;
    } else if (text == "inverse-yield-proxy") {
      obj.kind = Kind::inverse_yield_proxy;
    } else if (text.rfind("fidelity-at-min-success:", 0) == 0) {
      obj.kind = Kind::fidelity_at_min_success;
      std::size_t used = 0;
      double t = std::stod(text.substr(24), &used);
      if (used != text.size() - 24)
        throw std::invalid_argument("bad threshold in objective: " + text);
      if (!(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("objective threshold must be in (0, 1]");
      obj.min_success = t;
    } else {
      throw std::invalid_argument("unknown objective: " + text);
    }
    return obj;
  }

  std::string str() const {
    switch (kind) {
      case Kind::fidelity:
        return "fidelity";
      case Kind::success:
        return "success";
      case Kind::fidelity_at_min_success:
        return "fidelity-at-min-success:" + format_g12(min_success);
      case Kind::inverse_yield_proxy:
        return "inverse-yield-proxy";
    }
    throw std::logic_error("unreachable");
  }
};

// Number of k-dimensional isotropic subspaces of a 2n-bit symplectic space:
// ordered independent isotropic k-tuples divided by |GL(k,2)|.  Zero when
// k exceeds n (the factor at i = n vanishes).
inline u128 isotropic_subspace_count(int pairs, int dim) {
  if (pairs < 1 || 2 * pairs > kMaxWidth)
    throw std::invalid_argument("pairs out of range");
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (dim > 2 * pairs) return 0;
  u128 tuples = 1;
  for (int i = 0; i < dim; ++i)
    tuples *= (u128{1} << (2 * pairs - i)) - (u128{1} << i);
  u128 gl = 1;
  for (int i = 0; i < dim; ++i) gl *= (u128{1} << dim) - (u128{1} << i);
  return gl == 0 ? 0 : tuples / gl;
}

// Visits every dim-dimensional isotropic subspace exactly once, as a Subspace
// in reduced row echelon form.  Rows are grown bottom-up (largest text pivot
// first) so each partial basis can be pruned as soon as two rows fail to
// commute.  Deterministic order, but not the sorted canonical order; callers
// that need a canonical listing sort the materialized result.
template <typename Visitor>
void for_each_isotropic(int pairs, int dim, Visitor&& visit) {
  const int width = 2 * pairs;
  if (width < 2 || width > kMaxWidth)
    throw std::invalid_argument("pairs out of range");
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (dim == 0) {
    visit(Subspace(width));
    return;
  }
  if (dim > pairs) return;  // no isotropic subspace is that large

  std::vector<u128> rows;          // built rows, bottom of the RREF first
  std::vector<int> pivots;         // their text pivot positions
  rows.reserve(dim);
  pivots.reserve(dim);

  auto rec = [&](auto&& self, int remaining, int max_pivot) -> void {
    if (remaining == 0) {
      std::vector<PauliVector> basis;
      basis.reserve(rows.size());
      for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        basis.emplace_back(*it, width);
      visit(Subspace::from_rref(basis, width));
      return;
    }
    // Pivot at text position t; must leave room for remaining-1 pivots above.
    for (int t = max_pivot; t >= remaining - 1; --t) {
      std::vector<int> free_pos;
      for (int p = t + 1; p < width; ++p)
        if (std::find(pivots.begin(), pivots.end(), p) == pivots.end())
          free_pos.push_back(p);
      const u128 pivot_bit = u128{1} << (width - 1 - t);
      const std::size_t combos = std::size_t{1} << free_pos.size();
      for (std::size_t mask = 0; mask < combos; ++mask) {
        u128 row = pivot_bit;
        for (std::size_t b = 0; b < free_pos.size(); ++b)
          if (mask >> b & 1) row |= u128{1} << (width - 1 - free_pos[b]);
        bool commutes = true;
        for (const u128 prev : rows)
          if (parity128(row & pair_swapped_bits(prev))) {
            commutes = false;
            break;
          }
        if (!commutes) continue;
        rows.push_back(row);
        pivots.push_back(t);
        self(self, remaining - 1, t - 1);
        rows.pop_back();
        pivots.pop_back();
      }
    }
  };
  rec(rec, dim, width - 1);
}

// Materialized listing in canonical order: ascending lexicographic on the
// RREF row tuple (top row first).
inline std::vector<Subspace> enumerate_isotropic(int pairs, int dim) {
  std::vector<Subspace> out;
  for_each_isotropic(pairs, dim, [&](const Subspace& s) { out.push_back(s); });
  std::sort(out.begin(), out.end(), [](const Subspace& a, const Subspace& b) {
    return a.basis() < b.basis();
  });
  return out;
}

// Half-open ranges of top-row values [lo, hi) that partition [1, 2^{2n}).
// A subspace belongs to the shard containing its top RREF row's value.
inline std::vector<std::pair<u128, u128>> search_partition(int pairs,
                                                           int shards) {
  if (pairs < 1 || 2 * pairs > kMaxWidth)
    throw std::invalid_argument("pairs out of range");
  if (shards < 1) throw std::invalid_argument("shards must be positive");
  const u128 lo = 1;
  const u128 hi = u128{1} << (2 * pairs);
  const u128 total = hi - lo;
  std::vector<std::pair<u128, u128>> ranges;
  ranges.reserve(static_cast<std::size_t>(shards));
  u128 start = lo;
  for (int i = 0; i < shards; ++i) {
    u128 len = total / static_cast<unsigned>(shards) +
               (static_cast<u128>(i) < total % static_cast<unsigned>(shards)
                    ? 1
                    : 0);
    ranges.emplace_back(start, start + len);
    start += len;
  }
  return ranges;
}

struct SearchCandidate {
  Subspace s;
  DistillationStep step;
  double score = 0.0;
  StepOutcome outcome;
};

struct SearchReport {
  std::vector<SearchCandidate> best;  // descending score
  std::uint64_t states_evaluated = 0;
  double wall_seconds = 0.0;
  bool degenerate_ties = false;  // every valid candidate scored the same
};

struct SearchOptions {
  int top_k = 5;
  int shards = 1;
  std::uint64_t max_candidates = 20'000'000;
};

namespace detail {

struct ScoredSpace {
  Subspace s;
  double score;
  double success;
  double fidelity;
};

// Better = higher score; ties resolved by the canonical row tuple so that
// results never depend on visit order or sharding.
inline bool search_better(const ScoredSpace& a, const ScoredSpace& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.s.basis() < b.s.basis();
}

// Success and fidelity straight from S: the character sum D gives the
// success rate, the y = 0 coset sum gives the fidelity numerator.
inline ScoredSpace score_subspace(const Subspace& s, const BellDiagonal& p,
                                  const SVector& sv, int pairs, int keep,
                                  const Objective& obj, double fidelity_in) {
  double d = 0.0, num = 0.0;
  for (const auto& x : s.elements()) {
    d += product_s_weight(sv, x);
    num += product_weight(p, x);
  }
  const double scale = static_cast<double>(u128{1} << (pairs - keep));
  const double success = d / scale;
  ScoredSpace out{s, 0.0, success, 0.0};
  if (!(success > kMinStepSuccess)) {
    out.score = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.fidelity = num * scale / d;
  switch (obj.kind) {
    case Objective::Kind::fidelity:
      out.score = out.fidelity;
      break;
    case Objective::Kind::success:
      out.score = success;
      break;
    case Objective::Kind::fidelity_at_min_success:
      out.score = success >= obj.min_success
                      ? out.fidelity
                      : -std::numeric_limits<double>::infinity();
      break;
    case Objective::Kind::inverse_yield_proxy: {
      const double gain = (static_cast<double>(keep) * success /
                           static_cast<double>(pairs)) *
                          (1.0 - fidelity_in) /
                          std::max(1.0 - out.fidelity, 1e-15);
      out.score = std::log10(std::max(gain, 1e-300));
      break;
    }
  }
  return out;
}

}  // namespace detail

// Scores every (n-m)-dimensional isotropic subspace against the objective and
// returns the top candidates with fully recomputed step outcomes.
inline SearchReport best_step(const BellDiagonal& p, int pairs, int keep,
                              const Objective& obj,
                              const SearchOptions& opts = {}) {
  detail::check_step_shape(pairs, keep);
  if (opts.top_k < 1) throw std::invalid_argument("top_k must be positive");
  const int dim = pairs - keep;
  const u128 count = isotropic_subspace_count(pairs, dim);
  if (count > opts.max_candidates)
    throw std::length_error("candidate space has " + u128_to_string(count) +
                            " subspaces, above the configured bound of " +
                            std::to_string(opts.max_candidates));

  const auto t0 = std::chrono::steady_clock::now();
  const SVector sv = s_of_p(p);
  const double fidelity_in = p.fidelity();
  const auto ranges = search_partition(pairs, opts.shards);

  struct ShardResult {
    std::vector<detail::ScoredSpace> top;
    std::uint64_t evaluated = 0;
    double lo_score = std::numeric_limits<double>::infinity();
    double hi_score = -std::numeric_limits<double>::infinity();
  };
  std::vector<ShardResult> results(ranges.size());

  auto run_shard = [&](std::size_t idx) {
    const auto [lo, hi] = ranges[idx];
    ShardResult& res = results[idx];
    for_each_isotropic(pairs, dim, [&](const Subspace& s) {
      const u128 key = s.basis().front().value();
      if (key < lo || key >= hi) return;
      ++res.evaluated;
      detail::ScoredSpace scored =
          detail::score_subspace(s, p, sv, pairs, keep, obj, fidelity_in);
      if (std::isfinite(scored.score)) {
        res.lo_score = std::min(res.lo_score, scored.score);
        res.hi_score = std::max(res.hi_score, scored.score);
      }
      if (res.top.size() < static_cast<std::size_t>(opts.top_k) ||
          detail::search_better(scored, res.top.back())) {
        res.top.insert(std::upper_bound(res.top.begin(), res.top.end(), scored,
                                        detail::search_better),
                       std::move(scored));
        if (res.top.size() > static_cast<std::size_t>(opts.top_k))
          res.top.pop_back();
      }
    });
  };

  if (ranges.size() == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
      workers.emplace_back(run_shard, i);
    for (auto& w : workers) w.join();
  }

  std::vector<detail::ScoredSpace> merged;
  SearchReport report;
  double lo_score = std::numeric_limits<double>::infinity();
  double hi_score = -std::numeric_limits<double>::infinity();
  for (auto& res : results) {
    report.states_evaluated += res.evaluated;
    lo_score = std::min(lo_score, res.lo_score);
    hi_score = std::max(hi_score, res.hi_score);
    for (auto& entry : res.top) merged.push_back(std::move(entry));
  }
  std::sort(merged.begin(), merged.end(), detail::search_better);
  if (merged.size() > static_cast<std::size_t>(opts.top_k))
    merged.erase(merged.begin() + opts.top_k, merged.end());

  for (auto& entry : merged) {
    if (!std::isfinite(entry.score)) continue;
    DistillationStep step = make_step(pairs, keep, entry.s.basis());
    StepOutcome outcome = apply_step(p, step);
    report.best.push_back(SearchCandidate{std::move(entry.s), std::move(step),
                                          entry.score, std::move(outcome)});
  }
  if (report.best.empty())
    throw std::domain_error("no usable candidate step for this input state");
  report.degenerate_ties = report.states_evaluated >= 2 && lo_score == hi_score;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// "rank,score,success,S_row1,..." with bitstring rows.
inline std::string search_report_to_csv(const SearchReport& report) {
  std::string out = "rank,score,success";
  const int dim = report.best.empty() ? 0 : report.best.front().s.dim();
  for (int i = 1; i <= dim; ++i) out += ",S_row" + std::to_string(i);
  out += "\n";
  for (std::size_t i = 0; i < report.best.size(); ++i) {
    const SearchCandidate& c = report.best[i];
    out += std::to_string(i + 1) + "," + format_g12(c.score) + "," +
           format_g12(c.outcome.success);
    for (const auto& row : c.s.basis()) out += "," + row.str();
    out += "\n";
  }
  return out;
}

}  // namespace belldistil
