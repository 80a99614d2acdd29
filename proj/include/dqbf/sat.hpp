// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

namespace dqbf::sat {

// Literals at this interface are DIMACS-style nonzero ints over 1-based vars.
enum class Status { Sat, Unsat };

struct SolverStats {
  std::uint64_t solves = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

class Solver {
 public:
  explicit Solver(std::uint64_t seed = 0);

  int new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // Returns false once the problem clauses are unsatisfiable at the root.
  bool add_clause(const std::vector<int>& lits);
  Status solve(const std::vector<int>& assumptions = {});

  // Valid after Sat: total over all registered vars.
  bool model_value(int var) const { return model_[var - 1]; }
  std::vector<bool> model() const { return model_; }
  // Valid after Unsat: a subset of the assumptions that is already unsatisfiable.
  const std::vector<int>& core() const { return core_; }

  void set_phase(int var, bool value);
  void set_phase_saving(bool on) { phase_saving_ = on; }
  // Re-check every model and every core (expensive; used by tests).
  void set_self_check(bool on) { self_check_ = on; }

  const SolverStats& stats() const { return stats_; }
  std::size_t num_problem_clauses() const { return problem_clauses_.size(); }
  void write_dimacs(std::ostream& os) const;

 private:
  using L = std::uint32_t;  // internal literal: 2*var + sign
  static constexpr std::uint32_t kNoReason = 0xffffffffu;

  struct ClauseRec {
    std::vector<L> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    std::uint32_t cref;
    L blocker;
  };

  static L mk(int dimacs);
  static int to_dimacs(L l) { return (l & 1) ? -static_cast<int>((l >> 1) + 1) : static_cast<int>((l >> 1) + 1); }
  static std::uint32_t var(L l) { return l >> 1; }

  // 0 = true, 1 = false, 2 = undef
  std::uint8_t value(L l) const {
    std::uint8_t a = assigns_[var(l)];
    return a == 2 ? 2 : static_cast<std::uint8_t>(a ^ (l & 1));
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }

  std::uint32_t alloc_clause(std::vector<L> lits, bool learnt);
  void attach(std::uint32_t cr);
  void enqueue(L p, std::uint32_t reason);
  std::uint32_t propagate();
  void analyze(std::uint32_t confl, std::vector<L>& out, int& bt_level);
  void analyze_final(L p);
  void cancel_until(int lvl);
  L pick_branch();
  void bump_var(std::uint32_t v);
  void bump_clause(ClauseRec& c);
  void decay();
  void reduce_db();
  bool locked(std::uint32_t cr) const;
  // nullopt: budget exhausted, restart
  std::optional<Status> search(std::int64_t budget, const std::vector<L>& assumps);
  Status solve_internal(const std::vector<int>& assumptions);

  // heap over vars keyed by activity
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  std::uint32_t heap_pop();
  bool heap_less(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  std::vector<ClauseRec> clauses_;
  std::vector<std::uint32_t> free_crefs_;
  std::vector<std::uint32_t> problem_clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assigns_;
  std::vector<std::uint8_t> polarity_;  // saved phase: 1 = negative
  std::vector<std::uint32_t> reason_;
  std::vector<int> levels_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<L> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_index_;

  std::vector<bool> model_;
  std::vector<int> core_;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  bool ok_ = true;
  bool phase_saving_ = true;
  bool self_check_ = false;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
  SolverStats stats_;
};

}  // namespace dqbf::sat
