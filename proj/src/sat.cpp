// SPDX-License-Identifier: MIT
#include "dqbf/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace dqbf::sat {

namespace {

constexpr std::uint32_t kUndefLit = 0xffffffffu;

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

Solver::Solver(std::uint64_t seed) : rng_(seed), seed_(seed) {}

Solver::L Solver::mk(int d) {
  std::uint32_t v = static_cast<std::uint32_t>(std::abs(d)) - 1;
  return 2 * v + (d < 0 ? 1 : 0);
}

int Solver::new_var() {
  std::uint32_t v = static_cast<std::uint32_t>(assigns_.size());
  assigns_.push_back(2);
  polarity_.push_back(1);
  reason_.push_back(kNoReason);
  levels_.push_back(0);
  double a = 0;
  if (seed_ != 0) a = std::uniform_real_distribution<double>(0.0, 1e-5)(rng_);
  activity_.push_back(a);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_index_.push_back(-1);
  model_.push_back(false);
  heap_insert(v);
  return static_cast<int>(v) + 1;
}

void Solver::set_phase(int var, bool value) { polarity_.at(var - 1) = value ? 0 : 1; }

std::uint32_t Solver::alloc_clause(std::vector<L> lits, bool learnt) {
  std::uint32_t cr;
  if (!free_crefs_.empty()) {
    cr = free_crefs_.back();
    free_crefs_.pop_back();
    clauses_[cr] = ClauseRec{};
  } else {
    cr = static_cast<std::uint32_t>(clauses_.size());
    clauses_.emplace_back();
  }
  clauses_[cr].lits = std::move(lits);
  clauses_[cr].learnt = learnt;
  return cr;
}

void Solver::attach(std::uint32_t cr) {
  const auto& c = clauses_[cr].lits;
  watches_[c[0] ^ 1].push_back({cr, c[1]});
  watches_[c[1] ^ 1].push_back({cr, c[0]});
}

bool Solver::add_clause(const std::vector<int>& in) {
  if (!ok_) return false;
  std::vector<L> lits;
  lits.reserve(in.size());
  for (int d : in) {
    if (d == 0 || std::abs(d) > num_vars()) throw std::out_of_range("sat: literal out of range");
    lits.push_back(mk(d));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<L> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && (lits[i] ^ 1) == lits[i + 1]) return true;  // tautology
    std::uint8_t v = value(lits[i]);
    if (v == 0 && levels_[var(lits[i])] == 0) return true;
    if (v == 1 && levels_[var(lits[i])] == 0) continue;
    kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  std::uint32_t cr = alloc_clause(std::move(kept), false);
  problem_clauses_.push_back(cr);
  attach(cr);
  return true;
}

void Solver::enqueue(L p, std::uint32_t reason) {
  std::uint32_t v = var(p);
  assigns_[v] = static_cast<std::uint8_t>(p & 1);
  reason_[v] = reason;
  levels_[v] = level();
  trail_.push_back(p);
}

std::uint32_t Solver::propagate() {
  std::uint32_t confl = kNoReason;
  while (qhead_ < trail_.size()) {
    L p = trail_[qhead_++];
    L false_lit = p ^ 1;
    auto& ws = watches_[p];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == 0) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseRec& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      auto& lits = c.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      L first = lits[0];
      Watcher nw{w.cref, first};
      if (first != w.blocker && value(first) == 0) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != 1) {
          lits[1] = lits[k];
          lits[k] = false_lit;
          watches_[lits[1] ^ 1].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == 1) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

void Solver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(ClauseRec& c) {
  c.activity += cla_inc_;
  if (c.activity > 1e20) {
    for (auto cr : learnts_) clauses_[cr].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::decay() {
  var_inc_ /= 0.95;
  cla_inc_ /= 0.999;
}

void Solver::analyze(std::uint32_t confl, std::vector<L>& out, int& bt_level) {
  int path = 0;
  L p = kUndefLit;
  out.clear();
  out.push_back(kUndefLit);
  std::size_t index = trail_.size();
  do {
    ClauseRec& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = (p == kUndefLit ? 0 : 1); k < c.lits.size(); ++k) {
      L q = c.lits[k];
      std::uint32_t v = var(q);
      if (!seen_[v] && levels_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (levels_[v] >= level())
          ++path;
        else
          out.push_back(q);
      }
    }
    while (!seen_[var(trail_[--index])]) {
    }
    p = trail_[index];
    confl = reason_[var(p)];
    seen_[var(p)] = 0;
    --path;
  } while (path > 0);
  out[0] = p ^ 1;

  std::vector<L> to_clear(out.begin() + 1, out.end());
  std::size_t keep = 1;
  for (std::size_t k = 1; k < out.size(); ++k) {
    std::uint32_t v = var(out[k]);
    std::uint32_t r = reason_[v];
    bool redundant = r != kNoReason;
    if (redundant) {
      const auto& rl = clauses_[r].lits;
      for (std::size_t m = 1; m < rl.size(); ++m) {
        std::uint32_t u = var(rl[m]);
        if (!seen_[u] && levels_[u] > 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) out[keep++] = out[k];
  }
  out.resize(keep);
  for (L q : to_clear) seen_[var(q)] = 0;

  bt_level = 0;
  if (out.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < out.size(); ++k)
      if (levels_[var(out[k])] > levels_[var(out[max_i])]) max_i = k;
    std::swap(out[1], out[max_i]);
    bt_level = levels_[var(out[1])];
  }
}

void Solver::analyze_final(L p) {
  core_.clear();
  core_.push_back(to_dimacs(p));
  if (level() == 0) return;
  seen_[var(p)] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    std::uint32_t v = var(trail_[i]);
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      core_.push_back(to_dimacs(trail_[i]));
    } else {
      const auto& rl = clauses_[reason_[v]].lits;
      for (std::size_t m = 1; m < rl.size(); ++m)
        if (levels_[var(rl[m])] > 0) seen_[var(rl[m])] = 1;
    }
    seen_[v] = 0;
  }
  seen_[var(p)] = 0;
  std::sort(core_.begin(), core_.end());
  core_.erase(std::unique(core_.begin(), core_.end()), core_.end());
}

void Solver::cancel_until(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    std::uint32_t v = var(trail_[i]);
    assigns_[v] = 2;
    reason_[v] = kNoReason;
    if (phase_saving_) polarity_[v] = static_cast<std::uint8_t>(trail_[i] & 1);
    if (heap_index_[v] < 0) heap_insert(v);
  }
  qhead_ = trail_lim_[lvl];
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
}

Solver::L Solver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (assigns_[v] == 2) return 2 * v + polarity_[v];
  }
  return kUndefLit;
}

bool Solver::locked(std::uint32_t cr) const {
  const auto& c = clauses_[cr].lits;
  return reason_[var(c[0])] == cr && value(c[0]) == 0;
}

void Solver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& ca = clauses_[a];
    const auto& cb = clauses_[b];
    if ((ca.lits.size() > 2) != (cb.lits.size() > 2)) return ca.lits.size() > 2;
    return ca.activity < cb.activity;
  });
  std::size_t half = learnts_.size() / 2;
  std::vector<std::uint32_t> kept;
  bool any = false;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    std::uint32_t cr = learnts_[i];
    ClauseRec& c = clauses_[cr];
    if (i < half && c.lits.size() > 2 && !locked(cr)) {
      c.deleted = true;
      any = true;
    } else {
      kept.push_back(cr);
    }
  }
  learnts_ = std::move(kept);
  if (!any) return;
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
             ws.end());
  for (std::uint32_t cr = 0; cr < clauses_.size(); ++cr) {
    if (clauses_[cr].deleted && !clauses_[cr].lits.empty()) {
      clauses_[cr].lits.clear();
      clauses_[cr].lits.shrink_to_fit();
      free_crefs_.push_back(cr);
    }
  }
}

void Solver::heap_insert(std::uint32_t v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  std::uint32_t v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

std::uint32_t Solver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_index_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

std::optional<Status> Solver::search(std::int64_t budget, const std::vector<L>& assumps) {
  std::int64_t conflicts = 0;
  std::vector<L> learnt;
  for (;;) {
    std::uint32_t confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++conflicts;
      if (level() == 0) {
        ok_ = false;
        core_.clear();
        return Status::Unsat;
      }
      int bt = 0;
      analyze(confl, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        std::uint32_t cr = alloc_clause(learnt, true);
        learnts_.push_back(cr);
        attach(cr);
        bump_clause(clauses_[cr]);
        enqueue(learnt[0], cr);
      }
      decay();
      continue;
    }
    if (conflicts >= budget) {
      cancel_until(0);
      return std::nullopt;
    }
    if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size()))
      reduce_db();
    L next = kUndefLit;
    while (static_cast<std::size_t>(level()) < assumps.size()) {
      L a = assumps[static_cast<std::size_t>(level())];
      std::uint8_t v = value(a);
      if (v == 0) {
        trail_lim_.push_back(trail_.size());
      } else if (v == 1) {
        analyze_final(a);
        return Status::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (next == kUndefLit) {
      next = pick_branch();
      if (next == kUndefLit) return Status::Sat;
      ++stats_.decisions;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(next, kNoReason);
  }
}

Status Solver::solve_internal(const std::vector<int>& assumptions) {
  core_.clear();
  if (!ok_) return Status::Unsat;
  std::vector<L> assumps;
  for (int d : assumptions) {
    if (d == 0 || std::abs(d) > num_vars()) throw std::out_of_range("sat: assumption out of range");
    assumps.push_back(mk(d));
  }
  if (max_learnts_ == 0)
    max_learnts_ = std::max(1000.0, static_cast<double>(problem_clauses_.size()) / 3.0);
  for (int restart = 0;; ++restart) {
    std::int64_t budget = static_cast<std::int64_t>(luby(2.0, restart) * 100);
    std::optional<Status> st = search(budget, assumps);
    if (!st) {
      ++stats_.restarts;
      max_learnts_ *= 1.05;
      continue;
    }
    if (*st == Status::Sat)
      for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == 0;
    cancel_until(0);
    return *st;
  }
}

Status Solver::solve(const std::vector<int>& assumptions) {
  ++stats_.solves;
  Status st = solve_internal(assumptions);
  if (!self_check_) return st;
  if (st == Status::Sat) {
    for (std::uint32_t cr : problem_clauses_) {
      bool sat = false;
      for (L l : clauses_[cr].lits) sat = sat || (model_[var(l)] != static_cast<bool>(l & 1));
      if (!sat) throw std::logic_error("sat: model violates a clause");
    }
    for (int a : assumptions)
      if (model_value(std::abs(a)) != (a > 0)) throw std::logic_error("sat: model violates an assumption");
  } else if (!assumptions.empty()) {
    std::vector<int> core = core_;
    for (int c : core)
      if (std::find(assumptions.begin(), assumptions.end(), c) == assumptions.end())
        throw std::logic_error("sat: core is not a subset of the assumptions");
    std::vector<bool> saved_model = model_;
    if (solve_internal(core) != Status::Unsat) throw std::logic_error("sat: core is satisfiable");
    core_ = core;
    model_ = saved_model;
  }
  return st;
}

void Solver::write_dimacs(std::ostream& os) const {
  std::size_t units = 0;
  for (L l : trail_)
    if (levels_[var(l)] == 0) ++units;
  os << "p cnf " << num_vars() << ' ' << (problem_clauses_.size() + units + (ok_ ? 0 : 1)) << '\n';
  for (L l : trail_)
    if (levels_[var(l)] == 0) os << to_dimacs(l) << " 0\n";
  for (std::uint32_t cr : problem_clauses_) {
    for (L l : clauses_[cr].lits) os << to_dimacs(l) << ' ';
    os << "0\n";
  }
  if (!ok_) os << "0\n";
}

}  // namespace dqbf::sat
