// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dqbf/formula.hpp"

namespace dqbf {

struct ClausePoset {
  std::vector<DependencySet> elements;  // distinct, sorted
  std::vector<DependencySet> maximal;   // sorted
  bool has_fork() const { return maximal.size() > 1; }
};

struct DependencyCycle {
  std::vector<Lit> literals;                  // l_1 .. l_k
  std::vector<DependencySet> intersections;   // I_i = dep(l_i) ∩ dep(l_{i+1 mod k})
  std::string str() const;
};

class CycleError : public std::runtime_error {
 public:
  explicit CycleError(DependencyCycle c);
  const DependencyCycle& cycle() const { return cycle_; }

 private:
  DependencyCycle cycle_;
};

ClausePoset clause_poset(const Clause& c, const Prefix& prefix);
bool has_fork(const Clause& c, const Prefix& prefix);

// Searches cycles over the distinct dependency sets of C's existential
// literals. When there are more than `limit` of them the search is skipped
// and *truncated is set.
std::optional<DependencyCycle> find_dependency_cycle(const Clause& c, const Prefix& prefix,
                                                     std::size_t limit = 16, bool* truncated = nullptr);

// The unique-H* construction, without consulting the cycle search.
std::optional<std::pair<Clause, Clause>> unique_meet_split(const Clause& c, const Prefix& prefix);
std::optional<std::pair<Clause, Clause>> choose_split(const Clause& c, const Prefix& prefix);

struct ExtensionResult {
  Clause first;
  Clause second;
  DependencySet dep;
};

ExtensionResult fork_extension(const Clause& c1, const Clause& c2, Var fresh, const Prefix& prefix);
ExtensionResult strong_fork_extension(const Clause& c1, const Clause& c2, const Clause& cx, Var fresh,
                                      const Prefix& prefix);

struct ForkElimination {
  std::vector<Clause> clauses;
  std::vector<std::pair<Var, DependencySet>> new_vars;
  std::size_t fex_steps = 0;
  std::size_t sfex_steps = 0;
};

// Rewrites C into fork-free, universally reduced clauses. Fresh variables are
// drawn from `fresh` and added to the prefix as they are created.
ForkElimination eliminate_forks(const Clause& c, Prefix& prefix, const std::function<Var()>& fresh,
                                bool strong_enabled = true);

bool is_multi_linear(const Prefix& prefix);

}  // namespace dqbf
