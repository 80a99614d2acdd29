// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dqbf/formula.hpp"

namespace dqbf {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Expansion {
  // (existential, bits of the universal assignment restricted to its
  // dependencies, in ascending universal order) -> propositional variable
  std::map<std::pair<Var, std::uint64_t>, int> copies;
  std::vector<std::vector<int>> clauses;
  int num_vars = 0;
};

Expansion expand(const Formula& f, std::size_t max_universals = 6);
bool oracle_solve(const Formula& f, std::size_t max_universals = 6);

// Plain recursive evaluation for prefixes whose dependency sets form a chain.
bool game_tree_eval(const Formula& f);
bool is_linear(const Prefix& prefix);

}  // namespace dqbf
