// SPDX-License-Identifier: MIT
#pragma once

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dqbf/dqdimacs.hpp"
#include "dqbf/formula.hpp"

namespace dqbf {

// Readable gtest failure messages.
inline void PrintTo(const VarSet& s, std::ostream* os) { *os << s.str(); }
inline void PrintTo(const Clause& c, std::ostream* os) { *os << c.str(); }

}  // namespace dqbf

namespace dqbf::testing {

struct RandomShape {
  int max_universals = 4;
  int max_existentials = 3;
  int max_clauses = 10;
  int max_width = 4;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Universals are 1..nu, existentials follow.
inline Prefix random_prefix(std::mt19937_64& rng, int nu, int ne) {
  Prefix p;
  for (int i = 1; i <= nu; ++i) p.add_universal(static_cast<Var>(i));
  for (int j = 1; j <= ne; ++j) {
    DependencySet d;
    for (int i = 1; i <= nu; ++i)
      if (uniform(rng, 0, 1)) d.insert(static_cast<Var>(i));
    p.add_existential(static_cast<Var>(nu + j), d);
  }
  return p;
}

inline Clause random_clause(std::mt19937_64& rng, int nvars, int width) {
  std::vector<Lit> lits;
  std::vector<Var> pool;
  for (int v = 1; v <= nvars; ++v) pool.push_back(static_cast<Var>(v));
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int k = 0; k < width && k < nvars; ++k) lits.push_back(Lit{pool[static_cast<std::size_t>(k)], uniform(rng, 0, 1) == 1});
  return Clause(std::move(lits));
}

inline Formula random_dqbf(std::mt19937_64& rng, const RandomShape& sh = {}) {
  int nu = uniform(rng, 1, sh.max_universals);
  int ne = uniform(rng, 1, sh.max_existentials);
  Formula f;
  f.prefix() = random_prefix(rng, nu, ne);
  f.reserve_var(static_cast<Var>(nu + ne));
  int m = uniform(rng, 1, sh.max_clauses);
  for (int i = 0; i < m; ++i) f.add_clause(random_clause(rng, nu + ne, uniform(rng, 1, sh.max_width)));
  return f;
}

// Alternating blocks; every existential depends on all earlier universals.
inline Formula random_qbf(std::mt19937_64& rng, int max_vars = 8, int max_clauses = 12, int max_width = 4) {
  int n = uniform(rng, 2, max_vars);
  Formula f;
  DependencySet seen;
  bool universal = uniform(rng, 0, 1) == 1;
  Var v = 1;
  while (static_cast<int>(v) <= n) {
    int block = uniform(rng, 1, 3);
    for (int k = 0; k < block && static_cast<int>(v) <= n; ++k, ++v) {
      if (universal) {
        f.prefix().add_universal(v);
        seen.insert(v);
      } else {
        f.prefix().add_existential(v, seen);
      }
    }
    universal = !universal;
  }
  f.reserve_var(static_cast<Var>(n));
  int m = uniform(rng, 1, max_clauses);
  for (int i = 0; i < m; ++i) f.add_clause(random_clause(rng, n, uniform(rng, 1, max_width)));
  return f;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Formula load(const std::string& path) {
  ParseResult r = parse_dqdimacs(read_file(path));
  if (!r.ok()) throw std::runtime_error(path + ": " + r.error());
  return *r.formula;
}

}  // namespace dqbf::testing
