#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
"""Writes small partial-equivalence-checking DQBF instances.

A random specification circuit over universal inputs is compared against a
copy in which some gates are black boxes: existentials that see only a subset
of the inputs. The instance is true iff the black boxes can be filled in.
"""
import argparse
import pathlib
import random

GATES = ("and", "or", "xor")


def tseitin(kind, g, a, b):
    if kind == "and":
        return [[-g, a], [-g, b], [g, -a, -b]]
    if kind == "or":
        return [[g, -a], [g, -b], [-g, a, b]]
    return [[-g, a, b], [-g, -a, -b], [g, -a, b], [g, a, -b]]


def instance(rng, max_vars):
    while True:
        n_in = rng.randint(2, 3)
        n_gates = rng.randint(2, 3)
        gates = []
        for i in range(n_gates):
            signals = n_in + i
            a, b = rng.sample(range(signals), 2)
            gates.append((rng.choice(GATES), a, b))
        n_bb = rng.randint(1, min(2, n_gates))
        boxes = set(rng.sample(range(n_gates), n_bb))
        if n_in + 2 * n_gates <= max_vars:
            break

    inputs = list(range(1, n_in + 1))
    nxt = n_in + 1
    spec = []
    for _ in gates:
        spec.append(nxt)
        nxt += 1
    impl = []
    box_vars = {}
    for i, _ in enumerate(gates):
        impl.append(nxt)
        if i in boxes:
            box_vars[i] = nxt
        nxt += 1
    nvars = nxt - 1

    def cone(i):
        _, a, b = gates[i]
        out = set()
        for s in (a, b):
            out |= {s} if s < n_in else cone(s - n_in)
        return out

    clauses = []
    sig_spec = lambda s: inputs[s] if s < n_in else spec[s - n_in]
    sig_impl = lambda s: inputs[s] if s < n_in else impl[s - n_in]
    for i, (kind, a, b) in enumerate(gates):
        clauses += tseitin(kind, spec[i], sig_spec(a), sig_spec(b))
        if i not in boxes:
            clauses += tseitin(kind, impl[i], sig_impl(a), sig_impl(b))
    o_s, o_i = spec[-1], impl[-1]
    clauses += [[-o_s, o_i], [o_s, -o_i]]

    deps = {}
    for i, v in box_vars.items():
        c = sorted(cone(i))
        if rng.random() < 0.5 and len(c) > 1:
            c = sorted(rng.sample(c, len(c) - 1))
        deps[v] = [inputs[s] for s in c]

    lines = ["c pec %d inputs, %d gates, %d black boxes" % (n_in, n_gates, n_bb),
             "p cnf %d %d" % (nvars, len(clauses)),
             "a " + " ".join(map(str, inputs)) + " 0"]
    for v in range(n_in + 1, nvars + 1):
        d = deps.get(v, inputs)
        lines.append("d %d %s0" % (v, "".join("%d " % x for x in d)))
    lines += [" ".join(map(str, c)) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2018)
    ap.add_argument("--max-vars", type=int, default=12)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        (out / ("pec_%02d.dqdimacs" % k)).write_text(instance(rng, args.max_vars))


if __name__ == "__main__":
    main()
