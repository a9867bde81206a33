"""Shared helpers for randomized residual-path experiments.

The two residual-path push properties are tested by construction: pick the protected set
so the preconditions hold by definition of residual reachability, push a
random flow with the stated terminal role, and check the protected set
is still unreachable.
"""

import random

from planarflow.flow import FlowStore
from planarflow.solvers import (
    limited_max_flow,
    msss_max_flow,
    solve_msms_residual,
    ssms_max_flow,
)


def random_digraph(rng, n, density=0.5, cap_max=9):
    arcs = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                arcs.append((u, v, rng.randint(0, cap_max)))
    return arcs


def keyed(store, arcs):
    return [(t, h, c, store.new_key(c)) for (t, h, c) in arcs]


def reach(n, keyed_arcs, store, start):
    """Residual forward reachability over keyed arcs."""
    adj = [[] for _ in range(n)]
    for (t, h, c, key) in keyed_arcs:
        f = store.vals[key]
        if c - f > 0:
            adj[t].append(h)
        if f > 0:
            adj[h].append(t)
    seen = set(start)
    stack = list(start)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def scramble_flow(n, arcs_keyed, store, rng, rounds=2):
    """Push a few random feasible flows to create residual texture."""
    for _ in range(rounds):
        nodes = list(range(n))
        rng.shuffle(nodes)
        a = rng.randint(1, max(1, n // 3))
        b = rng.randint(1, max(1, n // 3))
        srcs, snks = set(nodes[:a]), set(nodes[a:a + b])
        if not srcs or not snks:
            continue
        _, deltas = solve_msms_residual(n, arcs_keyed, store, srcs, snks)
        store.apply(deltas)


def source_push_trial(rng):
    """One trial of: pushing a flow whose sources cannot reach a protected
    set (and neither can the observers) keeps the set unreachable.

    Returns True if the property held, None if the preconditions could
    not be constructed for this sample.
    """
    n = rng.randint(4, 20)
    arcs = random_digraph(rng, n)
    if not arcs:
        return None
    store = FlowStore()
    ka = keyed(store, arcs)
    scramble_flow(n, ka, store, rng)

    nodes = list(range(n))
    rng.shuffle(nodes)
    x_count = rng.randint(1, max(1, n // 4))
    a_count = rng.randint(1, max(1, n // 4))
    push_sources = set(nodes[:x_count])
    observers = set(nodes[x_count:x_count + a_count])
    blocked = [v for v in range(n)
               if v not in reach(n, ka, store, push_sources | observers)]
    if not blocked:
        return None
    protected = set(rng.sample(blocked, rng.randint(1, len(blocked))))

    sink_pool = [v for v in range(n) if v not in push_sources]
    push_sinks = set(rng.sample(sink_pool, rng.randint(1, max(1, len(sink_pool) // 2))))
    _, deltas = solve_msms_residual(n, ka, store, push_sources, push_sinks)
    store.apply(deltas)
    return not (reach(n, ka, store, observers) & protected)


class FuzzPool:
    """Pool of small parsed instances reused across fuzz sequences."""

    def __init__(self, count=64, n_lo=4, n_hi=10, seed=12345):
        from planarflow.generate import generate

        rng = random.Random(seed)
        self.entries = []
        for i in range(count):
            kind = "tri" if i % 2 == 0 else "grid"
            n = rng.randint(n_lo, n_hi)
            inst = generate(kind, n, seed=seed + i, cap_max=9,
                            s_frac=0.3, t_frac=0.3)
            g, ts = inst.build()
            arcs = [(g.tails[a], g.heads[a], g.caps[a], a) for a in range(g.m)]
            self.entries.append((g, arcs, sorted(ts.sources), sorted(ts.sinks)))


def fuzz_sequence(pool, rng, ops_lo=2, ops_hi=4):
    """Run one random public-operation sequence on a pooled instance.

    Every operation draws its terminals from the instance's source and
    sink sets, so the accumulated flow must stay a feasible flow for
    them.  Antisymmetry and the pseudoflow bounds are checked after
    every operation; feasibility at the end.  Returns the number of
    violations (0 for a clean sequence).
    """
    g, arcs, sources, sinks = pool.entries[rng.randrange(len(pool.entries))]
    store = FlowStore.for_graph(g)
    caps = store.caps
    violations = 0

    def check_invariants():
        nonlocal violations
        for key, v in enumerate(store.vals):
            if v < 0 or v > caps[key]:
                violations += 1
        for d in range(2 * g.m):
            if store.dart_flow(g, d) + store.dart_flow(g, d ^ 1) != 0:
                violations += 1

    for _ in range(rng.randint(ops_lo, ops_hi)):
        choice = rng.randrange(4)
        if choice == 0:
            srcs = set(rng.sample(sources, rng.randint(1, len(sources))))
            t = rng.choice(sinks)
            _, deltas = msss_max_flow(g.n, arcs, store, srcs, t)
        elif choice == 1:
            s = rng.choice(sources)
            snks = set(rng.sample(sinks, rng.randint(1, len(sinks))))
            _, deltas = ssms_max_flow(g.n, arcs, store, s, snks)
        elif choice == 2:
            s = rng.choice(sources)
            t = rng.choice(sinks)
            _, deltas = limited_max_flow(g.n, arcs, store, s, t, rng.randint(0, 12))
        else:
            _, deltas = solve_msms_residual(g.n, arcs, store, set(sources), set(sinks))
        store.apply(deltas)
        check_invariants()

    from planarflow.flow import is_feasible
    if not is_feasible(g, store, set(sources), set(sinks)):
        violations += 1
    return violations


def sink_push_trial(rng):
    """Mirror trial: pushing a flow whose sinks the observers cannot reach
    keeps every already-unreachable set unreachable."""
    n = rng.randint(4, 20)
    arcs = random_digraph(rng, n)
    if not arcs:
        return None
    store = FlowStore()
    ka = keyed(store, arcs)
    scramble_flow(n, ka, store, rng)

    nodes = list(range(n))
    rng.shuffle(nodes)
    a_count = rng.randint(1, max(1, n // 4))
    observers = set(nodes[:a_count])
    seen = reach(n, ka, store, observers)
    outside = [v for v in range(n) if v not in seen]
    if len(outside) < 2:
        return None
    rng.shuffle(outside)
    x_count = rng.randint(1, len(outside) - 1)
    push_sinks = set(outside[:x_count])
    protected = set(outside[x_count:])

    source_pool = [v for v in range(n) if v not in push_sinks]
    push_sources = set(rng.sample(source_pool,
                                  rng.randint(1, max(1, len(source_pool) // 2))))
    _, deltas = solve_msms_residual(n, ka, store, push_sources, push_sinks)
    store.apply(deltas)
    return not (reach(n, ka, store, observers) & protected)
