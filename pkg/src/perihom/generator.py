"""Seeded random periodic complexes for the property suites.

Random instances are 1-dimensional (periodic graphs): the twisted
boundary-squared condition is vacuous there, so every draw is a valid
complex, which keeps the suites assumption-free.  Filtrations are drawn
monotone by construction.
"""

from __future__ import annotations

import random

from .field import Field
from .periodic import PeriodicComplex


def random_periodic_graph(rng: random.Random, field: Field,
                          max_vertices: int = 5, max_edges: int = 7,
                          max_shift: int = 1) -> PeriodicComplex:
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(0, max_edges)
    vs = [f"v{i}" for i in range(nv)]
    es = [f"e{i}" for i in range(ne)]
    entries = {}
    for e in es:
        a = rng.choice(vs)
        b = rng.choice(vs)
        sa = rng.randint(0, max_shift)
        sb = rng.randint(0, max_shift)
        ca = _unit(rng, field)
        # over Q keep the boundary a difference so degree-0 sums behave
        cb = field.neg(ca) if field.kind == "Q" else _unit(rng, field)
        entries[e] = ((a, sa, ca), (b, sb, cb))
    return PeriodicComplex.build(field, [vs, es], entries)


def random_filtration(rng: random.Random, p: PeriodicComplex,
                      max_steps: int = 3) -> PeriodicComplex:
    """A monotone t-invariant filtration: faces never born after cofaces."""
    steps = {}
    for v in p.cells[0]:
        steps[v] = rng.randint(1, max_steps)
    for k in range(1, len(p.cells)):
        for c in p.cells[k]:
            floor = max((steps[f] for f, _, x in p.entries[c]
                         if x != p.field.zero), default=1)
            steps[c] = rng.randint(floor, max(floor, max_steps))
    return PeriodicComplex.build(p.field, p.cells, p.entries, steps)


def random_matrix(rng: random.Random, field: Field, rows: int, cols: int):
    from .linalg import Matrix
    if field.kind == "Fp":
        data = tuple(tuple(rng.randrange(field.p) for _ in range(cols))
                     for _ in range(rows))
    else:
        data = tuple(tuple(field.of(rng.randint(-3, 3))
                           for _ in range(cols)) for _ in range(rows))
    return Matrix(field, rows, cols, data)


def _unit(rng: random.Random, field: Field):
    if field.kind == "Fp":
        return rng.randrange(1, field.p)
    return field.of(rng.choice([-2, -1, 1, 2]))
