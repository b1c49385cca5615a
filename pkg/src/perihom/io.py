"""JSON input formats: periodic complexes and cycle files.

Both documents are versioned under "schema": "perihom/1".  Coefficients
are integers over F_p and integers or "num/den" strings over the
rationals.  Input problems raise InputError with a message naming the
offending key; structural contract violations keep raising ContractError.
"""

from __future__ import annotations

import json

from .field import Field
from .complexes import ContractError
from .periodic import PeriodicComplex, QuotientComplex

SCHEMA = "perihom/1"


class InputError(Exception):
    pass


def _parse_field(doc) -> Field:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError('"field" must be {"kind": "Fp", "p": ...} or '
                         '{"kind": "Q"}')
    kind = doc["kind"]
    if kind == "Q":
        return Field("Q")
    if kind == "Fp":
        p = doc.get("p")
        if not isinstance(p, int):
            raise InputError('"field.p" must be a prime integer')
        try:
            return Field("Fp", p)
        except ValueError as e:
            raise InputError(str(e))
    raise InputError(f'unknown field kind {kind!r}')


def _parse_coeff(field: Field, raw):
    if field.kind == "Q":
        if not isinstance(raw, (str, int)):
            raise InputError(f"bad rational coefficient {raw!r}")
        try:
            return field.of(raw)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational coefficient {raw!r}: {e}")
    if not isinstance(raw, int):
        raise InputError(f"coefficient {raw!r} must be an integer over F_p")
    return field.of(raw)


def load_periodic(path: str) -> PeriodicComplex:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")
    return periodic_from_json(doc)


def periodic_from_json(doc) -> PeriodicComplex:
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object")
    schema = doc.get("schema")
    if schema is not None and schema != SCHEMA:
        raise InputError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    field = _parse_field(doc.get("field", {}))
    raw_cells = doc.get("cells")
    if not isinstance(raw_cells, list):
        raise InputError('"cells" must be a list of {"id", "dim"}')
    by_dim = {}
    seen = set()
    for c in raw_cells:
        if not isinstance(c, dict) or "id" not in c or "dim" not in c:
            raise InputError(f'bad cell entry {c!r}')
        cid, dim = c["id"], c["dim"]
        if not isinstance(cid, str) or not isinstance(dim, int) or dim < 0:
            raise InputError(f'bad cell entry {c!r}')
        if cid in seen:
            raise InputError(f"duplicate cell id {cid!r}")
        seen.add(cid)
        by_dim.setdefault(dim, []).append(cid)
    top = max(by_dim) if by_dim else -1
    cells = [tuple(by_dim.get(k, ())) for k in range(top + 1)]
    entries = {}
    for b in doc.get("boundary", []):
        if not isinstance(b, dict) or "cell" not in b:
            raise InputError(f'bad boundary entry {b!r}')
        cid = b["cell"]
        if cid not in seen:
            raise InputError(f'boundary of unknown cell {cid!r}')
        es = []
        for e in b.get("entries", []):
            if not isinstance(e, dict) or "cell" not in e:
                raise InputError(f'bad boundary term {e!r} of {cid!r}')
            face = e["cell"]
            if face not in seen:
                raise InputError(
                    f'boundary of {cid!r} references unknown cell {face!r}')
            shift = e.get("shift", 0)
            if not isinstance(shift, int):
                raise InputError(f'bad shift {shift!r} on {cid!r}')
            es.append((face, shift, _parse_coeff(field, e.get("coeff", 1))))
        entries[cid] = tuple(es)
    filtration = None
    if "filtration" in doc:
        filtration = doc["filtration"]
        if not isinstance(filtration, dict):
            raise InputError('"filtration" must be {cell id: integer step}')
        for cid, step in filtration.items():
            if cid not in seen:
                raise InputError(f'filtration of unknown cell {cid!r}')
            if not isinstance(step, int):
                raise InputError(f'filtration step of {cid!r} must be an '
                                 'integer')
        missing = seen - set(filtration)
        if missing:
            raise InputError(
                f'filtration missing cells: {sorted(missing)[:3]}')
    try:
        return PeriodicComplex.build(field, cells, entries, filtration)
    except ContractError as e:
        raise InputError(str(e))


def load_cycle(path: str, g: QuotientComplex):
    """A chain of G_n from {"degree", "chain": [{"cell","copy","coeff"}]}."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")
    if not isinstance(doc, dict) or "degree" not in doc:
        raise InputError('cycle file must be {"degree": k, "chain": [...]}')
    degree = doc["degree"]
    F = g.complex.field
    if not isinstance(degree, int) or not 0 <= degree <= g.complex.max_degree:
        raise InputError(f"bad cycle degree {degree!r}")
    idx = g.complex.cell_index(degree)
    vec = [F.zero] * g.complex.n_cells(degree)
    for term in doc.get("chain", []):
        if not isinstance(term, dict) or "cell" not in term:
            raise InputError(f"bad chain term {term!r}")
        cid = g.cell_id(term["cell"], int(term.get("copy", 0)))
        if cid not in idx:
            raise InputError(f'chain term {term!r} names no cell of the '
                             'quotient at this degree')
        c = _parse_coeff(F, term.get("coeff", 1))
        vec[idx[cid]] = F.add(vec[idx[cid]], c)
    return degree, tuple(vec)


def periodic_to_json(p: PeriodicComplex) -> dict:
    cells = [{"id": cid, "dim": k}
             for k, cs in enumerate(p.cells) for cid in cs]
    boundary = []
    for cs in p.cells:
        for cid in cs:
            es = p.entries.get(cid, ())
            if es:
                boundary.append({"cell": cid, "entries": [
                    {"cell": f, "shift": s,
                     "coeff": p.field.scalar_to_json(c)}
                    for f, s, c in es]})
    doc = {"schema": SCHEMA, "field": p.field.to_json(),
           "cells": cells, "boundary": boundary}
    if p.filtration is not None:
        doc["filtration"] = dict(p.filtration)
    return doc
