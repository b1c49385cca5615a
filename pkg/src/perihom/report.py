"""Report assembly and rendering.

Reports are plain dicts with a fixed key insertion order, so identical
inputs and flags produce byte-identical JSON.  The text renderer walks
the same dict, so both formats always agree on content.
"""

from __future__ import annotations

import hashlib
import json

from .field import Field
from .linalg import Matrix, Subspace
from .complexes import CellComplex, HomologyBasis
from .io import SCHEMA
from .monodromy import MonodromySet
from .periodic import NormalizedPeriodic, QuotientComplex
from .persistence import FiltrationAnalysis, UnimodalityReport
from .toroidal import StripImage, ToroidalReport, ToroidalVerdict


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def matrix_json(m: Matrix):
    return [[m.field.scalar_to_json(x) for x in row] for row in m.data]


def subspace_json(s: Subspace):
    return {"ambient_dim": s.ambient_dim, "dim": s.dim,
            "basis": matrix_json(s.basis)}


def chain_json(field: Field, cells, vec):
    """Sparse {cell id: coeff} view of a chain in the given cell order."""
    return {cid: field.scalar_to_json(x)
            for cid, x in zip(cells, vec) if x != field.zero}


def homology_json(h: HomologyBasis) -> dict:
    c = h.complex
    out = {"betti": list(h.betti_vector), "representatives": {}}
    for k in range(c.max_degree + 1):
        reps = [chain_json(c.field, c.cells[k], col)
                for col in h.rep(k).columns()]
        if reps:
            out["representatives"][str(k)] = reps
    return out


def header(command: str, path: str, np_: NormalizedPeriodic | None) -> dict:
    doc = {"schema": SCHEMA, "command": command,
           "input": {"path": path, "sha256": file_digest(path)}}
    if np_ is not None:
        doc["field"] = np_.complex.field.to_json()
        doc["normalization"] = {"r": np_.coarsening}
    return doc


def monodromy_json(ms: MonodromySet, degree=None,
                   emit_matrices: bool = False) -> dict:
    out = {"U_homology": homology_json(ms.hU),
           "V_homology": homology_json(ms.hV),
           "degrees": {}}
    for q in sorted(ms.degrees):
        if degree is not None and q != degree:
            continue
        dm = ms.degrees[q]
        d = {"dim_V": dm.M_V.rows, "dim_U": dm.M_U.rows,
             "gim_V": subspace_json(dm.analysis_V.gim),
             "gker_V": subspace_json(dm.analysis_V.gker),
             "gim_U": subspace_json(dm.analysis_U.gim),
             "gker_U": subspace_json(dm.analysis_U.gker),
             "stabilization_exponent_V":
                 dm.analysis_V.stabilization_exponent,
             "degenerate_complements": dm.degenerate_complements,
             "diagnostics": list(dm.diagnostics)}
        if emit_matrices:
            d["i"] = matrix_json(dm.i)
            d["j"] = matrix_json(dm.j)
            d["M_V"] = matrix_json(dm.M_V)
            d["Mt_V"] = matrix_json(dm.Mt_V)
            d["M_U"] = matrix_json(dm.M_U)
            d["Mt_U"] = matrix_json(dm.Mt_U)
        out["degrees"][str(q)] = d
    return out


def toroidal_json(rep: ToroidalReport, g: QuotientComplex) -> dict:
    F = g.complex.field
    out = {"n": rep.n, "strip_length": rep.strip_image.stabilized_at,
           "degrees": {}}
    for d in rep.degrees:
        entry = {"dim_H": d.h_dim, "dim_nontoroidal": d.nontoroidal_dim,
                 "dim_toroidal": d.toroidal_dim,
                 "dim_gim_V_below": d.gim_V_dim,
                 "dim_gim_U_below": d.gim_U_dim,
                 "phi1_iso": d.phi1_iso}
        if d.phi3 is not None:
            entry["phi3"] = matrix_json(d.phi3)
        if d.phi4 is not None:
            entry["phi4"] = matrix_json(d.phi4)
        out["degrees"][str(d.degree)] = entry
    if rep.representatives:
        out["representatives"] = {
            str(k): [chain_json(F, g.complex.cells[k], ch) for ch in reps]
            for k, reps in sorted(rep.representatives.items())}
        out["winding"] = {str(k): list(v)
                          for k, v in sorted(rep.winding.items())}
    return out


def verdict_json(v: ToroidalVerdict, field: Field) -> dict:
    return {"toroidal": v.toroidal,
            "class_vector": [field.scalar_to_json(x)
                             for x in v.class_vector],
            "in_strip_image": v.in_strip_image,
            "vtrace_gim_component": [field.scalar_to_json(x)
                                     for x in v.vtrace_gim],
            "certificates_agree": v.agree}


def persistence_json(fa: FiltrationAnalysis, uni: UnimodalityReport,
                     timeline, emit_matrices: bool = False) -> dict:
    F = fa.steps[0].window.U.field
    out = {"steps": list(fa.step_values()), "per_step": {}}
    for st in fa.steps:
        entry = {"V_betti": list(st.monodromy.hV.betti_vector),
                 "U_betti": list(st.monodromy.hU.betti_vector),
                 "gim_V_dims": {str(q): dm.analysis_V.gim.dim
                                for q, dm in sorted(
                                    st.monodromy.degrees.items())}}
        if emit_matrices:
            entry["M_V"] = {str(q): matrix_json(dm.M_V)
                            for q, dm in sorted(
                                st.monodromy.degrees.items())}
        out["per_step"][str(st.step)] = entry
    if emit_matrices:
        out["iota"] = {
            f"{fa.steps[k].step},{fa.steps[l].step}": {
                str(q): matrix_json(m) for q, m in sorted(maps.items())}
            for (k, l), maps in sorted(fa.iota.items()) if k != l}
    out["commutation_log"] = [
        {"from_step": a, "to_step": b, "degree": q, "holds": h}
        for a, b, q, h in fa.commutation_log]
    out["unimodality"] = {
        "unimodal": uni.unimodal,
        "violations": [
            {"side": s, "degree": q, "steps": [a, b, c],
             "dims": [dl, dm_]}
            for s, q, a, b, c, dl, dm_ in uni.violations]}
    out["timeline"] = [
        {"degree": e.degree, "step": e.step,
         "class_vector": [F.scalar_to_json(x) for x in e.class_vector],
         "death_step": e.death_step}
        for e in timeline]
    return out


def oracle_json(simg: StripImage, hg: HomologyBasis,
                mvss_betti, top: int) -> dict:
    strip = {"stabilized_at_length": simg.stabilized_at,
             "image_dims": {str(k): simg.subspace(k, hg).dim
                            for k in range(top + 1)}}
    direct = list(hg.betti_vector)
    return {"strip_image": strip,
            "quotient_betti": direct,
            "mvss_betti": list(mvss_betti),
            "mvss_agrees": list(mvss_betti) == direct +
            [0] * (len(mvss_betti) - len(direct))}


def to_json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def to_plain_text(doc, indent: int = 0) -> str:
    """Line-per-fact rendering of the same report dict."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(to_plain_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}-")
                lines.append(to_plain_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(v)}")
    else:
        lines.append(f"{pad}{_flat(doc)}")
    return "\n".join(lines)


def _is_flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if isinstance(v, dict) and not v:
        return "{}"
    if v is None:
        return "-"
    return str(v)
