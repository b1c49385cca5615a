"""Figure rendering for reports.

Every report-producing subcommand can also emit matplotlib figures; the
functions here consume the already-assembled report dict so the figures
can never disagree with the JSON output.  Rendering uses the Agg backend
and writes PNG files, returning the written paths.
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _grouped_bars(ax, labels, series):
    """series: list of (name, values); values aligned with labels."""
    width = 0.8 / max(len(series), 1)
    for s, (name, values) in enumerate(series):
        xs = [i + s * width for i in range(len(labels))]
        ax.bar(xs, values, width=width, label=name)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(labels))])
    ax.set_xticklabels(labels)
    ax.legend()


def render_homology(doc: dict, outdir: str) -> list:
    sec = doc["homology"]
    series = [(name, sec[name]["betti"]) for name in ("U", "V", "quotient")
              if name in sec]
    top = max(len(v) for _, v in series)
    series = [(n, v + [0] * (top - len(v))) for n, v in series]
    fig, ax = plt.subplots(figsize=(6, 4))
    _grouped_bars(ax, [f"H{k}" for k in range(top)], series)
    ax.set_ylabel("dimension")
    ax.set_title("Betti numbers")
    return [_save(fig, outdir, "betti.png")]


def render_monodromy(doc: dict, outdir: str) -> list:
    degrees = doc["monodromy"]["degrees"]
    labels = sorted(degrees, key=int)
    series = [
        ("dim H(V)", [degrees[q]["dim_V"] for q in labels]),
        ("gim(M_V)", [degrees[q]["gim_V"]["dim"] for q in labels]),
        ("dim H(U)", [degrees[q]["dim_U"] for q in labels]),
        ("gim(M_U)", [degrees[q]["gim_U"]["dim"] for q in labels]),
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    _grouped_bars(ax, [f"deg {q}" for q in labels], series)
    ax.set_ylabel("dimension")
    ax.set_title("Window homology and generalized images")
    return [_save(fig, outdir, "monodromy.png")]


def render_toroidal(doc: dict, outdir: str) -> list:
    sec = doc["toroidal"]
    labels = sorted(sec["degrees"], key=int)
    nt = [sec["degrees"][q]["dim_nontoroidal"] for q in labels]
    tor = [sec["degrees"][q]["dim_toroidal"] for q in labels]
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(labels))
    ax.bar(xs, nt, label="non-toroidal")
    ax.bar(xs, tor, bottom=nt, label="toroidal")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"H{q}" for q in labels])
    ax.set_ylabel("dimension")
    ax.set_title(f"Homology of the {sec['n']}-fold quotient")
    ax.legend()
    return [_save(fig, outdir, "toroidal.png")]


def render_persistence(doc: dict, outdir: str) -> list:
    sec = doc["persistence"]
    steps = sec["steps"]
    degs = sorted({q for s in sec["per_step"].values()
                   for q in s["gim_V_dims"]}, key=int)
    fig, ax = plt.subplots(figsize=(6, 4))
    for q in degs:
        ys = [sec["per_step"][str(s)]["gim_V_dims"].get(q, 0)
              for s in steps]
        ax.plot(steps, ys, marker="o", label=f"degree {q}")
    ax.set_xlabel("filtration step")
    ax.set_ylabel("dim gim(M_V)")
    ax.set_title("Alive toroidal features per step")
    ax.legend()
    paths = [_save(fig, outdir, "gim_timeline.png")]
    spans = [(e["step"], e["death_step"], e["degree"])
             for e in sec["timeline"]]
    if spans:
        fig, ax = plt.subplots(figsize=(6, 0.5 + 0.35 * len(spans)))
        end = max(steps)
        for row, (birth, death, q) in enumerate(spans):
            stop = death if death is not None else end + 0.5
            ax.hlines(row, birth, stop, lw=4)
            ax.plot([birth], [row], marker="o", color="black")
        ax.set_yticks(range(len(spans)))
        ax.set_yticklabels([f"deg {q} @ {b}" for b, _, q in spans])
        ax.set_xlabel("filtration step")
        ax.set_title("Feature lifetimes")
        paths.append(_save(fig, outdir, "lifetimes.png"))
    return paths


def render_oracle(doc: dict, outdir: str) -> list:
    sec = doc["oracle"]
    direct = sec["quotient_betti"]
    mvss = sec["mvss_betti"]
    top = max(len(direct), len(mvss))
    series = [("direct", direct + [0] * (top - len(direct))),
              ("blow-up total", mvss + [0] * (top - len(mvss)))]
    fig, ax = plt.subplots(figsize=(6, 4))
    _grouped_bars(ax, [f"H{k}" for k in range(top)], series)
    ax.set_ylabel("dimension")
    ax.set_title("Quotient homology: direct vs oracle")
    return [_save(fig, outdir, "oracle.png")]


RENDERERS = {
    "homology": render_homology,
    "monodromy": render_monodromy,
    "toroidal": render_toroidal,
    "classify": render_toroidal,
    "persist": render_persistence,
    "oracle": render_oracle,
}


def render(command: str, doc: dict, outdir: str) -> list:
    fn = RENDERERS.get(command)
    if fn is None:
        return []
    os.makedirs(outdir, exist_ok=True)
    try:
        return fn(doc, outdir)
    except KeyError:
        return []
