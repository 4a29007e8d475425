"""Measurement tables (CSV) and figures (PNG) for the size trends of the
rewriter and the tiling encoder and for the string-game bounds."""
from __future__ import annotations

import csv
import math
import random
from pathlib import Path

import numpy as np

from .formula import E, Eventually, Prop, conj, size
from .gen import random_h1
from .models import compute_S
from .rewriter import ctlplus_to_ctl, to_e_normal, to_u_normal
from .tiling import corollary_instance, encode_tiling


def succinctness_rows(max_m: int = 6) -> list[dict]:
    """Sizes of ctlplus_to_ctl on f_m = E(F p1 ∧ … ∧ F pm) and the exponent c
    with output size = 2^(c·m·log2 m)."""
    rows = []
    for m in range(1, max_m + 1):
        f = E(conj(*[Eventually(Prop(f"p{i}")) for i in range(1, m + 1)]))
        out = size(ctlplus_to_ctl(f))
        mlogm = m * math.log2(m) if m > 1 else float("nan")
        c = math.log2(out) / mlogm if m > 1 else float("nan")
        rows.append({"m": m, "input_size": size(f), "output_size": out, "c": c})
    return rows


def tiling_rows(max_n: int = 8) -> list[dict]:
    rows = [{"n": n, "size": size(encode_tiling(corollary_instance(n)))} for n in range(1, max_n + 1)]
    a, b = linear_fit([r["n"] for r in rows], [r["size"] for r in rows])
    for r in rows:
        r["fit"] = a * r["n"] + b
        r["rel_residual"] = abs(r["size"] - r["fit"]) / r["size"]
    return rows


def linear_fit(xs, ys) -> tuple[float, float]:
    a, b = np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)
    return float(a), float(b)


def normal_form_rows(count: int = 500, seed: int = 0, max_size: int = 12) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        f = random_h1(rng, max_size)
        rows.append({"index": i, "input_size": size(f), "u_normal_size": size(to_u_normal(f)),
                     "e_normal_size": size(to_e_normal(f))})
    return rows


def string_bound_rows(max_k: int = 2, search_bound: int = 8) -> list[dict]:
    rows = []
    for k in range(max_k + 1):
        s = compute_S(k, search_bound)
        rows.append({"k": k, "S": s.value, "stabilized": s.stabilized, "search_bound": search_bound})
    return rows


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.6), dpi=120)
    ax.spines[["top", "right"]].set_visible(False)
    return plt, fig, ax


def _save(plt, fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_report(outdir: str | Path, max_m: int = 6, max_n: int = 8, formulas: int = 500,
                 seed: int = 0) -> dict[str, str]:
    """Write every table as CSV and every figure as PNG into outdir; returns
    a name → path map."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    succ = succinctness_rows(max_m)
    _write_csv(out / "succinctness.csv", succ)
    plt, fig, ax = _figure()
    ms = [r["m"] for r in succ]
    ax.semilogy(ms, [r["output_size"] for r in succ], "o-", label="to-ctl output")
    ax.semilogy(ms, [r["input_size"] for r in succ], "s--", label="input")
    ax.set_xlabel("m (conjuncts F p_i)")
    ax.set_ylabel("formula size")
    ax.set_title("E(F p1 & ... & F pm) under to-ctl")
    ax.legend(frameon=False)
    _save(plt, fig, out / "succinctness.png")

    til = tiling_rows(max_n)
    _write_csv(out / "tiling_size.csv", til)
    plt, fig, ax = _figure()
    ns = [r["n"] for r in til]
    ax.plot(ns, [r["size"] for r in til], "o", label="|encode_tiling(I_n)|")
    ax.plot(ns, [r["fit"] for r in til], "-", label="linear fit")
    ax.set_xlabel("n")
    ax.set_ylabel("formula size")
    ax.set_title("Tiling encoder size")
    ax.legend(frameon=False)
    _save(plt, fig, out / "tiling_size.png")

    nf = normal_form_rows(formulas, seed)
    _write_csv(out / "normal_forms.csv", nf)
    plt, fig, ax = _figure()
    ratios = [r["u_normal_size"] / r["input_size"] for r in nf]
    ax.hist(ratios, bins=20, color="0.4")
    ax.set_xlabel("U-normal size / input size")
    ax.set_ylabel("formulas")
    ax.set_title(f"U-normal form growth ({formulas} random formulas)")
    _save(plt, fig, out / "normal_forms.png")

    sb = string_bound_rows()
    _write_csv(out / "string_bounds.csv", sb)

    for name in ("succinctness", "tiling_size", "normal_forms", "string_bounds"):
        files[f"{name}.csv"] = str(out / f"{name}.csv")
    for name in ("succinctness", "tiling_size", "normal_forms"):
        files[f"{name}.png"] = str(out / f"{name}.png")
    return files
