"""Figure rendering for the CLI report paths.

Matplotlib is imported lazily and forced onto the Agg backend, so the library
itself never needs a display and plain library users never pay the import.
"""

from __future__ import annotations

from math import pi, sqrt


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def plot_moments(rows: list, path: str) -> None:
    """Moment values against N, linear and log-magnitude."""
    plt = _pyplot()
    ns = [r["N"] for r in rows]
    vals = [float(r["value_re"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    label = f"q={rows[0]['q']}, conrey={rows[0]['conrey']}" if rows else ""
    ax1.plot(ns, vals, "o-", ms=4)
    ax1.axhline(0.0, color="gray", lw=0.6)
    ax1.set_xlabel("N")
    ax1.set_ylabel("m_N")
    ax1.set_title(label)
    ax2.semilogy(ns, [abs(v) if v else None for v in vals], "s-", ms=4, color="#a03030")
    ax2.set_xlabel("N")
    ax2.set_ylabel("|m_N|")
    ax2.set_title("magnitude")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_psi(rows: list, path: str) -> None:
    """Taylor-coefficient panels: scaled magnitude, complex scatter, Im/Re ratio."""
    plt = _pyplot()
    ns = [r["n"] for r in rows]
    re = [float(r["value_re"]) for r in rows]
    im = [float(r["value_im"]) for r in rows]
    scaled = [sqrt(x * x + y * y) * _exp_scale(n) for n, x, y in zip(ns, re, im)]
    ratio = [y / x if x else float("nan") for x, y in zip(re, im)]
    fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(12, 3.6))
    label = f"q={rows[0]['q']}, conrey={rows[0]['conrey']}" if rows else ""
    ax1.semilogy(ns, scaled, ".-", ms=3)
    ax1.set_xlabel("n")
    ax1.set_ylabel("|psi_n| exp(sqrt(pi n))")
    ax1.set_title(label)
    sc = ax2.scatter(re, im, c=ns, cmap="viridis", s=10)
    fig.colorbar(sc, ax=ax2, label="n")
    ax2.axhline(0.0, color="gray", lw=0.6)
    ax2.axvline(0.0, color="gray", lw=0.6)
    ax2.set_xlabel("Re psi_n")
    ax2.set_ylabel("Im psi_n")
    ax3.plot(ns, ratio, ".-", ms=3, color="#a03030")
    ax3.set_xlabel("n")
    ax3.set_ylabel("Im/Re")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _exp_scale(n: int) -> float:
    from math import exp

    return exp(sqrt(pi * n))


def plot_ratio_scan(rows: list, path: str) -> None:
    """m_0 / |L(1/2)|^2 against the prime index."""
    plt = _pyplot()
    ns = [r["n"] for r in rows]
    ratios = [float(r["ratio"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 3.6))
    ax.plot(ns, ratios, "o", ms=4)
    ax.set_xlabel("prime index n")
    ax.set_ylabel("m_0 / |L(1/2)|^2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
