"""Optional PNG rendering of f(nu; Delta) data (matplotlib, Agg backend)."""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Tuple


def render_f_figure(
    samples: Sequence[Tuple[float, float]],
    maxima: Iterable[Tuple[float, float]],
    delta: float,
    path: str,
    gamma: float = None,
) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    # break the curve at poles so the branches are not joined
    xs, ys = [], []
    prev_k = None
    for nu, f in samples:
        k = math.floor(nu / (2 * math.pi))
        if prev_k is not None and k != prev_k and k != 0:
            xs.append(float("nan"))
            ys.append(float("nan"))
        xs.append(nu)
        ys.append(f)
        prev_k = k
    ax.plot(xs, ys, lw=1.2, color="C0", label=rf"$f(\nu;\Delta={delta:g})$")
    lo, hi = min(s[0] for s in samples), max(s[0] for s in samples)
    ax.plot([lo, hi], [(delta - 0.5) * lo, (delta - 0.5) * hi], ls="--", lw=0.8, color="C1", label=r"$(\Delta-1/2)\nu$")
    mx = list(maxima)
    if mx:
        ax.plot([m[0] for m in mx], [m[1] for m in mx], "o", ms=3, color="C3", label="branch maxima")
    if gamma is not None:
        ax.axhline(gamma, lw=0.8, color="0.4", label=r"$\Gamma$")
    finite = [y for y in ys if math.isfinite(y)]
    if finite:
        span = max(abs(min(finite)), abs(max(finite)))
        ax.set_ylim(-min(span, 4 * max(1.0, abs(hi))), min(span, 4 * max(1.0, abs(hi))))
    ax.set_xlabel(r"$\tilde\nu$")
    ax.set_ylabel(r"$f$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
