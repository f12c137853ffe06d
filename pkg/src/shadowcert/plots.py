"""Figure rendering for campaign artifacts (Agg backend, PNG files).

Figures visualize the same data as the CSV artifacts; they carry no
extra information and are excluded from the byte-reproducibility claim
(PNG encoding is not pinned).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_DPI = 120


def _save(fig, outdir, name: str) -> str:
    path = str(outdir / name)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_shadow_figures(records, constants, outdir) -> list:
    """Per-trial window sup errors against epsilon, plus their histogram."""
    done = [r for r in records if r.sup_error is not None]
    eps = float(constants.epsilon)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))

    pos = [(r.trial, float(r.sup_error)) for r in done if r.sup_error > 0]
    zeros = len(done) - len(pos)
    if pos:
        xs, ys = zip(*pos)
        ax1.scatter(xs, ys, s=12, color="tab:blue", label="inductive sup error")
        oracle = [
            (r.trial, float(r.oracle_error))
            for r in done
            if r.oracle_error is not None and r.oracle_error > 0
        ]
        if oracle:
            oxs, oys = zip(*oracle)
            ax1.scatter(oxs, oys, s=12, marker="x", color="tab:orange",
                        label="direct oracle error")
        ax1.set_yscale("log")
    ax1.axhline(eps, color="tab:red", linestyle="--", label="epsilon")
    ax1.set_xlabel("trial")
    ax1.set_ylabel("window sup error")
    title = "certified errors per trial"
    if zeros:
        title += f" ({zeros} exact-zero trials not drawn)"
    ax1.set_title(title)
    ax1.legend(loc="upper right", fontsize=8)

    if pos:
        ax2.hist([y for _, y in pos], bins=24, color="tab:blue", alpha=0.8)
        ax2.set_xscale("log")
    ax2.axvline(eps, color="tab:red", linestyle="--")
    ax2.set_xlabel("window sup error")
    ax2.set_ylabel("trials")
    ax2.set_title("error distribution")

    fig.tight_layout()
    return [_save(fig, outdir, "errors.png")]


def save_profile_figure(profiles, constants, outdir) -> list:
    """Error-versus-time profile for the worst recorded trial."""
    trial, profile = max(
        profiles, key=lambda tp: max((d for _, d in tp[1]), default=0)
    )
    xs = [n for n, _ in profile]
    ys = [float(d) for _, d in profile]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(xs, ys, lw=1, color="tab:blue")
    ax.axhline(float(constants.epsilon), color="tab:red", linestyle="--",
               label="epsilon")
    ax.set_xlabel("time index n")
    ax.set_ylabel("d(T^n w, entry n)")
    ax.set_title(f"error profile, trial {trial}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return [_save(fig, outdir, "profile.png")]


def save_falsify_figures(outcome, constants, delta, outdir) -> list:
    """Closeness of each sampled pair against epsilon and delta."""
    fig, ax = plt.subplots(figsize=(8, 4))
    adm = [(t, c) for t, c, a in outcome.samples if a and c > 0]
    rej = [(t, c) for t, c, a in outcome.samples if not a and c > 0]
    if adm:
        xs, ys = zip(*adm)
        ax.scatter(xs, ys, s=10, color="tab:blue", label="admissible pair")
    if rej:
        xs, ys = zip(*rej)
        ax.scatter(xs, ys, s=10, marker="x", color="tab:gray", alpha=0.5,
                   label="rejected pair")
    ax.axhline(float(constants.epsilon), color="tab:red", linestyle="--",
               label="epsilon")
    ax.axhline(float(delta), color="tab:green", linestyle=":", label="delta")
    if adm or rej:
        ax.set_yscale("log")
    ax.set_xlabel("trial")
    ax.set_ylabel("max closeness over the window")
    found = outcome.witness.trial if outcome.found else None
    ax.set_title(
        "falsifier closeness" + (f" — witness at trial {found}" if found is not None else "")
    )
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    return [_save(fig, outdir, "closeness.png")]


def save_constants_figure(constants, outdir) -> list:
    """The certified chain epsilon >= ... >= rho on a log2 axis."""
    import math

    names = ["epsilon", "alpha", "delta", "rho"]
    values = [constants.epsilon, constants.alpha, constants.delta, constants.rho]
    logs = [math.log2(float(v)) for v in values]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    bars = ax.barh(names[::-1], logs[::-1], color="tab:blue", alpha=0.85)
    for bar, v in zip(bars, values[::-1]):
        ax.text(bar.get_width() - 0.4, bar.get_y() + bar.get_height() / 2,
                f"{float(v):.3g}", va="center", ha="right", fontsize=8,
                color="white")
    ax.set_xlabel("log2(value)")
    ax.set_title(f"certified chain, {constants.system_name}")
    fig.tight_layout()
    return [_save(fig, outdir, "constants.png")]
