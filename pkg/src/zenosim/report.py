"""CSV tables and matplotlib figures for the Zeno clock and for
dovetail runs."""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .counter import counter_init, halve, value  # noqa: E402
from .zenotime import ZenoSchedule, format_seconds, wall_time, wall_time_limit  # noqa: E402


def _figure(width=6.0):
    golden = (5 ** 0.5 - 1) / 2
    fig, ax = plt.subplots(figsize=(width, width * golden))
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    return fig, ax


def clock_table(n: int, schedule: ZenoSchedule = ZenoSchedule()) -> list:
    limit = wall_time_limit(schedule)
    rows = []
    c = counter_init()
    for k in range(n + 1):
        if k:
            c = halve(c)
        t = wall_time(k, schedule)
        rows.append({"step": k, "wall_time": t, "remaining": limit - t, "counter": str(c), "value": value(c)})
    return rows


def write_clock_report(out_dir, n: int = 20, schedule: ZenoSchedule = ZenoSchedule()) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = clock_table(n, schedule)
    csv_path = out / "zeno_clock.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "wall_time", "remaining", "counter", "value"])
        for r in rows:
            w.writerow([r["step"], format_seconds(r["wall_time"]), format_seconds(r["remaining"]),
                        r["counter"], format_seconds(r["value"])])

    fig, ax = _figure()
    steps = [r["step"] for r in rows]
    ax.step(steps, [float(r["wall_time"]) for r in rows], where="post", label="elapsed")
    ax.axhline(float(wall_time_limit(schedule)), ls="--", color="k", lw=0.8, label="limit")
    ax.set_xlabel("completed steps")
    ax.set_ylabel("observer time (s)")
    ax.legend(frameon=False)
    fig.tight_layout()
    png_path = out / "zeno_clock.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_dovetail_report(out_dir, state) -> list:
    """Per-round status counts of a dovetail run (see :mod:`zenosim.dovetail`)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    statuses = ["active", "halted", "killed"]
    counts = []
    for tape in state.sub_tapes:
        tally = Counter(a.status.value for a in tape)
        counts.append([tally.get(s, 0) for s in statuses])
    csv_path = out / "dovetail_rounds.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", *statuses])
        for k, row in enumerate(counts, 1):
            w.writerow([k, *row])

    fig, ax = _figure()
    rounds = list(range(1, len(counts) + 1))
    bottom = [0] * len(counts)
    for j, s in enumerate(statuses):
        heights = [row[j] for row in counts]
        ax.bar(rounds, heights, bottom=bottom, label=s, width=0.8)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("round")
    ax.set_ylabel("sub-areas")
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.legend(frameon=False)
    fig.tight_layout()
    png_path = out / "dovetail_rounds.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
