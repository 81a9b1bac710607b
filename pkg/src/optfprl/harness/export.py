"""CSV trace export and a dependency-free SVG chart of average regret."""

from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from ..metrics import MetricsReport, Trace

COLUMNS = ("t", "algo", "strategy", "loss", "comparator_loss", "regret_cum", "regret_avg", "epsilon",
           "sigma_cum", "state_norm", "pruned", "delta")

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _num(v: float) -> str:
    return repr(float(v))


def export_csv(trace: Trace, report: MetricsReport, path, header=()) -> None:
    """Write one row per slot; '#' comment rows carry the config and the report."""
    regret = trace.regret_curve()
    avg = trace.average_regret_curve()
    with open(path, "w", newline="") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write("# " + " ".join(f"{k}={v}" for k, v in report.as_dict().items()) + "\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        for i in range(len(trace)):
            delta = trace.delta[i]
            w.writerow([
                i + 1, trace.algo, trace.strategy, _num(trace.loss[i]), _num(trace.comparator_loss[i]),
                _num(regret[i]), _num(avg[i]), _num(trace.epsilon[i]), _num(trace.sigma_cum[i]),
                _num(trace.state_norm[i]), int(trace.pruned[i]), "" if delta is None else _num(delta),
            ])


def read_csv(path):
    """Rows of an exported trace as dicts (comment rows skipped)."""
    with open(path, newline="") as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


def render_chart(traces, path, width: int = 720, height: int = 420, title: str = "Average dynamic regret") -> None:
    """Average regret vs t for each trace, one polyline per trace, with a legend."""
    ml, mr, mt, mb = 60, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    curves = [t.average_regret_curve() for t in traces]
    T = max((len(c) for c in curves), default=0)
    ymax = max((float(np.max(c)) for c in curves if len(c)), default=1.0)
    ymin = min((float(np.min(c)) for c in curves if len(c)), default=0.0)
    ymin = min(ymin, 0.0)
    if ymax <= ymin:
        ymax = ymin + 1.0

    def sx(t):
        return ml + (pw * (t - 1) / max(T - 1, 1))

    def sy(v):
        return mt + ph * (1.0 - (v - ymin) / (ymax - ymin))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
        f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">t</text>',
        f'<text x="{ml - 8}" y="{mt + 4}" text-anchor="end" font-family="sans-serif" font-size="10">{ymax:.3g}</text>',
        f'<text x="{ml - 8}" y="{mt + ph}" text-anchor="end" font-family="sans-serif" font-size="10">{ymin:.3g}</text>',
        f'<text x="{ml + pw}" y="{mt + ph + 16}" text-anchor="end" font-family="sans-serif" font-size="10">{T}</text>',
    ]
    for k, (trace, curve) in enumerate(zip(traces, curves)):
        color = PALETTE[k % len(PALETTE)]
        # thin long curves to at most ~2 points per horizontal pixel
        stride = max(1, len(curve) // (2 * pw))
        idx = list(range(0, len(curve), stride))
        if curve.size and idx[-1] != len(curve) - 1:
            idx.append(len(curve) - 1)
        pts = " ".join(f"{sx(i + 1):.2f},{sy(curve[i]):.2f}" for i in idx)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        label = trace.algo + (f" ({trace.strategy})" if trace.strategy else "")
        ly = mt + 14 + 16 * k
        out.append(f'<line x1="{ml + pw - 150}" y1="{ly - 4}" x2="{ml + pw - 130}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{ml + pw - 125}" y="{ly}" font-family="sans-serif" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
