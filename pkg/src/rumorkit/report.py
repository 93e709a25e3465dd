"""Evaluation report rendering: CSV tables and SVG line charts.

SVG output is built by hand with fixed-precision coordinates so identical
reports produce identical bytes, which keeps charts diffable in tests.
"""

import csv
import json

PALETTE = ["#1f6fb2", "#d1495b", "#3a8f5f", "#8a6fb8", "#b88a00"]

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 30, 45


def write_report_json(report, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_report_json(path):
    from .pipeline import EvaluationReport

    with open(path, "r", encoding="utf-8") as fh:
        return EvaluationReport.from_dict(json.load(fh))


def write_report_csv(report, path):
    """One row per cutoff; ablation column included when present."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        n_folds = len(report.fold_accuracies[0]) if report.fold_accuracies else 0
        header = ["cutoff_hours", "mean_accuracy"]
        if report.ablation_accuracies is not None:
            header.append("accuracy_without_credit")
        header += [f"fold{j}_accuracy" for j in range(n_folds)]
        writer.writerow(header)
        for i, cutoff in enumerate(report.cutoffs):
            row = [_fmt(cutoff), _fmt(report.accuracies[i])]
            if report.ablation_accuracies is not None:
                row.append(_fmt(report.ablation_accuracies[i]))
            row += [_fmt(a) for a in report.fold_accuracies[i]]
            writer.writerow(row)


def write_importance_csv(ranking, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "feature", "importance"])
        for rank, (name, value) in enumerate(ranking):
            writer.writerow([rank, name, _fmt(value)])


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.6f}".rstrip("0").rstrip(".")
    return str(x)


def _x_pos(hours, h_min, h_max):
    span = max(h_max - h_min, 1e-9)
    return MARGIN_L + (hours - h_min) / span * (WIDTH - MARGIN_L - MARGIN_R)


def _y_pos(acc):
    return MARGIN_T + (1.0 - acc) * (HEIGHT - MARGIN_T - MARGIN_B)


def render_accuracy_svg(series, title="Accuracy over time"):
    """`series` is a list of (label, [(hours, accuracy), ...]) pairs; the
    y axis is fixed to [0, 1]."""
    all_hours = [h for _, pts in series for h, _ in pts]
    h_min, h_max = (min(all_hours), max(all_hours)) if all_hours else (0.0, 48.0)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes
    x0, y0 = MARGIN_L, HEIGHT - MARGIN_B
    x1, y1 = WIDTH - MARGIN_R, MARGIN_T
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#000000"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#000000"/>'
    )
    for i in range(11):
        acc = i / 10.0
        y = _y_pos(acc)
        parts.append(
            f'<line x1="{x0 - 4}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" '
            'stroke="#000000"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{acc:.1f}</text>'
        )
    for hours in sorted(set(all_hours)):
        x = _x_pos(hours, h_min, h_max)
        parts.append(
            f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" y2="{y0 + 4}" '
            'stroke="#000000"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{y0 + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_fmt(hours)}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 8}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">hours after event start</text>'
    )
    parts.append(
        f'<text x="16" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2:.1f})">accuracy</text>'
    )
    for s, (label, points) in enumerate(series):
        color = PALETTE[s % len(PALETTE)]
        coords = " ".join(
            f"{_x_pos(h, h_min, h_max):.1f},{_y_pos(a):.1f}" for h, a in points
        )
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            'stroke-width="2"/>'
        )
        ly = MARGIN_T + 14 + 16 * s
        lx = WIDTH - MARGIN_R - 150
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_report_svg(report, path, title="Accuracy over time"):
    series = [("all features", list(zip(report.cutoffs, report.accuracies)))]
    if report.ablation_accuracies is not None:
        series.append(
            (
                "without CreditScore",
                list(zip(report.cutoffs, report.ablation_accuracies)),
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_accuracy_svg(series, title=title))
