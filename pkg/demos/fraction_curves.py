"""New-volume fraction over the time ratio for both regimes.

Writes fraction_curves.csv next to this script and, when matplotlib is
available, saves fraction_curves.png with the two curves on a log-x axis:
nearly linear take-off with slopes 0.51 (dl) and 0.62 (al), then slow
saturation toward 1.
"""

import csv
import os

import numpy as np

from ripening import (
    ATTACHMENT_LIMITED,
    DIFFUSION_LIMITED,
    fraction_curve,
    initial_growth_rate,
)

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    s_grid = np.geomspace(1.0, 200.0, 120)
    curves = {
        regime.kind: fraction_curve(regime, s_grid)
        for regime in (DIFFUSION_LIMITED, ATTACHMENT_LIMITED)
    }

    out_csv = os.path.join(HERE, "fraction_curves.csv")
    with open(out_csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "phi_dl", "phi_al"])
        for i, s in enumerate(s_grid):
            writer.writerow([
                f"{s:.12g}",
                f"{curves['dl'].fraction[i]:.12g}",
                f"{curves['al'].fraction[i]:.12g}",
            ])
    print(f"wrote {out_csv}")

    for regime in (DIFFUSION_LIMITED, ATTACHMENT_LIMITED):
        print(f"  {regime.kind}: initial slope {initial_growth_rate(regime):.4f} "
              f"per unit of s - 1")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    for kind, curve in curves.items():
        ax.plot(curve.s, curve.fraction, label=kind)
    ax.set_xscale("log")
    ax.set_xlabel("t / t0")
    ax.set_ylabel("new-volume fraction")
    ax.set_title("Share of the solid phase formed after t0")
    ax.legend()
    ax.grid(alpha=0.3)
    out_png = os.path.join(HERE, "fraction_curves.png")
    fig.savefig(out_png, dpi=150, bbox_inches="tight")
    print(f"wrote {out_png}")


if __name__ == "__main__":
    main()
