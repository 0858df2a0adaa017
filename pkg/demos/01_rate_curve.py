"""Trace the value-versus-rate curve for one pair of binary marginals.

The curve has two regimes: while the rate budget binds, the value grows
with the budget; once the budget reaches the saturation rate, the
marginal-matching constraint takes over and the curve is flat at the
unconstrained coupling value.  This script prints the curve, marks the
regime switch, and saves a plot when matplotlib is available.
"""

import numpy as np

from ratemec import RateProblem, saturation_rate, solve_mecbr

Q_X, Q_Y = 0.2, 0.3


def main() -> None:
    sat = saturation_rate(Q_X, Q_Y)
    print(f"marginals: q_x={Q_X}, q_y={Q_Y}")
    print(f"saturation rate: {sat:.6f} bits\n")
    print(f"{'rate':>6}  {'value_bits':>12}  {'case':<14} {'alpha':>10}")

    rates = np.linspace(0.0, 1.0, 21)
    values = []
    for rate in rates:
        res = solve_mecbr(RateProblem(Q_X, Q_Y, float(rate)))
        values.append(res.value)
        marker = "  <- curve goes flat" if abs(float(rate) - 0.65) < 0.024 else ""
        print(
            f"{float(rate):>6.2f}  {res.value:>12.8f}  {res.case_label:<14} "
            f"{res.alpha:>10.6f}{marker}"
        )

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed; skipping the plot")
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rates, values, marker="o", ms=3)
    ax.axvline(sat, ls="--", color="gray", label=f"saturation rate {sat:.3f}")
    ax.set_xlabel("rate budget (bits)")
    ax.set_ylabel("I(X;Y) (bits)")
    ax.set_title(f"q_x={Q_X}, q_y={Q_Y}")
    ax.legend()
    fig.tight_layout()
    fig.savefig("rate_curve.png", dpi=120)
    print("\nwrote rate_curve.png")


if __name__ == "__main__":
    main()
