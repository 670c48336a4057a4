"""Feasible power region of the sensing-based link.

The secondary transmitter uses power mu*p2 when the band is sensed busy
and p2 when sensed idle.  Two constraints shape the feasible (mu, p2)
region: the peak power p_max, and the average-interference budget
p_d*mu*p2 + (1-p_d)*p2 <= p_int, whose second term is the leakage caused
by missed detections.  This script walks both caps: p2_cap(mu) and the
dual curve mu_cap(p2), which clamps at 1 for small p2, then falls and
hits 0 exactly where missed-detection leakage alone exhausts the budget.
"""

import argparse

import numpy as np

from cogmimo import db_to_linear, linear_to_db, mu_cap, p2_cap

P_D = 0.92
P_REF = 300.0  # noise power N*B*sigma_n2 of the default 3x3 link
P_MAX = 10.0 * P_REF  # peak power at 10 dB


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true", help="save a PNG alongside the table")
    args = parser.parse_args()

    p_int_dbs = (-10.0, 0.0, 10.0)
    p2_dbs = np.arange(-10.0, 25.0, 0.5)

    print(f"detection probability {P_D}; peak power 10 dB")
    print("\nlargest feasible p2 (dB) per power ratio:")
    print("mu     " + "".join(f"p_int={v:+.0f}dB " for v in p_int_dbs))
    for mu in (0.0, 0.25, 0.5, 0.75, 1.0):
        caps = [
            linear_to_db(p2_cap(P_MAX, db_to_linear(v) * P_REF, P_D, mu) / P_REF)
            for v in p_int_dbs
        ]
        print(f"{mu:4.2f}   " + "".join(f"{c:10.2f} " for c in caps))

    curves = {}
    for v in p_int_dbs:
        p_int = db_to_linear(v) * P_REF
        curves[v] = [mu_cap(db_to_linear(x) * P_REF, p_int, P_D) for x in p2_dbs]

    print("\nlargest feasible power ratio mu per idle-sensed power:")
    print("p2_db  " + "".join(f"p_int={v:+.0f}dB " for v in p_int_dbs))
    for i in range(0, len(p2_dbs), 6):
        row = "".join(f"{curves[v][i]:10.3f} " for v in p_int_dbs)
        print(f"{p2_dbs[i]:5.1f}  {row}")
    for v in p_int_dbs:
        dead = next((x for x, m in zip(p2_dbs, curves[v]) if m == 0.0), None)
        print(f"p_int {v:+.0f} dB: ratio reaches 0 at p2 = "
              f"{dead if dead is not None else '>25'} dB")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        for v in p_int_dbs:
            plt.plot(p2_dbs, curves[v], label=f"p_int = {v:+.0f} dB")
        plt.xlabel("idle-sensed power p2 (dB)")
        plt.ylabel("largest feasible ratio mu")
        plt.legend()
        plt.grid(alpha=0.3)
        plt.savefig("constraint_geometry.png", dpi=150, bbox_inches="tight")
        print("\nsaved constraint_geometry.png")


if __name__ == "__main__":
    main()
