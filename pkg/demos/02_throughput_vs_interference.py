"""Effective capacity against the interference budget.

For each budget p_int the link maximizes its effective rate over the
power ratio mu and the idle-sensed power p2.  Under stringent budgets the
optimal mu collapses toward 0 (no busy-sensed transmission) and the
throughput scales with the budget; once p_int reaches the peak power the
constraint stops binding and the curve saturates.  Stricter QoS (larger
theta) lowers the whole curve.  The exact Rayleigh closed form is printed
next to the Monte Carlo value at the optimizer as a cross-check.
"""

import argparse

import numpy as np

from cogmimo import (
    ActivityModel,
    PowerPolicy,
    SensingModel,
    SystemConfig,
    build_kz,
    closed_form_effective_rate,
    effective_capacity,
    identity_interference,
    precompute_gains,
    sample_rayleigh,
)

SENSING = SensingModel(p_d=0.92, p_f=0.21)
ACTIVITY = ActivityModel(a=0.5, b=0.5)
P_REF = 300.0
P_MAX = 10.0 * P_REF


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=4000)
    parser.add_argument("--grid", type=int, default=31)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    kz = build_kz(identity_interference(3), 1.0, 1.0)
    gains = precompute_gains(sample_rayleigh(3, 3, args.samples, seed=1), kz)
    p_int_dbs = np.arange(-30.0, 16.0, 2.0)

    print("p_int_db  theta  mu*     p2*_db  effective_rate  closed_form")
    curves = {}
    for theta in (0.01, 0.1, 1.0):
        cfg = SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=3, N=3, theta=theta)
        vals = []
        for v in p_int_dbs:
            p_int = 10 ** (v / 10) * P_REF
            res = effective_capacity(gains, kz, cfg, SENSING, ACTIVITY,
                                     p_max=P_MAX, p_int=p_int, grid=args.grid)
            pol = PowerPolicy(p_max=P_MAX, p_int=p_int, mu=res.mu_star, p2=res.p2_star)
            closed = closed_form_effective_rate(cfg, SENSING, ACTIVITY, pol)
            vals.append(res.value)
            if v in (-30.0, -20.0, -10.0, 0.0, 10.0):
                p2_db = 10 * np.log10(max(res.p2_star, 1e-12) / P_REF)
                print(f"{v:+8.0f}  {theta:<5} {res.mu_star:5.2f}  {p2_db:7.1f}"
                      f"  {res.value:14.4f}  {closed:11.4f}")
        curves[theta] = vals

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        for theta, vals in curves.items():
            plt.plot(p_int_dbs, vals, label=f"theta = {theta}")
        plt.xlabel("interference budget p_int (dB)")
        plt.ylabel("effective rate (bits/s/Hz)")
        plt.legend()
        plt.grid(alpha=0.3)
        plt.savefig("throughput_vs_interference.png", dpi=150, bbox_inches="tight")
        print("\nsaved throughput_vs_interference.png")


if __name__ == "__main__":
    main()
