"""Energy per bit in the low-power regime.

Lowering the transmit power always lowers the energy cost per delivered
bit; the floor reached as snr -> 0 is the reciprocal of the capacity's
first derivative at zero snr, attained by beamforming into the top
eigenspace of the (whitened) channel Gram matrix.  The floor does not
depend on the QoS exponent: all theta curves converge as snr drops.  The
second-order picture does depend on theta through the wideband slope,
which degrades as the QoS constraint tightens.
"""

import argparse
import math

import numpy as np

from cogmimo import (
    ActivityModel,
    PowerPolicy,
    SensingModel,
    SystemConfig,
    build_kz,
    effective_rate,
    identity_interference,
    lowsnr_report,
    precompute_gains,
    sample_rayleigh,
    transition_probs,
    uniform_closed_forms,
)

SENSING = SensingModel(p_d=0.92, p_f=0.21)
ACTIVITY = ActivityModel(a=0.5, b=0.5)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=20_000)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    kz = build_kz(identity_interference(3), 1.0, 1.0)
    samples = sample_rayleigh(3, 3, args.samples, seed=4)
    gains = precompute_gains(samples, kz)
    tm = transition_probs(ACTIVITY, SENSING)

    rep = lowsnr_report(samples, kz, SENSING, ACTIVITY,
                        SystemConfig(0.1, 100.0, 1.0, 1.0, 3, 3, 0.1))
    print(f"capacity slope at snr=0:     {rep.c_dot:.4f}")
    print(f"minimum energy per bit:      {rep.ebn0_min:.4f} ({rep.ebn0_min_db:.2f} dB)")
    print(f"wideband slope at theta=0.1: {rep.s0:.4f}")
    ebn0_u, s0_u = uniform_closed_forms(SystemConfig(0.1, 100.0, 1.0, 1.0, 3, 3, 0.1),
                                        SENSING, ACTIVITY)
    print(f"uniform-allocation closed form: {ebn0_u:.4f} "
          f"({10 * math.log10(ebn0_u):.2f} dB), slope {s0_u:.4f}\n")

    snr_dbs = np.arange(-40.0, 1.0, 5.0)
    print("snr_db   " + "".join(f"theta={t:<6}" for t in (0.01, 0.1, 1.0)))
    curves = {}
    for theta in (0.01, 0.1, 1.0):
        cfg = SystemConfig(0.1, 100.0, 1.0, 1.0, 3, 3, theta)
        col = []
        for v in snr_dbs:
            snr = 10 ** (v / 10)
            p2 = snr * 300.0
            pol = PowerPolicy(p_max=max(3000.0, p2), p_int=max(3000.0, p2), mu=1.0, p2=p2)
            c = effective_rate(gains, kz, pol, cfg, tm,
                               covariance_mode="beamform", normalization="per_dimension")
            col.append(10 * math.log10(snr / c))
        curves[theta] = col
    for i, v in enumerate(snr_dbs):
        print(f"{v:+6.0f}  " + "".join(f"{curves[t][i]:9.3f} " for t in (0.01, 0.1, 1.0)))
    print(f"\nfloor 10*log10(1/c_dot) = {-10 * math.log10(rep.c_dot):.3f} dB")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        for theta, col in curves.items():
            plt.plot(snr_dbs, col, label=f"theta = {theta}")
        plt.axhline(-10 * math.log10(rep.c_dot), ls="--", c="k", label="minimum")
        plt.xlabel("snr (dB)")
        plt.ylabel("energy per bit (dB)")
        plt.legend()
        plt.grid(alpha=0.3)
        plt.savefig("energy_efficiency.png", dpi=150, bbox_inches="tight")
        print("saved energy_efficiency.png")


if __name__ == "__main__":
    main()
