"""Tabulate the quantum dilogarithm on the real line next to the product formula."""

import numpy as np

from ybmaps.qdilog import DilogParams, log_phi, log_phi_product


def main():
    p = DilogParams()
    zs = np.linspace(-3, 3, 7)
    quad = np.exp(log_phi(zs, p))
    prod = np.exp(log_phi_product(zs, p))
    for z, a, b in zip(zs, quad, prod):
        print(f"z={z:+.1f}  phi={a:.12f}  |diff|={abs(a - b):.1e}")


if __name__ == "__main__":
    main()
