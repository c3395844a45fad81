"""Build a tau-function solution, map it to the uv lattice and report residuals."""

import numpy as np

from ybmaps.liouville import build_tau, liouville_residual, random_params, uuuu_residual, uv_from_tau


def main(n=16, seed=2):
    rng = np.random.default_rng(seed)
    field = build_tau(*random_params(rng, n, n), n, n)
    lat = uv_from_tau(field, 1.3 + 0.4j, -0.7 + 0.9j)
    print(f"bilinear residual {liouville_residual(field):.2e}")
    print(f"uuuu residual     {uuuu_residual(lat):.2e}")
    print(f"max |tau|         {np.max(np.abs(field.tau)):.3f}")


if __name__ == "__main__":
    main()
