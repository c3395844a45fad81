"""Evolve a random classical chain and print the drift of the monodromy traces."""

import numpy as np

from ybmaps.classical_lattice import evolve, monodromy_trace, random_state


def main(N=4, steps=50, seed=1):
    rng = np.random.default_rng(seed)
    states = evolve(random_state(rng, N), steps)
    lam = 1.2 + 0.4j
    t0 = monodromy_trace(states[0], lam)
    for t in range(0, steps + 1, 10):
        st = states[t]
        print(f"t={t:3d}  u1={st.u[0]:.6f}  |t(lam)-t0|={abs(monodromy_trace(st, lam) - t0):.2e}")


if __name__ == "__main__":
    main()
