"""Integrals of motion of the two-pair spin-1/2 chain and their spectra."""

from ybmaps.quantum_lattice import chain_space, evolution_invariance, im_operators, im_spectrum


def main():
    space = chain_space(2)
    im = im_operators(space)
    for name, val in sorted(im.residuals.items()):
        print(f"{name:10s} {val:.2e}")
    print("U-invariance", f"{evolution_invariance(space)['u_invariance_T']:.2e}")
    print("spectrum G1", im_spectrum(im.G[1]).round(6))


if __name__ == "__main__":
    main()
