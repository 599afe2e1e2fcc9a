"""How the ancilla register reads out an eigenphase.

Hadamards, controlled powers of the diffusion operator, then a Fourier
transform leave the m-qubit ancilla peaked at k ~ 2^m theta / (2 pi).
The closed-form readout amplitude |sin(x) / (2^m sin(x / 2^m))| with
x = pi k - 2^(m-1) theta is what every boosted-search quantity reuses.
"""

import numpy as np

from gqsearch import pea


def main():
    theta = 2.0 * np.pi * 3.3 / 16.0  # sits between the k = 3 and k = 4 bins
    print(f"eigenphase theta = {theta:.6f}")
    print()

    m = 4
    size = 2**m
    amps = pea.pea_amplitude(theta, m, np.arange(size))
    print(f"readout distribution for m = {m} ancilla qubits:")
    for k in range(size):
        bar = "#" * int(round(40 * amps[k] ** 2))
        print(f"  k = {k:2d}   p = {amps[k] ** 2:.4f}  {bar}")
    print()

    print("best-bin probability as the register grows:")
    for m in range(1, 7):
        size = 2**m
        amps = pea.pea_amplitude(theta, m, np.arange(size))
        best = int(np.argmax(amps))
        centre = 2.0 * np.pi * best / size
        print(f"  m = {m}: best k = {best:2d} (phase {centre:.4f}), "
              f"p = {amps[best] ** 2:.4f}")
    print()
    print("an exactly representable phase reads out perfectly:")
    exact = 2.0 * np.pi * 2.0 / 8.0
    print(f"  pea_amplitude(2 pi 2/8, m=3, k=2) = "
          f"{pea.pea_amplitude(exact, 3, 2):.12f}")


if __name__ == "__main__":
    main()
