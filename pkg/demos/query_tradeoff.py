"""Oracle complexity flattens once the diffusion cost is boosted away.

Plain search needs ~ pi b / (4 alpha) oracle queries, growing linearly
with the b factor.  The boosted variant pays 3 * 2^m - 2 diffusion
applications per iteration but its query count tracks b' = O(1), so the
peak iteration barely moves as b doubles.  This drives the same sweep
the CLI runs for `kind = b-sweep`.
"""

from gqsearch import pea, search, spectra


def main():
    alpha = 0.0625
    targets = (2.0, 4.0, 8.0, 16.0)
    print("  b    plain peak q   boosted peak q   m   diffusions/iter")
    for b_target in targets:
        spec = spectra.symmetric_spectrum(
            64, 5, 0.5, 0.9, alpha=alpha, b_target=b_target
        )
        inst = spectra.SearchInstance.build(spec)
        predicted = search.predict_spectrum(inst)
        m = pea.default_ancilla_count(inst.b_factor)
        boosted = pea.boosted_search_run(inst, m)
        print(f"{inst.b_factor:5.2f}  {predicted.q_m:12d}   "
              f"{boosted.peak_q:14d}  {m:2d}   {3 * 2**m - 2:10d}")
    print()
    print("plain queries scale with b; boosted queries stay flat while")
    print("the per-iteration diffusion budget absorbs the growth")


if __name__ == "__main__":
    main()
