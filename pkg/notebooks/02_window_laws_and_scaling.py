# Window laws of the central measures mu^sigma and the scaling of Phi(n, eps).
#
# Zeros in sigma copy halves of the word, ones make them independent.  The
# entropy of the window [0, n) grows like 2^{s^sigma(log n)}: bounded for
# all zeros, linear for all ones, about sqrt(n) for the alternating sigma.

import math
from fractions import Fraction

from scalent.ordered_pairs import (SigmaSequence, adic_step, predicted_scaling, sample_vertex,
                                   window_distribution_exact, window_distribution_sampled)
from scalent.ordered_pairs.adic import AdicPathPrefix
from scalent.lab import scaling_row

sigma = SigmaSequence("1011")
v = sample_vertex(sigma, 4, 3)
print("a vertex of V_4 for sigma=1011 (seed 3):", "".join(map(str, v.word())))

# the adic map walks along the word one position at a time
x = AdicPathPrefix.at(v, 0)
bits = []
for _ in range(8):
    bits.append(x.current_bit())
    x = adic_step(x)
print("first 8 bits along the orbit:", bits)

# exact and sampled laws of a window
exact = window_distribution_exact(sigma, [0, 1, 2], 4)
sampled = window_distribution_sampled(sigma, [0, 1, 2], 4, 100_000, 5)
print("exact law:", {w: str(p) for w, p in sorted(exact.probabilities.items())})
print("total variation to 10^5 samples:", float(exact.total_variation(sampled)))

# the dichotomy
for spec in ("zeros", "ones"):
    for n in (4, 8, 12):
        r = scaling_row(spec, n, Fraction(1, 10))
        print(f"{spec:>5} n={n:>2}: Phi in [{r['phi_lower']}, {r['phi_upper']}] ({r['tag']})")

alt = SigmaSequence.alternating(12)
for t in range(0, 11, 2):
    r = scaling_row("alternating", 2 ** t, Fraction(1, 8), mode="sampled", samples=100_000, seed=7)
    lo, hi = math.log2(r["phi_lower"]), math.log2(r["phi_upper"])
    print(f"alternating t={t:>2}: log2 Phi in [{lo:.2f}, {hi:.2f}], t/2 = {t / 2}, "
          f"log2 h_n = {math.log2(predicted_scaling(alt, 2 ** t)):.0f}")
