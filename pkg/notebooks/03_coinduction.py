# The Z^2 action coinduced from the adic Z action, and the estimate that
# turns slice entropies into a lower bound for the averaged semimetric.

from fractions import Fraction

import numpy as np

from scalent.amenable import check_certificate, folner_window, reduce_window
from scalent.coinduction import (CoinducedSystem, averaged_distance, coinduced_apply,
                                 decompose_average, verify_lemma_estimate,
                                 weighted_slice_distance)
from scalent.lab import staircase_family
from scalent.ordered_pairs import SigmaSequence

sys = CoinducedSystem(SigmaSequence.alternating(8), 8, radius=6)
x = sys.sample_point(1, -3, 3, positions=[100 + j for j in range(7)])
y = coinduced_apply(sys, (2, 1), x)
print("(2,1) moves coordinate i to i+1 and advances it twice:",
      [x[i].o for i in x.indices()], "->", [y[i].o for i in y.indices()])

# the averaged distance over a window equals the slice-weighted distance
W = folner_window(2, 3)
z = sys.sample_point(2, -3, 3, positions=[50 + 3 * j for j in range(7)])
print("averaged:", averaged_distance(sys, W, x, z), " slice-weighted:", weighted_slice_distance(W, x, z))

# Folner reduction: sparse rows are dropped, the rest is certified
rng = np.random.default_rng(4)
for W in staircase_family(rng):
    res = reduce_window(W)
    print(f"|W|={len(W):>3} removed={res.removed:>2} h processed={[h for h, _ in res.processed]} "
          f"certificate={check_certificate(res)}")

# slices of a 2x2 box are two windows [0, 2) with weight 2 each
fam, slices = decompose_average(sys, folner_window(2, 2), Fraction(1, 10), 2)
print("components:", slices, "weights:", fam.weights, "4eps blocks:", fam.blocks_4eps)
rep = verify_lemma_estimate(fam)
print("estimate holds:", rep.holds, "with", rep.detail["blocks"], "product blocks")
