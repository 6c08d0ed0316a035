# Epsilon-entropy of small semimetric measure spaces.
#
# H_eps is log2 of the fewest blocks of diameter < eps that cover all but
# < eps of the mass.  Both comparisons are strict, which matters on the
# hand-checkable examples below.

from fractions import Fraction

import numpy as np

from scalent import (SemimetricSpace, eps_entropy, eps_entropy_bounds, eps_entropy_exact,
                     hamming_cube)
from scalent.instances import random_space
from scalent.partitions import Partition, check_lemma_averaging, cut_semimetric

# two atoms at distance 1: at eps = 1/4 each point is its own block, and
# dropping either one leaves mass 1/2 uncovered
two = SemimetricSpace("ab", [Fraction(1, 2)] * 2, [[0, 1], [1, 0]])
r = eps_entropy_exact(two, Fraction(1, 4))
print("two atoms:", r.blocks, "blocks, H =", r.value_log2)

# the square {0,1}^2: three points leave exactly 1/4, which is not < 1/4
r = eps_entropy_exact(hamming_cube(2), Fraction(1, 4))
print("square at 1/4:", r.blocks, "blocks, exceptional mass", r.exceptional_mass)

# the 3-cube at a few scales; blocks grow from points to edges to faces
cube = hamming_cube(3)
for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
    r = eps_entropy_exact(cube, eps)
    print(f"cube3 eps={eps}: {r.blocks} blocks, cover {r.cover}")

# certified bounds bracket the exact answer; past the solver cap the
# dispatcher returns bounds instead
rng = np.random.default_rng(1)
sp = random_space(rng, 10)
eps = Fraction(1, 5)
b = eps_entropy_bounds(sp, eps)
print("random 10 atoms:", b.lower_blocks, "<=", eps_entropy_exact(sp, eps).blocks, "<=", b.upper_blocks)
big = eps_entropy(hamming_cube(6), Fraction(1, 8))
print("cube6:", big.method, big.lower_blocks, big.upper_blocks)

# averaging two cut semimetrics of a uniform 4-point space
host = SemimetricSpace(range(4), [Fraction(1, 4)] * 4, [[0] * 4 for _ in range(4)])
cuts = [cut_semimetric(Partition(host, [[0, 1], [2, 3]])),
        cut_semimetric(Partition(host, [[0, 2], [1, 3]]))]
rep = check_lemma_averaging(host, cuts, Fraction(1, 16))
print("averaging lemma:", rep.holds, rep.detail)
