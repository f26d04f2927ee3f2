"""The twice-summed indefinite-type theory and its 16-monomial product."""
from slantsum import (QuiverGaugeTheory, SlantSumSpec, builder_paper_examples, builder_zero_dim,
                      slant_sum_fixed_point)

M1 = QuiverGaugeTheory([str(i) for i in range(1, 8)],
                       [("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "6"), ("5", "7")],
                       [1, 1, 1, 2, 3, 2, 2], [0, 0, 0, 0, 0, 0, 1])

# z1..z7 of the first theory, z8 of the copy glued at 6, z9 of the copy glued at 7
NAMES = {i: f"1.1.{i}" for i in range(1, 8)}
NAMES[8] = "1.2.1"
NAMES[9] = "2.1"

# (kappa power, z indices with repetition)
S1 = [(0, [1]), (2, [6]), (0, [1, 2]), (1, [5, 6]), (0, [4, 5, 6]), (3, [5, 6, 7]),
      (2, [4, 5, 6, 7]), (1, [4, 5, 5, 6, 7]), (-1, [1, 2, 3, 4, 5, 6]),
      (1, [1, 2, 3, 4, 5, 6, 7]), (0, [1, 2, 3, 4, 5, 5, 6, 7]), (-1, [1, 2, 3, 4, 4, 5, 5, 6, 7])]

S = [(0, [1]), (2, [6, 8]), (0, [1, 2]), (1, [5, 6, 8]), (0, [4, 5, 6, 8]),
     (3, [5, 6, 7, 8, 9]), (2, [4, 5, 6, 7, 8, 9]), (1, [4, 5, 5, 6, 7, 8, 9]),
     (-1, [1, 2, 3, 4, 5, 6, 8]), (1, [1, 2, 3, 4, 5, 6, 7, 8, 9]),
     (0, [1, 2, 3, 4, 5, 5, 6, 7, 8, 9]), (-1, [1, 2, 3, 4, 4, 5, 5, 6, 7, 8, 9]),
     (1, [8]), (2, [8]), (1, [9]), (2, [9])]


def build():
    """(spec1, p1, spec2, pa, point of M) for the two successive slant sums."""
    p1 = builder_zero_dim(M1)
    g = builder_paper_examples("Gr(2,2)")
    spec1 = SlantSumSpec(M1, "6", g.theory, "1")
    pa = slant_sum_fixed_point(spec1, p1, None, g)
    spec2 = SlantSumSpec(pa.theory, "1.7", g.theory, "1")
    pb = slant_sum_fixed_point(spec2, pa, None, g)
    return spec1, p1, spec2, pa, g, pb


def exponent_vector(zs, vertices, names=NAMES):
    return tuple(sum(1 for i in zs if names[i] == u) for u in vertices)
