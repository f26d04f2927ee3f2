"""The A3 quiver with dimensions (1,2,1) and framing at the middle vertex.

Computes the normalized vertex at its isolated fixed point, lists the nonzero
degree tuples (reverse plane partitions of the 2x2 square) and compares the
series with the product over roots pairing negatively with mu.
"""
from slantsum import (SamplePoint, WeightContext, builder_paper_examples, check_zero_dim_conjecture,
                      degree_tuples, extremal_word, make_engine, vertex)

p = builder_paper_examples("A3-(2,2)")
T = p.theory
ctx = WeightContext.from_theory(T)
print("pairings <alpha_i, mu>:", ctx.pairings())
print("inversion roots:", sorted(extremal_word(ctx).as_set()))

pt = SamplePoint.from_seed(1, T.framing_slots())
V = vertex(T, p, 4, pt, normalized=True)
print("normalized vertex to order 4:")
print(" ", V.to_text())

eng = make_engine(T, p, pt)
support = [d for d in degree_tuples(4, 4) if eng.term(d).value]
print(f"{len(support)} nonzero degree tuples (d11, d21, d22, d31), one per Chern root, up to total degree 4:")
for d in support:
    print(" ", d)

rep = check_zero_dim_conjecture(T, p, 6, (1, 2, 3))
print("product over roots, order 6, seeds 1-3:", rep.status)
