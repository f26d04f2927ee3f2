"""Gluing T*Gr(2,2) onto the middle of A3 gives a D4 theory.

Direct localization meets non-isolated fixed loci there, so the vertex is
taken as a limit of framing deformations. The factorization check compares it
with the product of the two constituent vertices.
"""
from slantsum import (SlantSumSpec, builder_paper_examples, check_factorization,
                      check_zero_dim_conjecture, slant_sum, slant_sum_fixed_point)

p1 = builder_paper_examples("A3-(2,2)")
p2 = builder_paper_examples("Gr(2,2)")
spec = SlantSumSpec(p1.theory, "2", p2.theory, "1")
D4 = slant_sum(spec)
print("vertices:", D4.vertices)
print("arrows:", D4.arrows)
print("v =", D4.vd(), " w =", D4.wd())

rep = check_factorization(spec, p1, None, p2, 5, (1, 2))
print("factorization at order 5:", rep.status)
print("  shift exponents:", rep.details.get("e"))

p = slant_sum_fixed_point(spec, p1, None, p2)
rep = check_zero_dim_conjecture(D4, p, 5, (1,))
print("product over roots, isolated localization:", rep.status, rep.notes[:1])
rep = check_zero_dim_conjecture(D4, p, 5, (1, 2), slant=(spec, p1, None, p2))
print("product over roots, deformation limit:", rep.status)
