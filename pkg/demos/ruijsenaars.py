"""Branching check on the two-vertex theory behind the Ruijsenaars operator."""
from slantsum import check_ruijsenaars

for n, order in ((3, 5), (4, 3)):
    rep = check_ruijsenaars(n, order, (1, 2))
    print(f"n = {n}, order {order}: {rep.status} ({rep.timing:.1f}s)")
