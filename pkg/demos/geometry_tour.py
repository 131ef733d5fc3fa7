"""A walk through PG(2,q): conics, internal and external points, hyperovals and W(q).

Run: python3 demos/geometry_tour.py
"""

from fgdt import build_plane, field_of_order, hyperoval, internal_points, pencil_conic, witt_bose_shrikhande
from fgdt.plane import external_points

print("Odd q: a conic splits the points off it into internal and external points.")
for q in (5, 7, 9, 11):
    P = build_plane(field_of_order(q))
    C = pencil_conic(P, 1)
    I, E = internal_points(P, C), external_points(P, C)
    print(f"  q={q:2d}: {P.n_points} points, conic {len(C.points)}, internal {len(I)}, external {len(E)}")

print()
print("Even q: the conic plus its nucleus is a hyperoval J; no line is tangent to J.")
for q in (4, 8, 16):
    P = build_plane(field_of_order(q))
    J = hyperoval(P, pencil_conic(P, 1))
    print(f"  q={q:2d}: |J| = {len(J.points)}, external lines {len(J.external_lines)} = q(q-1)/2")

print()
print("The external lines of J, grouped by the point they pass through, form a linear space.")
for q in (8, 16):
    W = witt_bose_shrikhande(q)
    p = W.params
    print(f"  W({q}) is a 2-({p.v},{p.k},{p.lam}) design with {p.b} blocks, r = {p.r}")
