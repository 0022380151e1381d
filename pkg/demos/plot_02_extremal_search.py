"""
Largest intersecting subfamilies
================================

Intersecting subfamilies are cliques of the intersection graph, so an
exact branch-and-bound clique search gives the true maximum.  For
n >= 2p+s it matches the star size; below that range the whole family is
already intersecting.
"""

from ekrmatch.family import MatchingParams, enumerate_family, set_names
from ekrmatch.search import build_intersection_graph, max_clique, verify_ekr_instance

for triple in [(4, 2, 0), (3, 1, 1), (3, 0, 3), (5, 1, 2), (3, 2, 1)]:
    v = verify_ekr_instance(MatchingParams(*triple))
    print(triple, v.regime, "max", v.max_intersecting, "star", v.star_size, "holds", v.holds)

# the witness for (4, 2, 0): three members sharing an edge
params = MatchingParams(4, 2, 0)
family = enumerate_family(params)
v = verify_ekr_instance(params)
for i in v.witness:
    print(set_names(family[i]))

# the bare clique search, with no incumbent and no symmetry reduction
graph = build_intersection_graph(enumerate_family(MatchingParams(5, 1, 2)))
print("unseeded nodes:", max_clique(graph).nodes_explored)
