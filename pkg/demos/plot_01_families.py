"""
Families of matching subsets
============================

Vertices of a perfect matching on 2n vertices are stored as bits: a_i is
bit 2i and b_i is bit 2i+1.  A family H^(p,s)(n) collects every vertex set
that contains p whole edges and s lone endpoints.
"""

from math import comb

from ekrmatch.family import MatchingParams, enumerate_family, set_names, star, star_size_closed_form

params = MatchingParams(n=3, p=1, s=1)
family = enumerate_family(params)
print(f"{len(family)} members, closed form {comb(3, 1) * comb(2, 1) * 2}")

# members print with 1-based names
for vset in family.members[:4]:
    print(set_names(vset))

# every vertex lies in the same number of members
sizes = [len(star(family, v)) for v in range(2 * params.n)]
print("star sizes:", sizes, "closed form:", star_size_closed_form(params))
