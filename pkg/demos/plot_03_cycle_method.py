"""
Checking the cycle-method argument
==================================

Proper mappings send the 2n matching vertices onto the double cycle
Z_n x {0, 1}, keeping each edge inside one column.  Quasi-intervals are
special (2p+s)-point sets on the double cycle; every family member is the
preimage of each quasi-interval under the same number f of mappings, which
turns a bound on intersecting quasi-intervals into a bound on the family.
"""

from math import factorial

import numpy as np

from ekrmatch.cycle import (
    MappingTable,
    double_count,
    max_intersecting_quasi,
    quasi_intersection_pattern,
    quasi_intervals,
    verify_counting_identities,
)
from ekrmatch.family import MatchingParams, enumerate_family, star

params = MatchingParams(4, 1, 2)
for b in quasi_intervals(params):
    print(b.index, b.point_list())

pattern = quasi_intersection_pattern(params)
print("intersection matrix:\n", np.array(pattern.matrix, dtype=int))
print("largest intersecting set of quasi-intervals:", max_intersecting_quasi(params))

counting = verify_counting_identities(params)
print(f"f = {counting.f_value}; n! 2^n = {factorial(4) * 16} = |H| f = {counting.family_size * counting.f_value}")

# a star is a largest intersecting family, so the averaging bound is tight
family = enumerate_family(params)
rep = double_count(params, star(family, 0), counting.f_value, MappingTable(4))
print("S =", rep.s_count, "expected", rep.expected, "tight:", rep.bound_tight)
