"""
Sweeping small instances
========================

The same sweep the command line runs with ``ekrmatch grid``.
"""

from ekrmatch.cli import proofcheck, run_grid
from ekrmatch.family import MatchingParams

report = run_grid(4)
print(report.to_csv())
print(report.summary())

print(proofcheck(MatchingParams(5, 1, 1)).to_text())
