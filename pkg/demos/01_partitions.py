"""
Partitions of a set of subsystems
=================================

Every answer ``entangloc`` gives is a set partition of the subsystem labels
``1..n``. This script tours the partition toolkit: canonical form,
enumeration, counting and the refinement order.
"""

# %%
# Canonical form
# --------------
# Blocks are sorted internally and ordered by their smallest member, so two
# spellings of the same partition compare equal.
from entangloc.partitions import (
    Partition,
    bell_number,
    enumerate_bipartitions,
    enumerate_partitions,
    fine_to_coarse,
    meet,
    refines,
    stirling2,
)

p = Partition.from_list([[3, 1], [2]])
q = Partition.from_list([[2], [1, 3]])
print(p, p == q, p.to_list())

# %%
# Bipartitions of a block
# -----------------------
# A block of size ``m`` has ``2**(m-1) - 1`` ways to be cut in two. The smallest
# member always stays on the left, which removes the left/right mirror images.
for bp in enumerate_bipartitions([1, 2, 3, 4]):
    print(bp.to_list())

# %%
# Counting
# --------
# Bell numbers count all partitions and Stirling numbers of the second kind
# count those with exactly ``k`` blocks. Both are exact Python integers.
for n in range(1, 7):
    row = [stirling2(n, k) for k in range(1, n + 1)]
    print(n, bell_number(n), row, len(enumerate_partitions(n)))
print("B(30) =", bell_number(30))

# %%
# Refinement
# ----------
# ``refines(a, b)`` holds when every block of ``a`` sits inside a block of
# ``b``. The meet is the coarsest common refinement.
a = Partition.from_list([[1, 2], [3, 4]])
b = Partition.from_list([[1, 3], [2, 4]])
print(refines(Partition.finest(4), a), refines(a, b))
print("meet:", meet(a, b))

# %%
# Sorting from fine to coarse lists more blocks first.
for part in fine_to_coarse(enumerate_partitions(3)):
    print(part)
