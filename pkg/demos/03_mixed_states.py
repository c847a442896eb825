"""
Mixed states and separability oracles
=====================================

For density matrices no single test settles separability. ``localize_mixed``
asks a chain of one-sided oracles about each cut and records which one
answered and why.
"""

# %%
from entangloc.corpus import random_separable_mixture
from entangloc.mixed import check_pi_separable_constructed, localize_mixed
from entangloc.partitions import Partition
from entangloc.states import density_from_pure, make_basis, mix, tensor_density, werner_2qubit

# %%
# Werner states
# -------------
# The partial transpose of the two-qubit Werner state has a negative
# eigenvalue once the singlet weight passes one third.
for p in (0.2, 0.5, 0.9):
    report = localize_mixed(werner_2qubit(p))
    print(p, report.partition, report.evidence[0]["oracle"], report.evidence[0]["certificate"])

# %%
# A classically correlated mixture
# --------------------------------
# An equal mixture of ``|000>`` and ``|111>`` is fully separable. Plain PPT
# cannot prove that for a 2 x 4 cut, but the rank condition can.
rho = mix([(0.5, density_from_pure(make_basis((2, 2, 2), [0, 0, 0]))),
           (0.5, density_from_pure(make_basis((2, 2, 2), [1, 1, 1])))])
strict = localize_mixed(rho)
print("default oracles:", strict.partition, "exact:", strict.exact)

# %%
# With fewer oracles some cuts stay unresolved. The definite policy refuses
# to split them; the heuristic policy splits and tags the split.
weak = localize_mixed(rho, oracles=["ppt", "ccnr"])
loose = localize_mixed(rho, oracles=["ppt", "ccnr"], policy="heuristic")
print("definite:", weak.partition, "unresolved:", len(weak.unresolved))
print("heuristic:", loose.partition, [c["tag"] for c in loose.confidence])

# %%
# Products of blocks
# ------------------
rho = tensor_density(werner_2qubit(0.8), werner_2qubit(0.1))
print(localize_mixed(rho).partition)

# %%
# Checking a supplied decomposition
# ---------------------------------
# When a blockwise product mixture is known, it can be checked directly.
part = Partition.from_list([[1, 3], [2]])
rho, decomposition = random_separable_mixture(part, (2, 2, 3), terms=3, seed=0)
print(check_pi_separable_constructed(rho, part, decomposition))
tweaked = [(w + 1e-3 if k == 0 else w, f) for k, (w, f) in enumerate(decomposition)]
print(check_pi_separable_constructed(rho, part, tweaked))
