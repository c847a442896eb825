"""
Oracles directly, and the command line
======================================

The oracles can be called on any bipartite density matrix. The same analysis
is available from the ``entangloc`` command, which reads and writes JSON.
"""

# %%
import tempfile
from pathlib import Path

from entangloc import cli
from entangloc.io import load_report
from entangloc.oracles import REGISTRY, oracle_ccnr, oracle_ppt
from entangloc.states import maximally_mixed, werner_2qubit

# %%
# Calling oracles
# ---------------
rho = werner_2qubit(0.4)
print(oracle_ppt(rho, 2, 2))
print(oracle_ccnr(rho, 2, 2))
print(sorted(REGISTRY))

# %%
# In 3 x 3 a positive partial transpose does not prove separability, so
# even the maximally mixed state gets an honest INCONCLUSIVE.
print(oracle_ppt(maximally_mixed((3, 3)).matrix, 3, 3).verdict)

# %%
# The command line
# ----------------
# ``generate`` writes a state file from a short spec, ``analyze`` writes a
# report and exits with 0, 1 or 2 for completely separable, partially
# entangled or completely entangled, and ``verify`` re-checks a report.
workdir = Path(tempfile.mkdtemp())
state, report = workdir / "state.json", workdir / "report.json"
cli.main(["generate", "product:(bell,random:3:7)", "-o", str(state)])
code = cli.main(["analyze", str(state), "-o", str(report)])
print("exit code", code, "partition", load_report(report)["partition"])
print("verify exit code", cli.main(["verify", str(state), str(report)]))
