"""
.. tutorial-case_a

First Simulation
================

Sweeps additive rank errors of rank 0 to 3 over the (8, 4) Gabidulin code. Ranks up to
t = 2 are always corrected; rank 3 lies beyond the decoding radius and shows declared
failures.
"""

###############################################################################
# Load required libraries
# -----------------------
#
from rankmetric.postprocess.reporting import generate_report
from rankmetric.simulation import Simulation

file_ = "config.yml"

sim_a = Simulation.from_yml(file_)
sim_a.set_tasks()
sim_a.run()
generate_report(sim_a)
print(sim_a.to_csv())
