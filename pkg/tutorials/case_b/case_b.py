"""
.. tutorial-case_b

Lifted Codes
============

Transmits lifted codewords of the (16, 8) Gabidulin code through a channel that deletes
rows, adds deviation rows and corrupts the survivors. The last budget violates
2·epsilon + mu + delta <= d - 1 and is rejected by the decoder.
"""

from rankmetric.postprocess.reporting import generate_report
from rankmetric.simulation import Simulation

sim_b = Simulation.from_yml("config.yml")
sim_b.set_tasks()
sim_b.run()
generate_report(sim_b)
