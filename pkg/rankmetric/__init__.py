from rankmetric import field
from rankmetric import linearized
from rankmetric import matrix
from rankmetric import gabidulin
from rankmetric import kk
from rankmetric import channel
from rankmetric import simulation
from rankmetric.infrastructure import engine, registries, logger
from rankmetric.utils import readers, helpers
from rankmetric.postprocess import reporting

__version__ = "0.1.0"
