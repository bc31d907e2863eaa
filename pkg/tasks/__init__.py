from .base_task import BaseTask
from .fdtc_task import FDTCTask
from .foliation_task import FoliationTask
from .topology_task import TopologyTask
from .surface_task import SurfaceTask
