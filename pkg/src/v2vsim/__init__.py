"""Non-stationary vehicle-to-vehicle MIMO channel simulator."""
from .angles import AngleDistribution, RaySet, build_rayset, vm_pdf, vm_sample
from .bessel import bessel_i0_complex
from .chanmodel import (CirFrame, CirSeries, SimulationConfig, Terminal, gain_at, generate_cir,
                        simulate)
from .cirio import export_cir, read_raw
from .config import dump_config, load_config
from .errors import (BesselRangeError, ConfigError, DegenerateGeometryError, DegeneratePowerError,
                     DomainError, ExportError, HorizonError, QuadratureError)
from .geometry import AntennaArray, ClusterGeometry, VelocityProfile
from .params import PowerDelayParams
from .presets import PRESETS, preset
from .stats import (CorrelationQuery, correlation_closed, correlation_quadrature, sccf_closed,
                    sccf_quadrature, stcf_mc, tacf_closed, tacf_quadrature, tacf_rs)

__version__ = "0.1.0"
