"""Double-slit matter-wave interferometer with cavity quantum marking.

Simulates the interference pattern carried solely by looped trajectories
(paths that cross the slit plane three times), using a complex-Gaussian
propagator chain, a closed-form coefficient table, quantum-marking state
algebra, and cross-checking machinery that ties the two wavefunction routes
together with independent numerical quadrature.
"""

__version__ = "0.1.0"

from .params import (  # noqa: F401
    ConfigError,
    DerivedQuantities,
    PhysicsConfig,
    derive,
    load_config,
    parse_config_text,
    rubidium_config,
    validate_regime,
)
