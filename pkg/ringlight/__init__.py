"""
ringlight - entangled light from a parametrically modulated ring resonator.

Deterministic simulator and analysis toolkit for a two-mode (+k, -k) ring
resonator whose permittivity is modulated periodically while it is coupled
to a finite-temperature Markovian bath:

- Gaussian-state diagnostics (photon number, purity, logarithmic negativity)
- Periodic modulation profiles (rectangular, sinusoidal, sampled)
- Moment-equation dynamics with collective dissipation
- Floquet analysis, stability charts and resonance optimization
- Closed-form photon yield and entanglement with their ODE oracles
"""

__version__ = "1.0.0"
__description__ = "Parametric entangled-light simulator for ring resonators"
