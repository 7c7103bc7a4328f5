"""Physics services: Gaussian states, modulation, dynamics, Floquet analysis, closed forms."""
