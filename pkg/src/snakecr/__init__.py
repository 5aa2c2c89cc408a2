"""Sub-Riemannian and CR geometry of the three-segment nonholonomic snake."""
__version__ = "0.1.0"
