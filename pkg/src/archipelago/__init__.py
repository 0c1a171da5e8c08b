"""Two-parameter 1D probabilistic cellular automaton: simulation and exact analysis."""

__version__ = "0.1.0"
