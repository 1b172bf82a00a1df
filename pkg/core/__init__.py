"""Numerical core: Gaussian states, the memory channel, capacity bounds and the Fock oracle."""
