"""
idpath - sample path generation for infinitely divisible processes.

This package simulates stochastic integrals X_t = ∫ f(t,s) dL_s by truncating
shot noise series representations of the Lévy integrator, and ships the error
diagnostics that go with the truncation.
"""

__version__ = "0.1.0"
