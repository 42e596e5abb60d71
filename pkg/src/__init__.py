"""
pohocheck
Numerical verification of Pohozaev identities for half-harmonic maps on the
circle and the line, and for planar maps with holomorphic vector fields.
"""

__version__ = "0.1.0"
