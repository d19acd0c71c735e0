"""
ehrenlab: pseudo-spectral Schrodinger dynamics with Ehrenfest, Galilean
covariance and conservation-law diagnostics
"""

__version__ = '1.0.0'
