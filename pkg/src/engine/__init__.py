"""
Core computations of the Smooth Projection Engine: angle sequences,
boundary geometry, projection and the numeric verifiers
"""
