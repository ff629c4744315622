"""
Smooth Projection Engine - metric projection onto a smooth convex set
whose projection has no directional derivative at (2,0)
"""
