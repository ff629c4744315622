"""
Configuration parsing, artifact export and SVG rendering
"""
