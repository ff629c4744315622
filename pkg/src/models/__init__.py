"""
Data models for the Smooth Projection Engine
"""
