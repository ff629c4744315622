"""
Command-line handlers and the verifier registry
"""
