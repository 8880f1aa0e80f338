"""
Tests module initialization.
"""
