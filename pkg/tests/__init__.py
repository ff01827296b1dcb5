"""
Test suite for the ascents toolkit.
"""
