"""
Configuration management for the ascents toolkit.
"""
