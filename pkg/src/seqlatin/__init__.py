"""Sequencings of finite groups and the complete Latin squares they generate."""

__version__ = "0.1.0"
