"""Utility modules: logging and error handling."""
