"""
Utilities module for emp_cs.

Contains input validators and output formatters.
"""
