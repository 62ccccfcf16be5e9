"""
Core module for emp_cs.

Contains process configuration, logging setup and the dense linear-algebra substrate.
"""
