"""
emp_cs - entropy-minimization matching pursuit for compressed sensing.

Recovery algorithms, synthetic problem generators and the benchmark harness
used to compare them.
"""

__version__ = "0.1.0"
