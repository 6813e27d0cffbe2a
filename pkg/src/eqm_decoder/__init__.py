"""
EqM action decoder.

Time-free conditional vector fields trained by equilibrium matching, decoded
by Nesterov equilibrium solving with residual stopping and warm starts, plus a
desk-scale receding-horizon benchmark harness.
"""

__version__ = "0.1.0"
