"""A machine for processes that branch the logical timeline.

Programs declare lattice-valued variables and compose concurrent
processes over them; each logical instant the machine runs one node of
a search tree, and `space` blocks fork child nodes for the queue.
Search strategies (depth bounds, discrepancy bounds, branch and bound)
are ordinary processes composed in parallel with the problem.
"""

from . import assets, branches, lattice, problems, solver
from .analysis import Loaded, analyze_source, load_program
from .ast import pretty, pretty_program
from .diagnostics import Diagnostic, DiagnosticError
from .lattice import Es, FSet, LMax, LMin
from .parser import parse
from .runtime import (PAUSED, STOPPED, SUSPENDED, TERMINATED, FifoQueue,
                      InstantRecord, Machine, Node, RunStats, StackLR, VmError)

__version__ = "0.1.0"

__all__ = [
    "Diagnostic", "DiagnosticError", "Es", "FSet", "FifoQueue",
    "InstantRecord", "LMax", "LMin", "Loaded", "Machine", "Node", "PAUSED",
    "RunStats", "STOPPED", "SUSPENDED", "StackLR", "TERMINATED", "VmError",
    "analyze_source", "assets", "branches", "lattice", "load_program",
    "parse", "pretty", "pretty_program", "problems", "solver", "__version__",
]
