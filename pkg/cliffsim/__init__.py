from .exceptions import *
from . import linalg, circuits, noise, methods, oracle, diagnostics

__version__ = "0.1.0"
