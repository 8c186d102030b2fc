from .gf2 import *
from .pauli import *
