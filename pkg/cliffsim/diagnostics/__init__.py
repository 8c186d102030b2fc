from .bounds import *
from .percolation import *
