from .samplermethod import *
from .clifford import *
from .iqp import *
