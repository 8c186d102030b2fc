from .geometry import *
from .clifford import *
from .iqp import *
from .states import *
from .parser import *
from .generators import *
