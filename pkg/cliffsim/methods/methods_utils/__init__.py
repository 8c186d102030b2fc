from .union_find import *
from .group_table import *
from .sparse_state import *
