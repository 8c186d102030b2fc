from .density import *
from .counting import *
