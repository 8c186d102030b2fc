from .noise import *
