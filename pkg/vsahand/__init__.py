'''Variable stiffness hand toolkit'''

from .sim import *
