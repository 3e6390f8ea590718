"""
Hyperparameter optimization helper import script.  Import all objects from
the classes, models, and functions that are present in the corresponding
__init__.py "__all__" definition.
"""
from .exceptions import *
from .spaces import *
from .data import *
from .metrics import *
from .gbt import *
from .objective import *
from .tuners import *
from .bench import *
