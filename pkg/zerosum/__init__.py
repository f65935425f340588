from .exceptions import *  # NOQA
from .sequence import Interval, Seq, parse  # NOQA

__version__ = "0.1.0.dev0"
