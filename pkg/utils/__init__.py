from .utils import *
from .errors import *
from .summation import *
