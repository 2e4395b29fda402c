from ._tucore import *  # noqa: F401,F403
from ._tucore import __doc__  # noqa: F401
