from . import builder
from . import constants
from . import errors

from .avnmp import *
from .metrics import emit_report, summarize, summarize_csv
