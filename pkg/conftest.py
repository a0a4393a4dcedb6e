import os
import sys

# lets tests import run.py from the repository root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
