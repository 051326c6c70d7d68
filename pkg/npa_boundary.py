#!/usr/bin/env python3
"""
NPA Boundary - relaxations of the quantum set in the simplest Bell scenario.
Reproducible table, onset and scatter experiments from the command line.
"""

import sys
import os

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from npaboundary.utils.cli import main


if __name__ == '__main__':
    sys.exit(main())
