#!/usr/bin/env python3
"""
ehrenlab command-line entry point

    python app.py check --out results
    python app.py experiment linear-harmonic --out results
"""

import sys

from ehrenlab.cli import main

if __name__ == '__main__':
    sys.exit(main())
