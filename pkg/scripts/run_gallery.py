#!/usr/bin/env python3
"""Run every gallery entry and print the per-check transcript.

Usage: python scripts/run_gallery.py [--depth N] [--jobs N] [--json]
"""

import sys

from posmon.cli import main

if __name__ == "__main__":
    sys.exit(main(["gallery", "--run-all", *sys.argv[1:]]))
