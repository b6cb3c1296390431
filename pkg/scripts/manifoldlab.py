#!/usr/bin/env python
"""manifoldlab.py runs ManifoldLab experiments.

This script is intended to be run directly. This example runs the geometry
experiment from a configuration file, with seed 3, into runs/geometry:

    manifoldlab.py geometry -c ./manifoldlab.cfg --seed 3 --out runs/geometry

See `manifoldlab.py <command> --help` for more information.
"""
import sys

from ManifoldLab.Commands import main

if __name__ == '__main__':
    sys.exit(main())
