#!/usr/bin/env python3
"""Extropy toolkit - weighted cumulative past extropy.

Simple entry point for running the CLI from a source checkout:

    python run.py measure --dist uniform:0,1 --kind wcpj --m 1 --method both
"""
import sys

from extropy.cli import main

if __name__ == "__main__":
    sys.exit(main())
