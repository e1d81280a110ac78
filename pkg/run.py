#!/usr/bin/env python3
"""
Startup script for signbound.
Runs the command-line application, e.g. `python run.py verify --summary`.
"""

from src.main import main

if __name__ == "__main__":
    main()
