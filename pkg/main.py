#!/usr/bin/env python3
"""
Walk Teleport Auditor
Two-coin quantum walk teleportation simulator and claim verifier
"""

import sys
from src.app import run_app

if __name__ == "__main__":
    sys.exit(run_app())
