#!/usr/bin/env python3
"""
Main entry point for hopforce when run as module
"""
from hopforce.main import main

if __name__ == "__main__":
    main()
