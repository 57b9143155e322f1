#!/usr/bin/env python3
"""
Exception hierarchy shared by the library and the command line
"""

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_LIMIT = 4


class HopforceError(Exception):
    """Base class; exit_code is what the CLI returns for it"""
    exit_code = EXIT_USAGE


class GraphError(HopforceError, ValueError):
    """Invalid graph, vertex or family parameter"""


class Graph6ParseError(GraphError):
    exit_code = EXIT_PARSE

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class ForcingError(HopforceError, ValueError):
    """A force or set of forces that the color change rule does not allow"""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (force #{index})"
        super().__init__(message)
        self.index = index


class LimitExceeded(HopforceError):
    """A search ran out of its time or state budget"""
    exit_code = EXIT_LIMIT

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BoundViolation(HopforceError, AssertionError):
    """A proven inequality failed on computed values, i.e. a solver bug"""
    exit_code = EXIT_MISMATCH


class UnsupportedRange(HopforceError, ValueError):
    """Parameter outside the range an enumeration is run for"""
