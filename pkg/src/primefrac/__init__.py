"""Continued fractions whose partial quotients are primes from a chosen family."""

__version__ = "0.1.0"
