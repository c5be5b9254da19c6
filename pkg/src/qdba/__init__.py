"""Discrete-event simulation of EPR-pair detectable Byzantine agreement."""

__version__ = "0.1.0"
