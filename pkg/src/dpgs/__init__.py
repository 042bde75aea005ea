"""Differentially private graph statistics over edge-update streams."""

from dpgs.stream import EdgeUpdate, UpdateStream, DynamicGraph, Kind

__all__ = ["EdgeUpdate", "UpdateStream", "DynamicGraph", "Kind"]
__version__ = "0.1.0"
