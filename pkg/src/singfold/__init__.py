"""Exact toolkit for quotient deformation families of simple surface
singularities: ADE classification of fibers, sub-root-system enumeration,
flat-chart base changes, and end-to-end correspondence verification."""

__version__ = "0.1.0"
