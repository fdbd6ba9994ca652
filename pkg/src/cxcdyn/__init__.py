"""Desk-scale constructions and diagnostics for coarse expanding conformal
dynamical systems: weighted multigraphs and their dimension equations,
graph-directed interval systems with circle skew products, planar IFS
attractors with kneading sequences, folded-cube expanding maps, the
pillowcase family, and a generic cover-refinement verifier."""

from . import dendrite, dimension, gdms, graphs, menger, pillowcase, render, skew, verify

__all__ = ["dendrite", "dimension", "gdms", "graphs", "menger", "pillowcase",
           "render", "skew", "verify"]

__version__ = "0.1.0"
