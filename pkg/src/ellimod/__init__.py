"""Exact moduli data of semistable principal bundles over an elliptic curve."""

__version__ = "0.1.0"
