"""Exact certification of homological claims about cyclic Nakayama algebras,
hereditary orders and skew group algebras, over prime fields."""

__version__ = "0.1.0"
