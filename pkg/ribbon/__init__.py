"""
ribbon-invariants: ribbon-move invariants of 2-knots from algebraic
Seifert-hypersurface data.
"""

__version__ = "0.1.0"
