"""superw: exact symbolic engine for vertex algebras, SUSY W-algebras and their finite counterparts."""

__version__ = "0.1.0"
