"""Transparency-information toolkit.

Building blocks for machine-readable privacy-policy transparency:
document model and canonical form (``core``), guided annotation
(``annotation``), a REST document hub (``hub``), privacy scoring
(``scoring``), automated subject-access requests (``dsar``), and local
data-export analysis (``archive``).
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
