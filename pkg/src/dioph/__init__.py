"""Integer factoring through small solutions of linear Diophantine equations,
with the supporting continued-fraction, congruence and counting tools."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["__version__", "BACKEND"]
