"""Module varieties of bound quiver algebras over Q and F_p."""
from .algebra.presentation import Presentation, Relation
from .quiver import Path, Quiver
from .quivfile import format, parse

__version__ = "0.1.0"

__all__ = ["Path", "Presentation", "Quiver", "Relation", "format", "parse", "__version__"]
