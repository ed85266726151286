"""Nice sections of width three and horizon two: construction, retract search,
and certificates."""

from .maps import BudgetExceeded, RetractionMap
from .poset import Poset, from_strict_pairs
from .sections import SectionCode, build_section, section

__all__ = ["BudgetExceeded", "Poset", "RetractionMap", "SectionCode", "build_section", "from_strict_pairs", "section"]
