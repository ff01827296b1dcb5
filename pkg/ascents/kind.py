"""
Path families studied by the toolkit.

Three families of non-negative Łukasiewicz paths are supported:

- EXCURSION: paths returning to altitude 0
- DISPERSED: excursions with extra horizontal steps allowed at altitude 0
  (only for step sets without the step 0)
- MEANDER: paths with unrestricted final altitude
"""

import re
from enum import Enum

from ascents.errors import InvalidInputError


class PathKind(str, Enum):
    """
    Path family selector.

    The value is the lower-case name used on the command line and in
    serialized output.
    """

    EXCURSION = "excursion"
    DISPERSED = "dispersed"
    MEANDER = "meander"

    @property
    def ends_at_zero(self) -> bool:
        """True for families whose paths must return to altitude 0."""
        return self is not PathKind.MEANDER


def parse_kind(text: str) -> PathKind:
    """
    Parse a path family name.

    Accepts the canonical names plus common abbreviations and plurals,
    case-insensitively ("e", "exc", "Excursions", "dispersed-excursion", "meanders").

    Args:
        text: User supplied family name

    Returns:
        The matching PathKind

    Raises:
        InvalidInputError: If the name matches no family
    """
    normalized = text.strip().lower()

    patterns = [
        (r"^d(isp(ersed)?([\s_-]*excursions?)?)?$", PathKind.DISPERSED),
        (r"^e(xc(ursions?)?)?$", PathKind.EXCURSION),
        (r"^m(ea(nders?)?)?$", PathKind.MEANDER),
    ]

    for pattern, kind in patterns:
        if re.match(pattern, normalized):
            return kind

    raise InvalidInputError(
        f"Unknown path kind: {text!r}. Use one of: excursion, dispersed, meander."
    )
