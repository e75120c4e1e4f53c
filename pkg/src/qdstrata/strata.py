r"""
Singularity data of strata of quadratic and Abelian differentials.

A stratum of meromorphic quadratic differentials with at most simple poles
is written ``Q(d_1, ..., d_m)``: the surface has a conical point of angle
``(d_i + 2) pi`` for every entry.  A stratum of holomorphic Abelian
differentials is written ``H(l_1, ..., l_m)`` with cone angles
``(2 l_i + 2) pi``.

Both kinds of data are stored as multisets sorted in descending order, so
that equality and hashing do not depend on the order in which the entries
were given::

    >>> QSingularityData.of(2, -1, -1)
    Q(2,-1,-1)
    >>> genus_q(QSingularityData.of(2, 4, 4, 8, 30))
    13
    >>> genus_h(HSingularityData.of())
    1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union


class StratumError(ValueError):
    """Raised when singularity data violate the invariants of a stratum."""


def _sorted_desc(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted((int(v) for v in values), reverse=True))


def _text(values: tuple[int, ...]) -> str:
    return ",".join(str(v) for v in values)


@dataclass(frozen=True, order=True)
class QSingularityData:
    """Orders of the singularities of a quadratic differential."""

    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", _sorted_desc(self.orders))

    @classmethod
    def of(cls, *orders: int) -> "QSingularityData":
        return cls(tuple(orders))

    def problems(self) -> list[str]:
        """List the violated invariants (empty when the data are valid)."""
        out = []
        if any(d < -1 for d in self.orders):
            out.append("orders must be >= -1")
        total = sum(self.orders)
        if total % 4:
            out.append("sum of orders must be divisible by 4")
        if total < -4:
            out.append("sum of orders must be at least -4")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def text(self) -> str:
        return _text(self.orders)

    def __len__(self) -> int:
        return len(self.orders)

    def __iter__(self):
        return iter(self.orders)

    def __str__(self) -> str:
        return "Q(%s)" % self.text()

    __repr__ = __str__


@dataclass(frozen=True, order=True)
class HSingularityData:
    """Degrees of the zeros of an Abelian differential (0 is a marked point)."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", _sorted_desc(self.degrees))

    @classmethod
    def of(cls, *degrees: int) -> "HSingularityData":
        return cls(tuple(degrees))

    def problems(self) -> list[str]:
        out = []
        if any(d < 0 for d in self.degrees):
            out.append("degrees must be >= 0")
        if sum(self.degrees) % 2:
            out.append("sum of degrees must be even")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def text(self) -> str:
        return _text(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __str__(self) -> str:
        return "H(%s)" % self.text()

    __repr__ = __str__


SingularityData = Union[QSingularityData, HSingularityData]


def genus_q(data: QSingularityData) -> int:
    """Genus ``g`` of a surface in ``Q(data)``: the orders sum to ``4g - 4``."""
    problems = data.problems()
    if problems:
        raise StratumError("%s: %s" % (data, "; ".join(problems)))
    return (sum(data.orders) + 4) // 4


def genus_h(data: HSingularityData) -> int:
    """Genus ``g`` of a surface in ``H(data)``: the degrees sum to ``2g - 2``."""
    problems = data.problems()
    if problems:
        raise StratumError("%s: %s" % (data, "; ".join(problems)))
    return (sum(data.degrees) + 2) // 2


def genus(data: SingularityData) -> int:
    if isinstance(data, QSingularityData):
        return genus_q(data)
    return genus_h(data)


def strip_zeros(data):
    """Remove the marked points (entries equal to zero)."""
    if isinstance(data, QSingularityData):
        return QSingularityData(tuple(d for d in data.orders if d))
    if isinstance(data, HSingularityData):
        return HSingularityData(tuple(d for d in data.degrees if d))
    return type(data)(d for d in data if d)


# Strata of quadratic differentials with at most simple poles that contain
# no surface at all (up to marked points).  Stored as sorted tuples.
EMPTY_QUADRATIC_STRATA = frozenset({(), (1, -1), (3, 1), (4,)})


def is_empty_q(data: QSingularityData) -> bool:
    """Whether ``Q(data)`` contains no flat surface (marked points ignored)."""
    return strip_zeros(data).orders in EMPTY_QUADRATIC_STRATA


def is_empty_h(data: HSingularityData) -> bool:
    """Strata of Abelian differentials are nonempty whenever the data are valid."""
    return not data.is_valid()


def is_empty(data: SingularityData) -> bool:
    if isinstance(data, QSingularityData):
        return is_empty_q(data)
    return is_empty_h(data)


_STRATUM_RE = re.compile(r"^\s*(?:([QqHh])\s*\(\s*(.*?)\s*\)|(.*?))\s*$")


def parse_stratum(text: str, default: str = "Q") -> SingularityData:
    """Parse ``Q(2,-1,-1)``, ``H(1,1)`` or a bare list such as ``2, 2``.

    Bare lists are read as quadratic data unless ``default`` is ``"H"``.
    """
    m = _STRATUM_RE.match(text)
    if m is None:
        raise StratumError("cannot parse stratum %r" % text)
    letter = (m.group(1) or default).upper()
    body = m.group(2) if m.group(1) else m.group(3)
    body = body.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    entries = []
    if body:
        for token in body.split(","):
            token = token.strip()
            if not re.fullmatch(r"[+-]?\d+", token):
                raise StratumError("cannot parse stratum %r: bad entry %r" % (text, token))
            entries.append(int(token))
    if letter == "Q":
        return QSingularityData(tuple(entries))
    return HSingularityData(tuple(entries))
