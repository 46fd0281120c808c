"""Symbolic orthogonal product matrices (OPMs).

An OPM is a table whose rows are product states and whose entries are the
computational labels ``0``/``1``, vector variables ``b``/``b'`` naming an
orthonormal qubit pair, or the star ``*``.  A star abbreviates a fresh
variable pair stacked over two rows, so a display row ``0 *`` stands for the
two rows ``0 s1`` and ``0 s1'``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable

from .catalog_data import CATALOG_TEXT, STAR_NAMES

__all__ = [
    "EntryKind",
    "OpmEntry",
    "OpmRow",
    "Opm",
    "ExpandedOpm",
    "OpmError",
    "parse_opm",
    "render_opm",
    "expand_stars",
    "catalog",
    "get_opm",
    "opm_to_json",
    "opm_from_json",
]

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
FRESH_PREFIX = "s"


class OpmError(ValueError):
    """Raised for malformed OPM text or structurally invalid matrices."""


class EntryKind(enum.Enum):
    ZERO = "0"
    ONE = "1"
    VAR = "var"
    STAR = "*"


@dataclass(frozen=True)
class OpmEntry:
    kind: EntryKind
    family: str | None = None
    primed: bool = False

    def __post_init__(self) -> None:
        if self.kind is EntryKind.VAR:
            if not self.family:
                raise OpmError("variable entry needs a nonempty family name")
        elif self.family is not None or self.primed:
            raise OpmError(f"{self.kind.value!r} entry carries no payload")

    @classmethod
    def parse(cls, token: str) -> OpmEntry:
        if token == "0":
            return ZERO
        if token == "1":
            return ONE
        if token == "*":
            return STAR
        primed = token.endswith("'")
        name = token[:-1] if primed else token
        if not _NAME_RE.match(name):
            raise OpmError(f"invalid OPM token {token!r}")
        return cls(EntryKind.VAR, name, primed)

    def token(self) -> str:
        if self.kind is EntryKind.VAR:
            return self.family + ("'" if self.primed else "")
        return self.kind.value

    def __str__(self) -> str:
        return self.token()


ZERO = OpmEntry(EntryKind.ZERO)
ONE = OpmEntry(EntryKind.ONE)
STAR = OpmEntry(EntryKind.STAR)


@dataclass(frozen=True)
class OpmRow:
    entries: tuple[OpmEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if sum(e.kind is EntryKind.STAR for e in self.entries) > 1:
            raise OpmError(f"row {self.tokens()} has more than one star")

    def star_position(self) -> int | None:
        for j, e in enumerate(self.entries):
            if e.kind is EntryKind.STAR:
                return j
        return None

    def tokens(self) -> list[str]:
        return [e.token() for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Opm:
    name: str
    parties: int
    rows: tuple[OpmRow, ...]
    # names for the star pairs in row order, where the display matrix has
    # conventional names for them (M2: b, c; M31: a, b, c)
    star_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "star_names", tuple(self.star_names))
        if self.star_names and len(self.star_names) != self.star_count:
            raise OpmError(f"{self.name}: {len(self.star_names)} star names for {self.star_count} stars")
        if self.parties < 2:
            raise OpmError("an OPM needs at least two parties")
        for row in self.rows:
            if len(row) != self.parties:
                raise OpmError(
                    f"row {row.tokens()} has {len(row)} entries, expected {self.parties}"
                )

    @property
    def families(self) -> list[str]:
        return _families(self.rows)

    @property
    def star_count(self) -> int:
        return sum(row.star_position() is not None for row in self.rows)

    def expand(self) -> ExpandedOpm:
        return expand_stars(self)


@dataclass(frozen=True)
class ExpandedOpm:
    name: str
    parties: int
    rows: tuple[OpmRow, ...]
    fresh_families: tuple[str, ...] = field(default=())

    @property
    def families(self) -> list[str]:
        return _families(self.rows)

    @property
    def author_families(self) -> list[str]:
        fresh = set(self.fresh_families)
        return [f for f in self.families if f not in fresh]


def _families(rows: Iterable[OpmRow]) -> list[str]:
    seen: dict[str, None] = {}
    for row in rows:
        for e in row.entries:
            if e.kind is EntryKind.VAR:
                seen.setdefault(e.family, None)
    return list(seen)


def parse_opm(text: str, name: str = "custom") -> Opm:
    """Parse whitespace-separated OPM rows.

    Blank lines and ``#`` comments are ignored.  Tokens are ``0``, ``1``,
    ``*``, ``<name>`` or ``<name>'``.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append(OpmRow(tuple(OpmEntry.parse(tok) for tok in line.split())))
    if not rows:
        raise OpmError("empty OPM text")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise OpmError(f"ragged OPM rows, widths {sorted(widths)}")
    return Opm(name=name, parties=widths.pop(), rows=tuple(rows))


def render_opm(opm: Opm | ExpandedOpm) -> str:
    return "\n".join(" ".join(row.tokens()) for row in opm.rows)


def expand_stars(opm: Opm) -> ExpandedOpm:
    """Replace each starred row by an unprimed/primed pair of a fresh family.

    Fresh families are named ``s1, s2, ...`` in row order, skipping any name
    the matrix already uses, unless the OPM carries ``star_names``.
    """
    taken = set(opm.families)
    if set(opm.star_names) & taken:
        raise OpmError(f"{opm.name}: star names collide with families {sorted(taken)}")
    names = iter(opm.star_names)
    fresh: list[str] = []
    counter = 0
    rows: list[OpmRow] = []
    for row in opm.rows:
        pos = row.star_position()
        if pos is None:
            rows.append(row)
            continue
        fam = next(names, None)
        if fam is None:
            counter += 1
            while f"{FRESH_PREFIX}{counter}" in taken:
                counter += 1
            fam = f"{FRESH_PREFIX}{counter}"
        fresh.append(fam)
        for primed in (False, True):
            entries = list(row.entries)
            entries[pos] = OpmEntry(EntryKind.VAR, fam, primed)
            rows.append(OpmRow(tuple(entries)))
    if len(rows) != 2**opm.parties:
        raise OpmError(
            f"{opm.name}: expansion gives {len(rows)} rows, expected {2**opm.parties}"
        )
    return ExpandedOpm(opm.name, opm.parties, tuple(rows), tuple(fresh))


def opm_to_json(opm: Opm) -> dict:
    return {"name": opm.name, "parties": opm.parties, "rows": [r.tokens() for r in opm.rows]}


def opm_from_json(data: dict) -> Opm:
    rows = data["rows"]
    opm = parse_opm("\n".join(" ".join(r) for r in rows), name=data.get("name", "custom"))
    if "parties" in data and int(data["parties"]) != opm.parties:
        raise OpmError(f"declared parties {data['parties']} but rows have {opm.parties}")
    return opm


_CATALOG: dict[str, Opm] | None = None


def catalog() -> dict[str, Opm]:
    """All 37 catalog OPMs keyed by name, in display order (M2, M31..M33, M41..M433)."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = {}
        for name, text in CATALOG_TEXT.items():
            opm = parse_opm(text, name)
            if name in STAR_NAMES:
                opm = Opm(opm.name, opm.parties, opm.rows, STAR_NAMES[name])
            _CATALOG[name] = opm
    return dict(_CATALOG)


def get_opm(name: str) -> Opm:
    cat = catalog()
    key = name if name in cat else name.upper()
    if key not in cat:
        raise KeyError(f"unknown OPM {name!r}; known: {', '.join(cat)}")
    return cat[key]
