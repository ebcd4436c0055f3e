"""Group descriptors: a small line-oriented format and the default catalog.

Grammar (one entry per block, blank lines and '#' comments ignored):

    [entry NAME]
    series = A            # one of A B C D E F G
    rank = 2
    auto = (1 2)          # diagram automorphism in 1-based cycle notation, or id
    res_degree = 1        # degree of the constant-field extension for Res
    q = 5                 # prime power >= 3
    genus = 0
    numerator = 1         # comma-separated coefficients, low degree first
    suites = local, global, poles, chain, oracle, convexity

Only ``series`` and ``rank`` are required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path

from .galois_form import FormError, QuasiSplitDatum, format_cycles, parse_cycles
from .rootsys import CartanDatum, RootSystemError, cartan_matrix

SUITES = ("local", "global", "poles", "chain", "oracle", "convexity")
FIELDS = ("series", "rank", "auto", "res_degree", "q", "genus", "numerator", "suites")
DEFAULT_Q = 5

_HEADER = re.compile(r"^\[entry\s+([A-Za-z0-9_.+-]+)\s*\]$")


class DescriptorError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None, source: str = "<descriptor>"):
        where = source
        if line is not None:
            where += f":{line}"
        if field is not None:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.field = field


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    datum: QuasiSplitDatum
    suites: tuple[str, ...] = SUITES

    def with_q(self, q: int) -> CatalogEntry:
        return replace(self, datum=replace(self.datum, q=q))


def _int(value: str, key: str, line: int, source: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise DescriptorError(f"expected an integer, got {value!r}", line, key, source) from None


def _build(name: str, fields: dict, lines: dict, source: str, header_line: int) -> CatalogEntry:
    for key in ("series", "rank"):
        if key not in fields:
            raise DescriptorError(f"entry {name!r} lacks required field", header_line, key, source)
    series = fields["series"].strip().upper()
    rank = _int(fields["rank"], "rank", lines["rank"], source)
    try:
        absolute = CartanDatum(series, rank, cartan_matrix(series, rank))
    except (RootSystemError, ValueError) as exc:
        raise DescriptorError(str(exc), lines["series"], "series", source) from None
    try:
        auto = parse_cycles(fields.get("auto", "id"), rank)
    except FormError as exc:
        raise DescriptorError(str(exc), lines.get("auto"), "auto", source) from None
    kwargs = {}
    for key in ("res_degree", "q", "genus"):
        if key in fields:
            kwargs[key] = _int(fields[key], key, lines[key], source)
    kwargs.setdefault("q", DEFAULT_Q)
    if "numerator" in fields:
        coeffs = [c.strip() for c in fields["numerator"].split(",") if c.strip()]
        kwargs["zeta_numerator"] = tuple(_int(c, "numerator", lines["numerator"], source) for c in coeffs)
    suites = SUITES
    if "suites" in fields:
        suites = tuple(s.strip() for s in fields["suites"].split(",") if s.strip())
        for s in suites:
            if s not in SUITES:
                raise DescriptorError(f"unknown suite {s!r} (known: {', '.join(SUITES)})", lines["suites"], "suites", source)
    try:
        datum = QuasiSplitDatum(absolute, auto, **kwargs)
    except FormError as exc:
        msg = str(exc)
        prefixes = {"res_degree": "res_degree", "q must": "q", "genus": "genus", "zeta numerator": "numerator"}
        key = next((k for p, k in prefixes.items() if msg.startswith(p)), "auto")
        raise DescriptorError(msg, lines.get(key, header_line), key, source) from None
    return CatalogEntry(name, datum, suites)


def parse_descriptor(text: str, source: str = "<descriptor>") -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    names: set[str] = set()
    current: tuple[str, int] | None = None
    fields: dict = {}
    lines: dict = {}

    def flush() -> None:
        if current is not None:
            entries.append(_build(current[0], fields, lines, source, current[1]))

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            flush()
            name = m.group(1)
            if name in names:
                raise DescriptorError(f"duplicate entry {name!r}", no, None, source)
            names.add(name)
            current, fields, lines = (name, no), {}, {}
            continue
        if line.startswith("["):
            raise DescriptorError(f"malformed header {line!r}", no, None, source)
        if current is None:
            raise DescriptorError("field outside of an entry", no, None, source)
        if "=" not in line:
            raise DescriptorError(f"expected 'key = value', got {line!r}", no, None, source)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in FIELDS:
            raise DescriptorError(f"unknown field (known: {', '.join(FIELDS)})", no, key, source)
        if key in fields:
            raise DescriptorError("field given twice", no, key, source)
        fields[key], lines[key] = value, no
    flush()
    if not entries:
        raise DescriptorError("no entries found", None, None, source)
    return entries


def load_catalog(path: str | Path) -> list[CatalogEntry]:
    p = Path(path)
    return parse_descriptor(p.read_text(), str(p))


# -- default catalog --------------------------------------------------------------

_BASE = [
    ("A1", "A", 1, "id"),
    ("A2", "A", 2, "id"),
    ("A3", "A", 3, "id"),
    ("A4", "A", 4, "id"),
    ("B2", "B", 2, "id"),
    ("C3", "C", 3, "id"),
    ("D4", "D", 4, "id"),
    ("G2", "G", 2, "id"),
    ("F4", "F", 4, "id"),
    ("2A2", "A", 2, "(1 2)"),
    ("2A3", "A", 3, "(1 3)"),
    ("2A4", "A", 4, "(1 4)(2 3)"),
    ("2D4", "D", 4, "(3 4)"),
    ("3D4", "D", 4, "(1 3 4)"),
    ("2E6", "E", 6, "(1 6)(3 5)"),
]


def default_catalog_text(q: int = DEFAULT_Q) -> str:
    out = ["# Default catalog: split and quasi-split forms, each also under Res of degree 2 and 3.", ""]
    for n in (1, 2, 3):
        for name, series, rank, auto in _BASE:
            label = name if n == 1 else f"{name}_res{n}"
            out += [
                f"[entry {label}]",
                f"series = {series}",
                f"rank = {rank}",
                f"auto = {auto}",
                f"res_degree = {n}",
                f"q = {q}",
                "genus = 0",
                "",
            ]
    return "\n".join(out)


def default_catalog() -> list[CatalogEntry]:
    return parse_descriptor(default_catalog_text(), "<default catalog>")


def entry_text(entry: CatalogEntry) -> str:
    d = entry.datum
    lines = [
        f"[entry {entry.name}]",
        f"series = {d.absolute.series}",
        f"rank = {d.absolute.rank}",
        f"auto = {format_cycles(d.diagram_auto)}",
        f"res_degree = {d.res_degree}",
        f"q = {d.q}",
        f"genus = {d.genus}",
    ]
    if d.zeta_numerator != (1,):
        lines.append("numerator = " + ", ".join(map(str, d.zeta_numerator)))
    lines.append("suites = " + ", ".join(entry.suites))
    return "\n".join(lines)


__all__ = [
    "CatalogEntry",
    "DescriptorError",
    "SUITES",
    "default_catalog",
    "default_catalog_text",
    "entry_text",
    "load_catalog",
    "parse_descriptor",
]
