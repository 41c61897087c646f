"""Point sets with exact coordinates and their text format.

The format is a header line ``n d`` followed by ``n`` lines of ``d``
whitespace separated coefficients.  Integers are written in decimal and
rationals as ``num/den``.  A set is rational as soon as one coefficient
carries a denominator; all its coordinates are then stored as rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import DimensionMismatch
from .numkernel import format_scalar, is_field, parse_scalar, to_int, to_rat


@dataclass(frozen=True)
class PointSet:
    """Immutable list of points of a common dimension and scalar kind."""

    coords: tuple
    dim: int
    rational: bool

    @classmethod
    def from_coords(cls, points: Iterable[Sequence], dim: int | None = None) -> "PointSet":
        pts = [tuple(p) for p in points]
        if dim is None:
            if not pts:
                raise DimensionMismatch("cannot infer the dimension of an empty pointset")
            dim = len(pts[0])
        for p in pts:
            if len(p) != dim:
                raise DimensionMismatch(f"point of dimension {len(p)} in a {dim}-dimensional set")
        rational = any(is_field(x) for p in pts for x in p)
        conv = to_rat if rational else to_int
        return cls(tuple(tuple(conv(x) for x in p) for p in pts), dim, rational)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> tuple:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def lifted(self) -> list:
        """Homogeneous coordinates ``(p, 1)`` of every point."""
        one = to_rat(1) if self.rational else to_int(1)
        return [p + (one,) for p in self.coords]

    def to_text(self) -> str:
        lines = [f"{len(self.coords)} {self.dim}"]
        lines += [" ".join(map(format_scalar, p)) for p in self.coords]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointSet":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("empty pointset file")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"bad header line {lines[0]!r}")
        n, d = int(header[0]), int(header[1])
        body = lines[1:]
        if len(body) != n:
            raise ValueError(f"header announces {n} points, found {len(body)}")
        pts = []
        for ln in body:
            fields = ln.split()
            if len(fields) != d:
                raise DimensionMismatch(f"line {ln!r} has {len(fields)} coefficients, expected {d}")
            pts.append([parse_scalar(f) for f in fields])
        return cls.from_coords(pts, d)


def read_pointset(f: TextIO | str) -> PointSet:
    if isinstance(f, str):
        with open(f) as fh:
            return PointSet.from_text(fh.read())
    return PointSet.from_text(f.read())


def write_pointset(ps: PointSet, f: TextIO | str) -> None:
    if isinstance(f, str):
        with open(f, "w") as fh:
            fh.write(ps.to_text())
    else:
        f.write(ps.to_text())
