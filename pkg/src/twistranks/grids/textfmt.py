"""Plain-text grid descriptions.

A grid file has one line per axis listing the labels of X_s separated by
whitespace, optionally prefixed by ``name:``.  Blank lines and lines
starting with ``#`` are ignored.  A subset is one point per line, each
point given as its labels (commas or whitespace between them).
"""

from __future__ import annotations

from .grid import Grid
from .ring import RingSpec

__all__ = ["parse_grid", "format_grid", "parse_points", "format_points", "example_grid"]


def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_grid(text: str, ell: int = 2, k0: int = 1, B: int = None) -> Grid:
    names, axes = [], []
    for line in _content_lines(text):
        if ":" in line:
            name, rest = line.split(":", 1)
            names.append(name.strip())
        else:
            names.append(len(names))
            rest = line
        labels = rest.replace(",", " ").split()
        if not labels:
            raise ValueError(f"axis {names[-1]!r} has no labels")
        axes.append(tuple(labels))
    if not axes:
        raise ValueError("grid description is empty")
    B = len(axes) + 1 if B is None else B
    return Grid(tuple(axes), RingSpec(ell, k0, B), tuple(names))


def format_grid(grid: Grid) -> str:
    out = []
    for name, axis in zip(grid.names, grid.axes):
        out.append(f"{name}: {' '.join(map(str, axis))}")
    return "\n".join(out) + "\n"


def parse_points(text: str, grid: Grid) -> tuple:
    pts = []
    for line in _content_lines(text):
        labels = tuple(line.strip("()").replace(",", " ").split())
        pts.append(grid.check_point(labels))
    return grid.check_subset(pts)


def format_points(points) -> str:
    return "".join(",".join(map(str, p)) + "\n" for p in points)


def example_grid(name: str, ell: int = 2) -> Grid:
    """Built-in examples: "2x2" and sizes like "4x4x4"."""
    try:
        sizes = [int(k) for k in name.lower().split("x")]
    except ValueError:
        raise ValueError(f"unknown example grid {name!r}") from None
    if not sizes or min(sizes) < 1:
        raise ValueError(f"unknown example grid {name!r}")
    return Grid.of_sizes(sizes, ell)
