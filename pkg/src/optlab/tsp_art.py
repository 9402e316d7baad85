"""Grayscale image -> stippled points -> TSP tour -> SVG line drawing.

The sampling RNG is a plain 64-bit linear congruential generator,

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2**64

seeded with the user seed, and candidate coordinates / acceptance draws are
taken from the top 32 bits of each step. The constants are part of the file
format contract: the same (image, count, seed) triple yields the same
points in any implementation of this recipe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .branch_and_bound import SolStatus, SolveConfig, solve
from .puzzles.tsp import WeightedGraph, build_tsp, decode_tour


class AllWhiteImage(Exception):
    """Sampling cannot accept any point (image too bright)."""


class TooLarge(Exception):
    """Point set exceeds the exact-solve cap."""


class PgmFormatError(Exception):
    """Malformed PGM input."""


_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK = (1 << 64) - 1

#: Candidate attempts per requested point before giving up.
ATTEMPT_BUDGET_PER_POINT = 10_000

#: Largest point count exact_tour accepts by default.
DEFAULT_EXACT_CAP = 12


class _Lcg64:
    def __init__(self, seed: int):
        self.state = seed & _MASK
        self._step()  # decorrelate small seeds

    def _step(self) -> int:
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _MASK
        return self.state

    def next_below(self, n: int) -> int:
        return (self._step() >> 32) % n

    def next_unit(self) -> float:
        return (self._step() >> 32) / 2.0 ** 32


@dataclass
class GrayImage:
    """Grayscale raster; pixel(x, y) is 0 (black) .. 255 (white)."""

    width: int
    height: int
    pixels: List[int]  # row-major, len == width * height

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise PgmFormatError("image must be nonempty")
        if len(self.pixels) != self.width * self.height:
            raise PgmFormatError("pixel count does not match dimensions")

    def pixel(self, x: int, y: int) -> int:
        return self.pixels[y * self.width + x]


@dataclass
class PointSet:
    points: List[Tuple[float, float]]
    seed: int


@dataclass
class Tour:
    order: List[int]
    length: float


@dataclass
class SvgStyle:
    stroke_width: float = 1.0
    stroke: str = "black"
    background: Optional[str] = None


def parse_pgm(data: bytes) -> GrayImage:
    """Plain (P2) or raw (P5) PGM, maxval up to 255."""
    if not data.startswith(b"P2") and not data.startswith(b"P5"):
        raise PgmFormatError("not a PGM file (missing P2/P5 magic)")
    raw = data.startswith(b"P5")

    # Header tokens: magic, width, height, maxval; '#' comments allowed.
    tokens: List[bytes] = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise PgmFormatError("truncated header")
        ch = data[pos:pos + 1]
        if ch == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                raise PgmFormatError("truncated header comment")
            continue
        if ch.isspace():
            pos += 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise PgmFormatError(f"bad header token: {exc}") from None
    if not 0 < maxval <= 255:
        raise PgmFormatError(f"unsupported maxval {maxval}")

    if raw:
        body = data[pos + 1:]  # single whitespace byte after maxval
        if len(body) < width * height:
            raise PgmFormatError("truncated raster")
        values = list(body[:width * height])
    else:
        try:
            values = [int(t) for t in data[pos:].split()]
        except ValueError as exc:
            raise PgmFormatError(f"bad raster token: {exc}") from None
        if len(values) != width * height:
            raise PgmFormatError("raster size does not match dimensions")
    if any(not 0 <= v <= maxval for v in values):
        raise PgmFormatError("raster value out of range")
    if maxval != 255:
        values = [v * 255 // maxval for v in values]
    return GrayImage(width, height, values)


def sample_points(image: GrayImage, count: int, seed: int) -> PointSet:
    """Rejection-sample `count` distinct pixels, darker pixels more likely.

    A candidate pixel is accepted with probability 1 - gray/255; duplicates
    are rejected and resampled so the resulting distance matrix is metric.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = _Lcg64(seed)
    budget = ATTEMPT_BUDGET_PER_POINT * count
    chosen: List[Tuple[float, float]] = []
    seen = set()
    for _ in range(budget):
        x = rng.next_below(image.width)
        y = rng.next_below(image.height)
        darkness = 1.0 - image.pixel(x, y) / 255.0
        if rng.next_unit() >= darkness:
            continue
        if (x, y) in seen:
            continue
        seen.add((x, y))
        chosen.append((float(x), float(y)))
        if len(chosen) == count:
            return PointSet(chosen, seed)
    raise AllWhiteImage(
        f"accepted only {len(chosen)}/{count} points in {budget} attempts")


def _length(points: Sequence[Tuple[float, float]], order: Sequence[int]) -> float:
    return sum(math.dist(points[order[k]], points[order[(k + 1) % len(order)]])
               for k in range(len(order)))


def heuristic_tour(points: Sequence[Tuple[float, float]],
                   budget: Optional[int] = None) -> Tour:
    """Nearest neighbor from point 0, then first-improvement 2-opt.

    `budget` caps the number of accepted 2-opt moves; None means improve
    until no exchange helps. Each accepted move strictly shortens the tour.
    """
    n = len(points)
    if n < 3:
        raise ValueError("need at least 3 points for a tour")
    unvisited = set(range(1, n))
    order = [0]
    while unvisited:
        last = points[order[-1]]
        nxt = min(unvisited, key=lambda k: (math.dist(last, points[k]), k))
        unvisited.remove(nxt)
        order.append(nxt)

    moves = 0
    improved = True
    while improved and (budget is None or moves < budget):
        improved = False
        for i in range(n - 1):
            a, b = order[i], order[i + 1]
            for j in range(i + 2, n):
                c, d = order[j], order[(j + 1) % n]
                if d == a:
                    continue
                delta = (math.dist(points[a], points[c])
                         + math.dist(points[b], points[d])
                         - math.dist(points[a], points[b])
                         - math.dist(points[c], points[d]))
                if delta < -1e-12:
                    order[i + 1:j + 1] = reversed(order[i + 1:j + 1])
                    moves += 1
                    improved = True
                    if budget is not None and moves >= budget:
                        improved = False
                    break
            else:
                continue
            break
    return Tour(order, _length(points, order))


def exact_tour(points: Sequence[Tuple[float, float]],
               cap: int = DEFAULT_EXACT_CAP) -> Tour:
    """Provably optimal cycle via the ILP tour model; small n only."""
    n = len(points)
    if n > cap:
        raise TooLarge(f"{n} points exceeds the exact cap of {cap}")
    graph = WeightedGraph.from_points(list(points))
    model, cuts = build_tsp(graph)
    result = solve(model, SolveConfig(lazy=cuts))
    if result.status is not SolStatus.OPTIMAL:
        raise RuntimeError(f"tour solve ended with {result.status}")
    order = decode_tour(model, result)
    return Tour(order, _length(points, order))


def _fmt(v: float) -> str:
    text = f"{v:.4f}".rstrip("0").rstrip(".")
    return text if text != "-0" else "0"


def render_svg(points: Sequence[Tuple[float, float]], tour: Tour,
               style: Optional[SvgStyle] = None) -> str:
    """One closed polyline through the tour; viewBox = bounds + 5% margin."""
    style = style or SvgStyle()
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span_x = max(xs) - min(xs)
    span_y = max(ys) - min(ys)
    margin_x = 0.05 * (span_x if span_x > 0 else 1.0)
    margin_y = 0.05 * (span_y if span_y > 0 else 1.0)
    view = (min(xs) - margin_x, min(ys) - margin_y,
            span_x + 2 * margin_x, span_y + 2 * margin_y)

    first = points[tour.order[0]]
    parts = [f"M {_fmt(first[0])} {_fmt(first[1])}"]
    for idx in tour.order[1:]:
        x, y = points[idx]
        parts.append(f"L {_fmt(x)} {_fmt(y)}")
    parts.append("Z")

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(view[0])} {_fmt(view[1])} '
        f'{_fmt(view[2])} {_fmt(view[3])}">',
    ]
    if style.background is not None:
        lines.append(
            f'<rect x="{_fmt(view[0])}" y="{_fmt(view[1])}" '
            f'width="{_fmt(view[2])}" height="{_fmt(view[3])}" '
            f'fill="{style.background}"/>')
    lines.append(
        f'<path d="{" ".join(parts)}" fill="none" stroke="{style.stroke}" '
        f'stroke-width="{_fmt(style.stroke_width)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def parse_points(text: str) -> List[Tuple[float, float]]:
    """Point list, one `x y` pair per line; `#` comments and blanks skipped."""
    points = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        x, y = ln.split()
        points.append((float(x), float(y)))
    return points
