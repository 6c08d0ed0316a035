"""Plain-text input formats with line-numbered diagnostics.

Space file::

    atoms 2
    a 1/2
    b 1/2
    dist a b 1/1

Partition file: ``block <name>: id id ...``.  Window file: one lattice point
per line (integers separated by spaces or commas).  Config file:
``key = value``.  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ._rational import fraction_str
from .partitions import Partition
from .semimetric import Semimetric, SemimetricSpace


class FormatError(ValueError):
    def __init__(self, line: int, message: str, source: str = "input"):
        super().__init__(f"{source}:{line}: {message}")
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _rational(token: str, no: int, source: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(no, f"not an exact rational: {token!r}", source) from None


def parse_space(text: str, source: str = "space", check_triangle: bool = False) -> SemimetricSpace:
    lines = list(_lines(text))
    if not lines:
        raise FormatError(1, "empty space file", source)
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "atoms" or not parts[1].isdigit():
        raise FormatError(no, "expected header 'atoms <n>'", source)
    n = int(parts[1])
    if n < 1:
        raise FormatError(no, "need at least one atom", source)
    if len(lines) < 1 + n:
        raise FormatError(lines[-1][0], f"expected {n} atom lines", source)
    ids: List[str] = []
    masses: List[Fraction] = []
    for no, line in lines[1:1 + n]:
        parts = line.split()
        if len(parts) != 2 or parts[0] == "dist":
            raise FormatError(no, "expected '<id> <mass>'", source)
        if parts[0] in ids:
            raise FormatError(no, f"duplicate atom id {parts[0]!r}", source)
        m = _rational(parts[1], no, source)
        if m <= 0:
            raise FormatError(no, "masses must be positive", source)
        ids.append(parts[0])
        masses.append(m)
    if sum(masses) != 1:
        raise FormatError(lines[n][0], f"masses sum to {sum(masses)}, not 1", source)
    index = {a: i for i, a in enumerate(ids)}
    dist: Dict[Tuple[int, int], Fraction] = {}
    for no, line in lines[1 + n:]:
        parts = line.split()
        if len(parts) != 4 or parts[0] != "dist":
            raise FormatError(no, "expected 'dist <i> <j> <value>'", source)
        if parts[1] not in index or parts[2] not in index:
            raise FormatError(no, "unknown atom id", source)
        i, j = index[parts[1]], index[parts[2]]
        d = _rational(parts[3], no, source)
        if d < 0:
            raise FormatError(no, "distances must be nonnegative", source)
        if i == j and d != 0:
            raise FormatError(no, "self-distance must be 0", source)
        key = (min(i, j), max(i, j))
        if key in dist and dist[key] != d:
            raise FormatError(no, "conflicting distance for this pair", source)
        dist[key] = d
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in dist:
                raise FormatError(lines[-1][0], f"missing distance {ids[i]} {ids[j]}", source)
            matrix[i][j] = matrix[j][i] = dist[(i, j)]
    return SemimetricSpace(ids, masses, Semimetric.from_fractions(matrix), check_triangle=check_triangle)


def format_space(space: SemimetricSpace) -> str:
    out = [f"atoms {space.n}"]
    for a, m in zip(space.atoms, space.mass):
        out.append(f"{a} {fraction_str(m)}")
    for i in range(space.n):
        for j in range(i + 1, space.n):
            out.append(f"dist {space.atoms[i]} {space.atoms[j]} {fraction_str(space.rho[i, j])}")
    return "\n".join(out) + "\n"


def parse_partition(text: str, host: SemimetricSpace, source: str = "partition") -> Partition:
    blocks, names = [], []
    ids = {str(a): i for i, a in enumerate(host.atoms)}
    for no, line in _lines(text):
        if not line.startswith("block ") or ":" not in line:
            raise FormatError(no, "expected 'block <name>: id id ...'", source)
        name, members = line[len("block "):].split(":", 1)
        idx = []
        for tok in members.split():
            if tok not in ids:
                raise FormatError(no, f"unknown atom id {tok!r}", source)
            idx.append(ids[tok])
        blocks.append(idx)
        names.append(name.strip())
    try:
        return Partition(host, blocks, names)
    except ValueError as e:
        raise FormatError(0, str(e), source) from None


def parse_points(text: str, source: str = "window") -> List[Tuple[int, ...]]:
    pts = []
    dim: Optional[int] = None
    for no, line in _lines(text):
        toks = line.replace(",", " ").split()
        try:
            p = tuple(int(t) for t in toks)
        except ValueError:
            raise FormatError(no, "expected integers", source) from None
        if dim is None:
            dim = len(p)
        elif len(p) != dim:
            raise FormatError(no, f"expected {dim} coordinates", source)
        pts.append(p)
    if not pts:
        raise FormatError(1, "empty window", source)
    return pts


def parse_int_list(value: str) -> List[int]:
    """``"0,1,5"``, inclusive ranges ``"0..7"``, or a mix."""
    out: List[int] = []
    for tok in value.replace(" ", "").split(","):
        if not tok:
            continue
        if ".." in tok:
            a, b = tok.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(tok))
    if not out:
        raise ValueError("empty integer list")
    return out


def parse_rational_list(value: str) -> List[Fraction]:
    out = []
    for tok in value.replace(" ", "").split(","):
        if tok:
            try:
                out.append(Fraction(tok))
            except ZeroDivisionError:
                raise ValueError(f"zero denominator in {tok!r}") from None
    if not out:
        raise ValueError("empty rational list")
    return out


def parse_config(text: str, source: str = "config") -> Dict[str, str]:
    out: Dict[str, str] = {}
    for no, line in _lines(text):
        if "=" not in line:
            raise FormatError(no, "expected 'key = value'", source)
        k, v = line.split("=", 1)
        k = k.strip().replace("-", "_")
        if not k:
            raise FormatError(no, "empty key", source)
        out[k] = v.strip()
    return out
