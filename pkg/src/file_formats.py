import hashlib
import logging
from pathlib import Path
from typing import List, Tuple, Union

from .errors import ParseError, StructureError
from .graph_core import Biclique, BicliqueSystem, Graph, normalize_edge, vertex_mask

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _content_lines(text: str):
    """Yield (line_no, tokens) for every non-blank, non-comment line."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield line_no, line.split()


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line_no)


def _parse_header(lines, kind: str) -> Tuple[int, object]:
    try:
        line_no, tokens = next(lines)
    except StopIteration:
        raise ParseError(f"empty {kind} file; expected a line `n <count>`")
    if tokens[0] != "n" or len(tokens) != 2:
        raise ParseError("first line must be `n <count>`", line_no)
    n = _parse_int(tokens[1], line_no, "vertex count")
    if n < 0:
        raise ParseError(f"vertex count must be nonnegative, got {n}", line_no)
    return n, lines


def _parse_vertex(token: str, n: int, line_no: int) -> int:
    v = _parse_int(token, line_no, "vertex id")
    if not 1 <= v <= n:
        raise ParseError(f"vertex {v} outside 1..{n}", line_no)
    return v


def parse_graph(text: str) -> Graph:
    n, lines = _parse_header(_content_lines(text), "graph")
    edges = set()
    for line_no, tokens in lines:
        if tokens[0] != "e" or len(tokens) != 3:
            raise ParseError("expected `e <u> <v>`", line_no)
        u = _parse_vertex(tokens[1], n, line_no)
        v = _parse_vertex(tokens[2], n, line_no)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line_no)
        edge = normalize_edge(u, v)
        if edge in edges:
            raise ParseError(f"duplicate edge {{{u},{v}}}", line_no)
        edges.add(edge)
    return Graph(n, frozenset(edges))


def parse_system(text: str) -> BicliqueSystem:
    n, lines = _parse_header(_content_lines(text), "biclique system")
    bicliques: List[Biclique] = []
    for line_no, tokens in lines:
        if tokens[0] != "b":
            raise ParseError("expected `b <u1> ... | <v1> ...`", line_no)
        body = tokens[1:]
        if body.count("|") != 1:
            raise ParseError("a biclique line needs exactly one `|` separator", line_no)
        split_at = body.index("|")
        left = [_parse_vertex(t, n, line_no) for t in body[:split_at]]
        right = [_parse_vertex(t, n, line_no) for t in body[split_at + 1:]]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ParseError("repeated vertex within a side", line_no)
        try:
            bicliques.append(Biclique(vertex_mask(left), vertex_mask(right)))
        except StructureError as exc:
            raise ParseError(f"biclique {len(bicliques) + 1}: {exc}", line_no) from exc
    return BicliqueSystem(n, tuple(bicliques))


def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def serialize_system(system: BicliqueSystem) -> str:
    lines = [f"n {system.universe_n}"]
    for b in system.bicliques:
        left = " ".join(str(v) for v in b.left_vertices())
        right = " ".join(str(v) for v in b.right_vertices())
        lines.append(f"b {left} | {right}")
    return "\n".join(lines) + "\n"


def _with_path(exc: ParseError, path: PathLike) -> ParseError:
    err = ParseError(f"{path}: {exc}")
    err.line_no = exc.line_no
    return err


def _read_text(path: PathLike) -> str:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found at {path}")
    with open(path, "rb") as f:
        raw = f.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_no = raw[: exc.start].count(b"\n") + 1
        raise ParseError(f"invalid UTF-8 byte 0x{raw[exc.start]:02x}", line_no) from exc


def read_graph(path: PathLike) -> Graph:
    logger.debug("Reading graph from %s", path)
    try:
        return parse_graph(_read_text(path))
    except ParseError as exc:
        raise _with_path(exc, path) from exc


def read_system(path: PathLike) -> BicliqueSystem:
    logger.debug("Reading biclique system from %s", path)
    try:
        return parse_system(_read_text(path))
    except ParseError as exc:
        raise _with_path(exc, path) from exc


def write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def file_digest(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
