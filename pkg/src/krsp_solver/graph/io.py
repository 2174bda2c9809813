"""Instance file parsing and rendering.

Format, one record per line::

    n m k D [s t]
    tail head cost delay      (m lines)

s defaults to 0 and t to n-1. Blank lines and lines starting with ``#`` are
ignored; line numbers in errors refer to physical lines.
"""

import logging

from pydantic import ValidationError

from krsp_solver.exceptions import InstanceParseError
from krsp_solver.graph.core import Edge, Instance

logger = logging.getLogger(__name__)


def _ints(fields: list[str], line_number: int) -> list[int]:
    try:
        return [int(f, 10) for f in fields]
    except ValueError as e:
        raise InstanceParseError(f"malformed line: {' '.join(fields)!r}", line_number) from e


def parse_instance(text: str) -> Instance:
    """Parse and validate instance-file content.

    Args:
        text: Full file content

    Returns:
        A validated Instance

    Raises:
        InstanceParseError: For malformed lines or invariant violations,
            naming the offending line
    """
    records = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not records:
        raise InstanceParseError("missing header line", 1)

    header_line, header = records[0]
    if len(header) not in (4, 6):
        raise InstanceParseError("header must be 'n m k D' or 'n m k D s t'", header_line)
    values = _ints(header, header_line)
    n, m, k, D = values[:4]
    s, t = (values[4], values[5]) if len(values) == 6 else (0, n - 1)

    if n < 2:
        raise InstanceParseError(f"need at least 2 vertices, got {n}", header_line)
    if m < 0:
        raise InstanceParseError("negative edge count", header_line)
    if k < 1:
        raise InstanceParseError(f"k must be positive, got {k}", header_line)
    if D < 0:
        raise InstanceParseError("negative delay bound", header_line)
    if s == t:
        raise InstanceParseError("s = t", header_line)
    if not (0 <= s < n and 0 <= t < n):
        raise InstanceParseError("terminal out of range", header_line)

    edge_records = records[1:]
    if len(edge_records) != m:
        where = edge_records[m][0] if len(edge_records) > m else header_line
        raise InstanceParseError(f"expected {m} edge lines, found {len(edge_records)}", where)

    edges: list[Edge] = []
    for edge_id, (number, fields) in enumerate(edge_records):
        if len(fields) != 4:
            raise InstanceParseError("edge line must be 'tail head cost delay'", number)
        tail, head, cost, delay = _ints(fields, number)
        if cost < 0:
            raise InstanceParseError("negative cost", number)
        if delay < 0:
            raise InstanceParseError("negative delay", number)
        if not (0 <= tail < n and 0 <= head < n):
            raise InstanceParseError(f"dangling vertex id in edge {tail}->{head}", number)
        if tail == head:
            raise InstanceParseError(f"self-loop at vertex {tail}", number)
        edges.append(Edge(id=edge_id, tail=tail, head=head, cost=cost, delay=delay))

    try:
        inst = Instance(n=n, edges=tuple(edges), s=s, t=t, k=k, D=D)
    except ValidationError as e:
        raise InstanceParseError(str(e), header_line) from e

    logger.debug(f"Parsed instance n={n} m={m} k={k} D={D} s={s} t={t}")
    return inst


def render_instance(inst: Instance) -> str:
    """Render an instance in the file format; ``parse_instance`` inverts it."""
    header = [inst.n, inst.m, inst.k, inst.D]
    if (inst.s, inst.t) != (0, inst.n - 1):
        header += [inst.s, inst.t]
    lines = [" ".join(str(v) for v in header)]
    lines += [f"{e.tail} {e.head} {e.cost} {e.delay}" for e in inst.edges]
    return "\n".join(lines) + "\n"
