"""SOP instances: matrix-format parsing, validation, precedence closure.

Two file formats are supported, both storing an explicit full cost matrix
in which the entry -1 at row i, column j means "j must precede i":

* ``tsplib-sop`` -- TSPLIB header (NAME/TYPE/DIMENSION/...) followed by
  EDGE_WEIGHT_SECTION with the full matrix; the first token of the section
  may repeat the dimension.
* ``soplib`` -- a line holding the dimension followed by the
  whitespace-separated full matrix.

Node 0 is the start node and node n-1 the final node, 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

SENTINEL = -1

FORMATS = ("tsplib-sop", "soplib")


class InstanceFormatError(ValueError):
    """Malformed instance file; carries the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PrecedenceCycleError(ValueError):
    """The precedence relation contains a cycle; no feasible route exists."""


@dataclass
class Instance:
    """A SOP instance: cost matrix, precedence relation, start/final nodes.

    Treated as immutable once validated; the derived closure structures are
    cached, so instances are safe to share across concurrent runs.
    """

    name: str
    n: int
    cost: list[list[int]]
    precedes: set[tuple[int, int]]  # (u, v): u must precede v
    start: int
    final: int

    # -- derived structures (cached, not part of equality) ------------------

    @cached_property
    def direct_successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.precedes:
            succ[u].append(v)
        for lst in succ:
            lst.sort()
        return succ

    @cached_property
    def direct_predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.precedes:
            pred[v].append(u)
        for lst in pred:
            lst.sort()
        return pred

    @cached_property
    def pred_count_template(self) -> list[int]:
        return [len(p) for p in self.direct_predecessors]

    @cached_property
    def direct_pred_masks(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.precedes:
            masks[v] |= 1 << u
        return masks

    @cached_property
    def _topo_order(self) -> list[int] | None:
        """Kahn topological order of the precedence graph, None if cyclic."""
        count = list(self.pred_count_template)
        queue = [v for v in range(self.n) if count[v] == 0]
        out = []
        succ = self.direct_successors
        while queue:
            u = queue.pop()
            out.append(u)
            for w in succ[u]:
                count[w] -= 1
                if count[w] == 0:
                    queue.append(w)
        return out if len(out) == self.n else None

    @property
    def is_acyclic(self) -> bool:
        return self._topo_order is not None

    @cached_property
    def succ_closure_masks(self) -> list[int]:
        """Bitset per node of all transitive successors (bit v set in mask[u]
        iff u must precede v). Queried in the local-search inner loop."""
        order = self._topo_order
        if order is None:
            raise PrecedenceCycleError(f"{self.name}: precedence relation is cyclic")
        masks = [0] * self.n
        succ = self.direct_successors
        for u in reversed(order):
            m = 0
            for w in succ[u]:
                m |= masks[w] | (1 << w)
            masks[u] = m
        return masks

    @cached_property
    def succ_closure_lists(self) -> list[list[int]]:
        return [_bits_to_list(m) for m in self.succ_closure_masks]

    @cached_property
    def pred_closure_lists(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in range(self.n)]
        for u, m in enumerate(self.succ_closure_masks):
            for v in _bits_to_list(m):
                pred[v].append(u)
        return pred

    def transitive_successors(self, u: int) -> set[int]:
        """All nodes that u must precede (transitive closure of the relation)."""
        if not 0 <= u < self.n:
            raise IndexError(f"node {u} out of range 0..{self.n - 1}")
        return set(self.succ_closure_lists[u])

    # -- serialization -------------------------------------------------------

    def to_tsplib_sop(self) -> str:
        lines = [
            f"NAME: {self.name}",
            "TYPE: SOP",
            f"DIMENSION: {self.n}",
            "EDGE_WEIGHT_TYPE: EXPLICIT",
            "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
            "EDGE_WEIGHT_SECTION",
            str(self.n),
        ]
        lines.extend(" ".join(str(x) for x in row) for row in self.cost)
        lines.append("EOF")
        return "\n".join(lines) + "\n"

    def to_soplib(self) -> str:
        lines = [str(self.n)]
        lines.extend("\t".join(str(x) for x in row) for row in self.cost)
        return "\n".join(lines) + "\n"


def _bits_to_list(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


# -- parsing -----------------------------------------------------------------


def _int_tokens(text: str, first_line: int = 1) -> list[tuple[int, int]]:
    """All whitespace-separated integer tokens of ``text`` as (value, line)."""
    out = []
    for offset, line in enumerate(text.splitlines()):
        lineno = first_line + offset
        for tok in line.split():
            if tok == "EOF":
                return out
            try:
                out.append((int(tok), lineno))
            except ValueError:
                raise InstanceFormatError(f"non-integer matrix entry {tok!r}", lineno) from None
    return out


def _matrix_from_tokens(tokens: list[tuple[int, int]], n: int, name: str) -> list[list[int]]:
    if len(tokens) == n * n + 1 and tokens[0][0] == n:
        tokens = tokens[1:]  # section may repeat the dimension
    if len(tokens) != n * n:
        raise InstanceFormatError(
            f"{name}: expected {n * n} matrix entries ({n}x{n}), found {len(tokens)}"
        )
    for value, lineno in tokens:
        if value < SENTINEL:
            raise InstanceFormatError(
                f"negative matrix entry {value}; only -1 marks a forbidden arc", lineno
            )
    flat = [v for v, _ in tokens]
    return [flat[i * n : (i + 1) * n] for i in range(n)]


def _instance_from_matrix(name: str, matrix: list[list[int]]) -> Instance:
    n = len(matrix)
    precedes = set()
    for i, row in enumerate(matrix):
        for j, value in enumerate(row):
            if value == SENTINEL and i != j:
                precedes.add((j, i))  # -1 at (i, j): j must precede i
    return Instance(name=name, n=n, cost=matrix, precedes=precedes, start=0, final=n - 1)


def parse_matrix_instance(text: str, format: str, name: str | None = None) -> Instance:
    """Parse an instance file's content in the given format ("tsplib-sop" or
    "soplib"). ``name`` overrides the file's own name (soplib files have none)."""
    if format == "tsplib-sop":
        return _parse_tsplib(text, name)
    if format == "soplib":
        return _parse_soplib(text, name or "unnamed")
    raise ValueError(f"unknown instance format {format!r}; expected one of {FORMATS}")


def _parse_tsplib(text: str, name: str | None) -> Instance:
    lines = text.splitlines()
    header: dict[str, str] = {}
    section_line = None
    for idx, raw in enumerate(lines):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped == "EDGE_WEIGHT_SECTION":
            section_line = idx
            break
        if ":" in stripped:
            key, _, value = stripped.partition(":")
            header[key.strip().upper()] = value.strip()
        else:
            raise InstanceFormatError(f"unexpected header line {stripped!r}", idx + 1)
    if section_line is None:
        raise InstanceFormatError("missing EDGE_WEIGHT_SECTION")
    if "DIMENSION" not in header:
        raise InstanceFormatError("missing DIMENSION header")
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise InstanceFormatError(f"non-integer DIMENSION {header['DIMENSION']!r}") from None
    if n < 2:
        raise InstanceFormatError(f"DIMENSION must be at least 2, got {n}")
    ewt = header.get("EDGE_WEIGHT_TYPE", "EXPLICIT")
    if ewt != "EXPLICIT":
        raise InstanceFormatError(f"unsupported EDGE_WEIGHT_TYPE {ewt!r}; only EXPLICIT")
    ewf = header.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX")
    if ewf != "FULL_MATRIX":
        raise InstanceFormatError(f"unsupported EDGE_WEIGHT_FORMAT {ewf!r}; only FULL_MATRIX")
    inst_name = name or header.get("NAME", "unnamed")
    tokens = _int_tokens("\n".join(lines[section_line + 1 :]), first_line=section_line + 2)
    matrix = _matrix_from_tokens(tokens, n, inst_name)
    return _instance_from_matrix(inst_name, matrix)


def _parse_soplib(text: str, name: str) -> Instance:
    tokens = _int_tokens(text)
    if not tokens:
        raise InstanceFormatError("empty file")
    n = tokens[0][0]
    if n < 2:
        raise InstanceFormatError(f"dimension must be at least 2, got {n}", tokens[0][1])
    matrix = _matrix_from_tokens(tokens[1:], n, name)
    return _instance_from_matrix(name, matrix)


def detect_format(text: str) -> str:
    """Sniff the format: a bare leading integer means soplib, headers tsplib."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        return "soplib" if stripped.split()[0].lstrip("-").isdigit() else "tsplib-sop"
    raise InstanceFormatError("empty file")


def load_instance(path, format: str | None = None) -> Instance:
    """Read and parse an instance file; sniffs the format when not given.
    The instance name defaults to the file stem."""
    from pathlib import Path

    p = Path(path)
    text = p.read_text()
    fmt = format or detect_format(text)
    return parse_matrix_instance(text, fmt, name=p.stem)


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    """Validation findings; hard violations and convention warnings."""

    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.warnings


def validate(instance: Instance) -> ValidationReport:
    """Check acyclicity, start/final conventions, diagonal zeros, and
    sentinel/relation consistency. Violations are report entries, not errors."""
    report = ValidationReport()
    n = instance.n
    for v in range(n):
        if instance.cost[v][v] != 0:
            report.violations.append(f"diagonal entry ({v},{v}) is {instance.cost[v][v]}, expected 0")
    for u, v in sorted(instance.precedes):
        if instance.cost[v][u] != SENTINEL:
            report.violations.append(
                f"pair ({u},{v}) in precedence relation but cost({v},{u}) is not the sentinel"
            )
    if not instance.is_acyclic:
        count = list(instance.pred_count_template)
        stuck = sorted(set(range(n)) - set(_kahn_prefix(instance, count)))
        report.violations.append(f"precedence relation is cyclic (nodes involved: {stuck})")
        return report
    masks = instance.succ_closure_masks
    all_but_start = ((1 << n) - 1) & ~(1 << instance.start)
    if masks[instance.start] != all_but_start:
        missing = _bits_to_list(all_but_start & ~masks[instance.start])
        report.warnings.append(f"start node does not precede nodes {missing}")
    final_bit = 1 << instance.final
    lax = [u for u in range(n) if u != instance.final and not masks[u] & final_bit]
    if lax:
        report.warnings.append(f"nodes {lax} are not required to precede the final node")
    return report


def _kahn_prefix(instance: Instance, count: list[int]) -> list[int]:
    queue = [v for v in range(instance.n) if count[v] == 0]
    out = []
    while queue:
        u = queue.pop()
        out.append(u)
        for w in instance.direct_successors[u]:
            count[w] -= 1
            if count[w] == 0:
                queue.append(w)
    return out
