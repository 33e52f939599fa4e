"""Exact minimum seed sets for small graphs and the 0/1 program behind them.

The integer program has one binary ``x[i][t]`` per node and time step
``t = 1..n``. Its objective counts the nodes active at ``t = 1``; every node
must be active at ``t = n``; and a node may switch on at ``t`` only if it was
already on or enough of its in-neighbors were on at ``t - 1``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, TextIO

from .errors import SizeLimitError
from .graph import DirectedGraph
from .tipping import (
    AbsoluteCapped,
    FractionOfInDegree,
    ThresholdAssignment,
    ThresholdSpec,
    compute_thresholds,
    covers,
)

__all__ = [
    "ActivationRow",
    "IPModel",
    "min_seed_bruteforce",
    "build_seed_ip",
    "export_lp",
    "lp_text",
    "trajectory",
    "check_solution",
    "solve_seed_ip_small",
]

# activation rows are scaled to integers when the coefficient denominator fits
_MAX_CLEARED_DENOMINATOR = 10**6
_LINE_WIDTH = 78


def min_seed_bruteforce(g: DirectedGraph, ka: ThresholdAssignment, node_limit: int = 20) -> frozenset[int]:
    """Smallest covering seed set by enumeration in increasing cardinality.

    Among minimum-size solutions the lexicographically smallest id tuple wins.
    """
    if g.n > node_limit:
        raise SizeLimitError(f"brute force refused: n={g.n} exceeds node_limit={node_limit}")
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            if covers(g, ka, combo):
                return frozenset(combo)
    raise AssertionError("the full node set always covers")  # pragma: no cover


@dataclass(frozen=True)
class ActivationRow:
    """``x[node][t] <= x[node][t-1] + coef * sum(x[j][t-1] for j in inputs)``.

    ``coef is None`` marks a node without in-neighbors; its row degenerates to
    the bound ``x[node][t] <= 1``.
    """

    node: int
    t: int
    coef: Fraction | None
    inputs: tuple[int, ...]


@dataclass
class IPModel:
    n: int
    activation: list[ActivationRow]

    @property
    def num_variables(self) -> int:
        return self.n * self.n

    @property
    def num_binary_constraints(self) -> int:
        return self.n * self.n

    @property
    def num_end_constraints(self) -> int:
        return self.n

    @property
    def num_constraints(self) -> int:
        return self.num_binary_constraints + self.num_end_constraints + len(self.activation)

    def variables(self) -> list[str]:
        return [_var(i, t) for i in range(self.n) for t in range(1, self.n + 1)]


def _var(i: int, t: int) -> str:
    return f"x_{i + 1}_{t}"


def _node_coefficients(g: DirectedGraph, spec: ThresholdSpec) -> list[Fraction | None]:
    """``1 / (d_in * theta)`` per node, None where the in-degree is zero."""
    coefs: list[Fraction | None] = []
    if isinstance(spec, FractionOfInDegree):
        theta = spec.fraction
        for a in g.in_adj:
            coefs.append(1 / (len(a) * theta) if a else None)
    elif isinstance(spec, AbsoluteCapped):
        # theta_i = k_i / d_in, so the coefficient collapses to 1 / k_i
        ka = compute_thresholds(g, spec)
        for a, k in zip(g.in_adj, ka.k):
            coefs.append(Fraction(1, k) if a else None)
    else:
        raise TypeError(f"unsupported threshold spec {spec!r}")
    return coefs


def build_seed_ip(g: DirectedGraph, spec: ThresholdSpec) -> IPModel:
    coefs = _node_coefficients(g, spec)
    rows = [
        ActivationRow(i, t, coefs[i], g.in_adj[i])
        for i in range(g.n)
        for t in range(2, g.n + 1)
    ]
    return IPModel(g.n, rows)


def _format_coef(c: int | Fraction | float) -> str:
    if isinstance(c, float):
        return f"{c:.12g}"
    return str(int(c))


def _terms(pairs: Sequence[tuple[int | Fraction | float, str]]) -> str:
    """Render ``[(coef, var), ...]`` as a signed LP expression."""
    parts: list[str] = []
    for idx, (c, v) in enumerate(pairs):
        neg = c < 0
        mag = -c if neg else c
        body = v if mag == 1 else f"{_format_coef(mag)} {v}"
        if idx == 0:
            parts.append(f"- {body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def _wrap(line: str) -> list[str]:
    """Split a long row before operators so no line exceeds the width."""
    if len(line) <= _LINE_WIDTH:
        return [line]
    indent = line[: len(line) - len(line.lstrip(" "))]
    units: list[str] = []
    for tok in line.split():
        if not units or tok in ("+", "-", "<=", "=", ">="):
            units.append(tok)
        else:
            units[-1] += " " + tok
    out: list[str] = []
    cur = indent + units[0]
    for unit in units[1:]:
        if len(cur) + 1 + len(unit) > _LINE_WIDTH:
            out.append(cur)
            cur = "   " + unit
        else:
            cur += " " + unit
    out.append(cur)
    return out


def _activation_expr(row: ActivationRow) -> str:
    i, t = row.node, row.t
    if row.coef is None:
        return f"{_var(i, t)} <= 1"
    p, q = row.coef.numerator, row.coef.denominator
    if q <= _MAX_CLEARED_DENOMINATOR:
        lead: int | float = q
        tail: int | float = p
    else:
        lead, tail = 1, float(row.coef)
    pairs: list[tuple[int | float, str]] = [(lead, _var(i, t)), (-lead, _var(i, t - 1))]
    pairs.extend((-tail, _var(j, t - 1)) for j in row.inputs)
    return f"{_terms(pairs)} <= 0"


def export_lp(model: IPModel, sink: TextIO) -> None:
    """Write the model in CPLEX LP format (variables ``x_<node>_<t>``, 1-based)."""
    n = model.n
    lines = [f"\\ minimum seed set program, n = {n}", "Minimize"]
    objective = _terms([(1, _var(i, 1)) for i in range(n)])
    lines.extend(_wrap(f" obj: {objective}".rstrip()))
    lines.append("Subject To")
    for i in range(n):
        lines.append(f" end_{i + 1}: {_var(i, n)} = 1")
    for row in model.activation:
        lines.extend(_wrap(f" act_{row.node + 1}_{row.t}: {_activation_expr(row)}"))
    lines.append("Binary")
    lines.extend(f" {v}" for v in model.variables())
    lines.append("End")
    sink.write("\n".join(lines) + "\n")


def lp_text(model: IPModel) -> str:
    buf = io.StringIO()
    export_lp(model, buf)
    return buf.getvalue()


def trajectory(model: IPModel, seed: Sequence[int] | frozenset[int]) -> list[list[int]]:
    """Maximal 0/1 trajectory ``x[i][t-1]`` that starts from ``seed``.

    Each variable is set to 1 whenever its activation row allows it, which
    is the largest assignment consistent with the rows for this seed.
    """
    n = model.n
    x = [[0] * n for _ in range(n)]
    for i in seed:
        x[i][0] = 1
    rows_at: dict[int, list[ActivationRow]] = {}
    for row in model.activation:
        rows_at.setdefault(row.t, []).append(row)
    for t in range(2, n + 1):
        for row in rows_at.get(t, ()):
            i = row.node
            if row.coef is None:
                x[i][t - 1] = 1
                continue
            p, q = row.coef.numerator, row.coef.denominator
            # 1 <= prev + (p/q) * s  <=>  q * prev + p * s >= q
            s = sum(x[j][t - 2] for j in row.inputs)
            x[i][t - 1] = 1 if q * x[i][t - 2] + p * s >= q else 0
    return x


def check_solution(model: IPModel, x: list[list[int]]) -> bool:
    """Literal feasibility test of a full assignment against every row."""
    n = model.n
    if any(v not in (0, 1) for row in x for v in row):
        return False
    if any(x[i][n - 1] != 1 for i in range(n)):
        return False
    for row in model.activation:
        i, t = row.node, row.t
        if row.coef is None:
            continue
        rhs = x[i][t - 2] + row.coef * sum(x[j][t - 2] for j in row.inputs)
        if x[i][t - 1] > rhs:
            return False
    return True


def solve_seed_ip_small(g: DirectedGraph, spec: ThresholdSpec, node_limit: int = 12) -> frozenset[int]:
    """Optimize the program by enumerating the ``t = 1`` layer.

    For each candidate seed (in increasing size, lexicographic within a size)
    the remaining layers are filled with the maximal trajectory; the seed is
    feasible iff that trajectory reaches all ones at ``t = n``.
    """
    if g.n > node_limit:
        raise SizeLimitError(f"IP enumeration refused: n={g.n} exceeds node_limit={node_limit}")
    model = build_seed_ip(g, spec)
    n = model.n
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            x = trajectory(model, combo)
            if all(x[i][n - 1] for i in range(n)):
                return frozenset(combo)
    return frozenset()  # n == 0
