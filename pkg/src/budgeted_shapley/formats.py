"""Line-oriented instance and result files (format version 1).

Both formats are one directive per line, ``#`` starts a comment, blank lines
are ignored. The full grammar is documented in ``docs/file-formats.md``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any

from .catalog import Issue, McNetInstance, MultiIssueInstance, Rule, TopKInstance, WmgInstance
from .core import PreconditionError
from .generators import KINDS
from .knapsack import GameInstance

FORMAT_VERSION = 1
DEFAULT_PRECISION = 12


class FormatError(PreconditionError):
    """Malformed instance or result file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class InstanceFile:
    kind: str
    payload: Any
    labels: dict[int, str] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    @property
    def n_agents(self) -> int:
        return self.payload.n_agents


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", line) from None


def _rational(tok: str, line: int, what: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"{what} must be a rational like 3/2, got {tok!r}", line) from None


def _agent_list(tok: str, line: int) -> list[int]:
    if tok == "-":
        return []
    return [_int(t, line, "agent index") for t in tok.split(",") if t]


def _directives(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def parse_instance(text: str) -> InstanceFile:
    version = kind = None
    scalars: dict[str, tuple[int, int]] = {}
    agents: list[tuple[int, list[str]]] = []
    rules: list[tuple[int, list[str]]] = []
    issues: list[tuple[int, list[int], list[tuple[int, list[str]]]]] = []
    labels: dict[int, str] = {}
    label_lines: dict[int, int] = {}

    for lineno, toks in _directives(text):
        key, args = toks[0], toks[1:]
        if key == "version":
            if len(args) != 1:
                raise FormatError("expected 'version <n>'", lineno)
            version = _int(args[0], lineno, "version")
            if version != FORMAT_VERSION:
                raise FormatError(f"unsupported format version {version}", lineno)
            continue
        if version is None:
            raise FormatError("the first directive must be 'version 1'", lineno)
        if key == "kind":
            if len(args) != 1 or args[0] not in KINDS:
                raise FormatError(f"kind must be one of {', '.join(KINDS)}", lineno)
            kind = args[0]
        elif key in ("bin", "quota", "k", "agents"):
            if len(args) != 1:
                raise FormatError(f"expected '{key} <integer>'", lineno)
            scalars[key] = (_int(args[0], lineno, key), lineno)
        elif key == "agent":
            agents.append((lineno, args))
        elif key == "rule":
            rules.append((lineno, args))
        elif key == "issue":
            if len(args) != 1:
                raise FormatError("expected 'issue <agent,agent,...>'", lineno)
            issues.append((lineno, _agent_list(args[0], lineno), []))
        elif key == "value":
            if not issues:
                raise FormatError("'value' before any 'issue'", lineno)
            issues[-1][2].append((lineno, args))
        elif key == "label":
            if len(args) < 2:
                raise FormatError("expected 'label <agent> <text>'", lineno)
            a = _int(args[0], lineno, "agent index")
            labels[a] = " ".join(args[1:])
            label_lines[a] = lineno
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)

    if version is None:
        raise FormatError("empty instance file")
    if kind is None:
        raise FormatError("missing 'kind' directive")

    def need(name: str) -> int:
        if name not in scalars:
            raise FormatError(f"kind {kind} needs a '{name}' directive")
        return scalars[name][0]

    try:
        if kind in ("knapsack", "greedy-knapsack"):
            bin_size = need("bin")
            pairs = []
            for idx, (lineno, args) in enumerate(agents, start=1):
                if len(args) != 2:
                    raise FormatError(f"agent {idx}: expected 'agent <length> <weight>'", lineno)
                l = _int(args[0], lineno, "length")
                w = _int(args[1], lineno, "weight")
                if l <= 0:
                    raise FormatError(f"agent {idx}: length must be positive, got {l}", lineno)
                if l > bin_size:
                    raise FormatError(f"agent {idx}: length {l} exceeds bin size {bin_size}", lineno)
                if w < 0:
                    raise FormatError(f"agent {idx}: weight must be nonnegative, got {w}", lineno)
                pairs.append((l, w))
            payload: Any = GameInstance.from_pairs(pairs, bin_size)
        elif kind in ("wmg", "topk"):
            weights = []
            for idx, (lineno, args) in enumerate(agents, start=1):
                if len(args) != 1:
                    raise FormatError(f"agent {idx}: expected 'agent <weight>'", lineno)
                w = _int(args[0], lineno, "weight")
                if w < 0:
                    raise FormatError(f"agent {idx}: weight must be nonnegative, got {w}", lineno)
                weights.append(w)
            if kind == "wmg":
                payload = WmgInstance(need("quota"), tuple(weights))
            else:
                payload = TopKInstance(need("k"), tuple(weights))
        elif kind == "mcnet":
            n = need("agents")
            parsed = []
            for lineno, args in rules:
                if not args:
                    raise FormatError("expected 'rule <value> <literal>...'", lineno)
                value = _rational(args[0], lineno, "rule value")
                lits = [_int(t, lineno, "literal") for t in args[1:]]
                for lit in lits:
                    if lit == 0 or abs(lit) > n:
                        raise FormatError(f"literal {lit} does not name an agent in 1..{n}", lineno)
                pos = frozenset(l for l in lits if l > 0)
                neg = frozenset(-l for l in lits if l < 0)
                if pos & neg:
                    raise FormatError(f"agents {sorted(pos & neg)} appear both plain and negated", lineno)
                parsed.append(Rule(pos, neg, value))
            payload = McNetInstance(n, tuple(parsed))
        else:  # multi-issue
            n = need("agents")
            parsed_issues = []
            for lineno, members, values in issues:
                for a in members:
                    if not 1 <= a <= n:
                        raise FormatError(f"agent {a} outside 1..{n}", lineno)
                table = {}
                for vline, args in values:
                    if len(args) != 2:
                        raise FormatError("expected 'value <agent,agent,...|-> <integer>'", vline)
                    part = frozenset(_agent_list(args[0], vline))
                    if not part <= set(members):
                        raise FormatError(f"subset {sorted(part)} is not inside the issue", vline)
                    table[part] = _int(args[1], vline, "value")
                parsed_issues.append(Issue(frozenset(members), table))
            payload = MultiIssueInstance(n, tuple(parsed_issues))
    except FormatError:
        raise
    except PreconditionError as exc:
        raise FormatError(str(exc)) from exc

    for a, lineno in label_lines.items():
        if not 1 <= a <= payload.n_agents:
            raise FormatError(f"label for agent {a} outside 1..{payload.n_agents}", lineno)
    return InstanceFile(kind, payload, labels, version)


def load_instance(path: str | Path) -> InstanceFile:
    return parse_instance(Path(path).read_text())


def _fmt_agents(agents) -> str:
    return ",".join(str(a) for a in sorted(agents)) or "-"


def dump_instance(inst: InstanceFile) -> str:
    lines = [f"version {inst.version}", f"kind {inst.kind}"]
    p = inst.payload
    if inst.kind in ("knapsack", "greedy-knapsack"):
        lines.append(f"bin {p.bin_size}")
        lines += [f"agent {l} {w}" for l, w in p.pairs]
    elif inst.kind == "wmg":
        lines.append(f"quota {p.quota}")
        lines += [f"agent {w}" for w in p.weights]
    elif inst.kind == "topk":
        lines.append(f"k {p.k}")
        lines += [f"agent {w}" for w in p.weights]
    elif inst.kind == "mcnet":
        lines.append(f"agents {p.n_agents}")
        for r in p.rules:
            lits = [str(a) for a in sorted(r.positive)] + [f"-{a}" for a in sorted(r.negative)]
            lines.append(" ".join(["rule", str(r.value), *lits]))
    else:
        lines.append(f"agents {p.n_agents}")
        for issue in p.issues:
            lines.append(f"issue {_fmt_agents(issue.agents)}")
            for part in issue.subsets():
                if issue.value(part):
                    lines.append(f"  value {_fmt_agents(part)} {issue.value(part)}")
    lines += [f"label {a} {text}" for a, text in sorted(inst.labels.items())]
    return "\n".join(lines) + "\n"


def instance_digest(inst: InstanceFile) -> str:
    return "sha256:" + hashlib.sha256(dump_instance(inst).encode()).hexdigest()


def render_decimal(x: Fraction, precision: int = DEFAULT_PRECISION) -> str:
    """``x`` rounded to ``precision`` significant digits (display only)."""
    with localcontext() as ctx:
        ctx.prec = precision + 5
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return format(d, f".{precision}g")


@dataclass
class ResultFile:
    instance_digest: str
    algorithm: str
    parameters: dict[str, str]
    values: list[Fraction]
    total: Fraction
    wall_time: float
    precision: int = DEFAULT_PRECISION
    version: int = FORMAT_VERSION


def dump_result(res: ResultFile) -> str:
    lines = [
        f"version {res.version}",
        f"instance {res.instance_digest}",
        f"algorithm {res.algorithm}",
    ]
    lines += [f"param {k} {v}" for k, v in sorted(res.parameters.items())]
    lines += [
        f"agents {len(res.values)}",
        f"total {res.total}",
        f"wall-time {res.wall_time:.6f}",
        f"precision {res.precision}",
    ]
    lines += [
        f"phi {i} {v} {render_decimal(v, res.precision)}"
        for i, v in enumerate(res.values, start=1)
    ]
    return "\n".join(lines) + "\n"


def parse_result(text: str) -> ResultFile:
    fields: dict[str, str] = {}
    params: dict[str, str] = {}
    phis: dict[int, Fraction] = {}
    for lineno, toks in _directives(text):
        key, args = toks[0], toks[1:]
        if key == "param":
            if len(args) < 2:
                raise FormatError("expected 'param <name> <value>'", lineno)
            params[args[0]] = " ".join(args[1:])
        elif key == "phi":
            if len(args) != 3:
                raise FormatError("expected 'phi <agent> <p/q> <decimal>'", lineno)
            phis[_int(args[0], lineno, "agent")] = _rational(args[1], lineno, "value")
        elif key in ("version", "instance", "algorithm", "agents", "total", "wall-time", "precision"):
            if len(args) != 1:
                raise FormatError(f"expected '{key} <value>'", lineno)
            fields[key] = args[0]
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)
    for key in ("version", "instance", "algorithm", "agents", "total", "wall-time"):
        if key not in fields:
            raise FormatError(f"missing '{key}' directive")
    n = _int(fields["agents"], None, "agents")
    if sorted(phis) != list(range(1, n + 1)):
        raise FormatError(f"expected phi lines for agents 1..{n}")
    return ResultFile(
        instance_digest=fields["instance"],
        algorithm=fields["algorithm"],
        parameters=params,
        values=[phis[i] for i in range(1, n + 1)],
        total=_rational(fields["total"], None, "total"),
        wall_time=float(fields["wall-time"]),
        precision=_int(fields.get("precision", str(DEFAULT_PRECISION)), None, "precision"),
        version=_int(fields["version"], None, "version"),
    )
