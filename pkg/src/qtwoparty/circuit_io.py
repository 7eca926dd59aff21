"""Line-based DSL for circuits (``.qc2p``) and for bare two-party protocols.

Circuit grammar, one statement per line, ``#`` starts a comment::

    wire <label> <A|B>
    X|Y|Z|H|P|R <wire>
    CNOT <control> <target>

Bare protocols additionally accept::

    ancilla <label> <A|B>      fresh |0> wire
    send <wire> [<wire> ...]   move wires to the other party (one message)
    output <A|B> <wire>        declare a party's output wire
    oracle SWAP <w1> <w2>      parsed so it can be rejected: not a bare protocol

Gates in a protocol may act on any wires their current holder owns.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .gate_algebra import GateKind

PARTIES = ("A", "B")
_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.bare_message = message
        super().__init__(message if line is None else f"{message}, line {line}")


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    wires: tuple[str, ...]
    line: int | None = field(default=None, compare=False)

    @property
    def name(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class OracleCounts:
    channel: int
    and_box: int
    swap: int

    @property
    def total(self) -> int:
        return self.channel + self.and_box + self.swap

    def as_dict(self) -> dict:
        return {"channel": self.channel, "and_box": self.and_box, "swap": self.swap, "n_U": self.total}


@dataclass(frozen=True)
class Circuit:
    wires: tuple[str, ...]
    owner: dict[str, str]
    gates: tuple[Gate, ...]

    def __eq__(self, other):
        return (isinstance(other, Circuit) and self.wires == other.wires
                and self.owner == other.owner and self.gates == other.gates)

    def wires_of(self, party: str) -> tuple[str, ...]:
        return tuple(w for w in self.wires if self.owner[w] == party)

    def is_nonlocal(self, g: Gate) -> bool:
        return len({self.owner[w] for w in g.wires}) > 1

    @property
    def clifford_only(self) -> bool:
        return all(g.kind.is_clifford for g in self.gates)

    @property
    def n_nonlocal_cnot(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.CNOT and self.is_nonlocal(g))

    @property
    def n_r(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.R)

    def oracle_counts(self, release: str = "swap") -> OracleCounts:
        """Predicted oracle calls for a run with the given key-release mode."""
        ch = self.n_nonlocal_cnot + 2 * self.n_r
        if release == "swap":
            return OracleCounts(ch, self.n_r, 1)
        if release == "naive":
            return OracleCounts(ch + 2, self.n_r, 0)
        raise ValueError(f"unknown release mode {release!r}")

    @property
    def counts(self) -> OracleCounts:
        return self.oracle_counts("swap")


def _lines(text: str):
    if text.startswith("\ufeff"):
        text = text[1:]
    for no, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _declare(tokens, no, owner: dict, order: list, what: str):
    if len(tokens) != 3:
        raise ParseError(f"{what} expects a label and a party", no)
    _, label, party = tokens
    if not _LABEL.match(label):
        raise ParseError(f"bad wire label {label!r}", no)
    if party not in PARTIES:
        raise ParseError(f"party must be A or B, got {party!r}", no)
    if label in owner:
        raise ParseError(f"duplicate wire {label}", no)
    owner[label] = party
    order.append(label)


def _gate(tokens, no, known) -> Gate:
    name, args = tokens[0], tokens[1:]
    try:
        kind = GateKind(name)
    except ValueError:
        raise ParseError(f"unknown gate {name}", no) from None
    if len(args) != kind.arity:
        raise ParseError(f"{name} expects {kind.arity} wire(s), got {len(args)}", no)
    for w in args:
        if w not in known:
            raise ParseError(f"undeclared wire {w}", no)
    if len(set(args)) != len(args):
        raise ParseError(f"{name} needs distinct wires", no)
    return Gate(kind, tuple(args), no)


_PROTOCOL_ONLY = ("ancilla", "send", "output", "oracle")


def parse(text: str) -> Circuit:
    owner: dict[str, str] = {}
    order: list[str] = []
    gates: list[Gate] = []
    for no, tok in _lines(text):
        head = tok[0]
        if head == "wire":
            _declare(tok, no, owner, order, "wire")
        elif head in _PROTOCOL_ONLY:
            raise ParseError(f"statement '{head}' is only allowed in protocols", no)
        else:
            gates.append(_gate(tok, no, owner))
    return Circuit(tuple(order), owner, tuple(gates))


def format_circuit(c: Circuit) -> str:
    out = [f"wire {w} {c.owner[w]}" for w in c.wires]
    out += [" ".join((g.name,) + g.wires) for g in c.gates]
    return "\n".join(out) + "\n"


def load(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


@dataclass
class Diagnostics:
    errors: list[str]
    warnings: list[str]
    clifford_only: bool
    counts: OracleCounts

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(c: Circuit) -> Diagnostics:
    errors, warnings = [], []
    if not c.wires:
        errors.append("circuit declares no wires")
    used = {w for g in c.gates for w in g.wires}
    for w in c.wires:
        if w not in used:
            warnings.append(f"wire {w} is never used")
    return Diagnostics(errors, warnings, c.clifford_only, c.counts)


# --- bare protocols -------------------------------------------------------

@dataclass(frozen=True)
class Send:
    wires: tuple[str, ...]
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class OracleStmt:
    kind: str
    wires: tuple[str, ...]
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ProtocolSpec:
    """A parsed protocol: input wires, ancillas, and a statement list."""

    inputs: tuple[str, ...]
    ancillas: tuple[str, ...]
    owner: dict[str, str]
    statements: tuple
    outputs: dict[str, str]

    @property
    def is_bare(self) -> bool:
        return not any(isinstance(s, OracleStmt) for s in self.statements)

    @property
    def n_messages(self) -> int:
        return sum(1 for s in self.statements if isinstance(s, Send))


def parse_protocol(text: str) -> ProtocolSpec:
    owner: dict[str, str] = {}
    inputs: list[str] = []
    ancillas: list[str] = []
    stmts: list = []
    outputs: dict[str, str] = {}
    for no, tok in _lines(text):
        head = tok[0]
        if head == "wire":
            _declare(tok, no, owner, inputs, "wire")
        elif head == "ancilla":
            _declare(tok, no, owner, ancillas, "ancilla")
        elif head == "send":
            if len(tok) < 2:
                raise ParseError("send needs at least one wire", no)
            for w in tok[1:]:
                if w not in owner:
                    raise ParseError(f"undeclared wire {w}", no)
            stmts.append(Send(tuple(tok[1:]), no))
        elif head == "output":
            if len(tok) != 3 or tok[1] not in PARTIES:
                raise ParseError("output expects a party and a wire", no)
            if tok[2] not in owner:
                raise ParseError(f"undeclared wire {tok[2]}", no)
            outputs[tok[1]] = tok[2]
        elif head == "oracle":
            if len(tok) < 2:
                raise ParseError("oracle needs a kind", no)
            for w in tok[2:]:
                if w not in owner:
                    raise ParseError(f"undeclared wire {w}", no)
            stmts.append(OracleStmt(tok[1], tuple(tok[2:]), no))
        else:
            stmts.append(_gate(tok, no, owner))
    return ProtocolSpec(tuple(inputs), tuple(ancillas), owner, tuple(stmts), outputs)


def format_protocol(p: ProtocolSpec) -> str:
    out = [f"wire {w} {p.owner[w]}" for w in p.inputs]
    out += [f"ancilla {w} {p.owner[w]}" for w in p.ancillas]
    for s in p.statements:
        if isinstance(s, Send):
            out.append("send " + " ".join(s.wires))
        elif isinstance(s, OracleStmt):
            out.append(" ".join(("oracle", s.kind) + s.wires))
        else:
            out.append(" ".join((s.name,) + s.wires))
    out += [f"output {p_} {w}" for p_, w in sorted(p.outputs.items())]
    return "\n".join(out) + "\n"


def circuit_from_gates(owner: dict[str, str], gates: Iterable[tuple]) -> Circuit:
    """Build a circuit from (name, wire, ...) tuples; handy in tests."""
    gl = [Gate(GateKind(g[0]), tuple(g[1:])) for g in gates]
    return Circuit(tuple(owner), dict(owner), tuple(gl))
