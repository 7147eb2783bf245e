"""Circuit representation, text format, and gate classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import bits, gates

UNITARY_TOL = 1e-10
CLASS_TOL = 1e-12
MAX_GATE_WIDTH = 12


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.source = source


class GateClass(enum.Enum):
    DIAGONAL = "diagonal"
    PERMUTATION = "permutation"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class Gate:
    matrix: np.ndarray
    support: tuple[int, ...]
    label: str = "matrix"
    params: tuple[float, ...] = ()

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        object.__setattr__(self, "support", support)
        m = np.array(self.matrix, dtype=complex)
        w = len(support)
        if w == 0:
            raise CircuitError("gate with empty support")
        if len(set(support)) != w:
            raise CircuitError(f"repeated qubit in support {support}")
        if min(support) < 0:
            raise CircuitError(f"negative qubit index in {support}")
        if m.shape != (1 << w, 1 << w):
            raise CircuitError(f"matrix shape {m.shape} does not match support of size {w}")
        err = np.max(np.abs(m.conj().T @ m - np.eye(1 << w)))
        if err > UNITARY_TOL:
            raise CircuitError(f"gate {self.label} is not unitary (max deviation {err:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @classmethod
    def named(cls, name: str, qubits: Sequence[int], *params: float) -> "Gate":
        key = gates.canonical(name)
        if key in gates.ROTATIONS:
            if len(params) != 1 or len(qubits) != 1:
                raise CircuitError(f"{key} takes one qubit and one angle")
            return cls(gates.ROTATIONS[key](params[0]), tuple(qubits), key, (params[0],))
        if key not in gates.FIXED:
            raise CircuitError(f"unknown gate {name!r}")
        arity, m = gates.FIXED[key]
        if len(qubits) != arity:
            raise CircuitError(f"{key} acts on {arity} qubit(s), got {len(qubits)}")
        if params:
            raise CircuitError(f"{key} takes no parameters")
        return cls(m, tuple(qubits), key)

    @property
    def width(self) -> int:
        return len(self.support)

    @cached_property
    def gate_class(self) -> GateClass:
        return classify_gate(self)

    @cached_property
    def permutation(self) -> tuple[np.ndarray, np.ndarray]:
        """For a basis-permutation gate: (image of each local index, phase)."""
        if self.gate_class is GateClass.GENERAL:
            raise CircuitError(f"gate {self.label} is not a basis permutation")
        image = np.argmax(np.abs(self.matrix), axis=0)
        phase = self.matrix[image, np.arange(self.matrix.shape[1])]
        return image, phase

    def on(self, support: Sequence[int]) -> "Gate":
        return Gate(self.matrix, tuple(support), self.label, self.params)

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return (
            self.support == other.support
            and self.label == other.label
            and self.params == other.params
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.support, self.label, self.params, self.matrix.tobytes()))

    def __repr__(self):
        p = f"({', '.join(map(repr, self.params))})" if self.params else ""
        return f"Gate({self.label}{p} on {self.support})"


def classify_gate(g: Gate, tol: float = CLASS_TOL) -> GateClass:
    m = np.abs(g.matrix)
    off = m - np.diag(np.diag(m))
    if np.all(off <= tol):
        return GateClass.DIAGONAL
    unit = np.abs(m - 1.0) <= tol
    small = m <= tol
    if np.all(unit.sum(axis=0) == 1) and np.all(unit | small):
        return GateClass.PERMUTATION
    return GateClass.GENERAL


def apply_permutation_gate(g: Gate, x: int) -> tuple[int, complex]:
    """Return ``(y, phase)`` with ``g|x> = phase |y>``."""
    if g.gate_class is GateClass.GENERAL:
        raise CircuitError(f"gate {g.label} on {g.support} is not a basis permutation")
    image, phase = g.permutation
    j = bits.local_index(x, g.support)
    return bits.with_local(x, g.support, int(image[j])), complex(phase[j])


@dataclass(frozen=True, eq=False)
class ControlTable:
    """Classical control of one gate slot by bits outside its support.

    ``table`` maps the control bits (ordered as ``controls``) to the gate used;
    records missing from the table use ``default``.
    """

    controls: tuple[int, ...]
    table: Mapping[tuple[int, ...], Gate]
    default: Gate
    source: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "table", dict(self.table))
        for key, g in self.table.items():
            if len(key) != len(self.controls) or any(b not in (0, 1) for b in key):
                raise CircuitError(f"bad control key {key} for controls {self.controls}")
            if g.support != self.default.support:
                raise CircuitError("controlled alternatives must share the default gate's support")
        if set(self.controls) & set(self.default.support):
            raise CircuitError("control qubits overlap the gate support")

    def resolve(self, x: int) -> Gate:
        return self.table.get(bits.restrict(x, self.controls), self.default)

    def alternatives(self) -> list[Gate]:
        out = [self.default]
        for g in self.table.values():
            if not any(g is h for h in out):
                out.append(g)
        return out

    def branches(self, n: int) -> list[tuple[Gate, np.ndarray]]:
        """Each distinct gate with the boolean mask of basis states that select it."""
        idx = np.arange(1 << n, dtype=np.int64)
        key = np.zeros(1 << n, dtype=np.int64)
        for i, q in enumerate(self.controls):
            key |= ((idx >> q) & 1) << i
        out = []
        default_mask = np.ones(1 << n, dtype=bool)
        groups: dict[int, list[int]] = {}
        gate_of: dict[int, Gate] = {}
        for bits_key, g in self.table.items():
            code = sum(b << i for i, b in enumerate(bits_key))
            groups.setdefault(id(g), []).append(code)
            gate_of[id(g)] = g
        for gid, codes in groups.items():
            mask = np.isin(key, codes)
            default_mask &= ~mask
            out.append((gate_of[gid], mask))
        if default_mask.any():
            out.append((self.default, default_mask))
        return out


@dataclass(frozen=True, eq=False)
class Circuit:
    n: int
    gates: tuple[Gate, ...]
    adaptive: Mapping[int, ControlTable] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "adaptive", dict(self.adaptive))
        if self.n < 1:
            raise CircuitError("circuit needs at least one qubit")
        for t, g in enumerate(self.gates):
            if max(g.support) >= self.n:
                raise CircuitError(f"gate {t} acts on qubit {max(g.support)} outside [0, {self.n})")
        for t, ctl in self.adaptive.items():
            if not 0 <= t < len(self.gates):
                raise CircuitError(f"control table for missing gate index {t}")
            if ctl.default.support != self.gates[t].support:
                raise CircuitError(f"control table for gate {t} has the wrong support")
            if ctl.controls and max(ctl.controls) >= self.n:
                raise CircuitError(f"control qubit out of range for gate {t}")

    @property
    def m(self) -> int:
        return len(self.gates)

    @property
    def is_adaptive(self) -> bool:
        return bool(self.adaptive)

    @property
    def max_width(self) -> int:
        return max((g.width for g in self.gates), default=0)

    def gate_for(self, t: int, x: int) -> Gate:
        """Gate ``t`` (0-based) as resolved for the current record ``x``."""
        ctl = self.adaptive.get(t)
        return self.gates[t] if ctl is None else ctl.resolve(x)

    def alternatives(self, t: int) -> list[Gate]:
        ctl = self.adaptive.get(t)
        return [self.gates[t]] if ctl is None else ctl.alternatives()

    def prefix(self, t: int) -> "Circuit":
        return Circuit(self.n, self.gates[:t], {k: v for k, v in self.adaptive.items() if k < t})

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if self.n != other.n or self.gates != other.gates:
            return False
        if self.adaptive.keys() != other.adaptive.keys():
            return False
        for t, a in self.adaptive.items():
            b = other.adaptive[t]
            if a.controls != b.controls or a.default != b.default or a.table != b.table:
                return False
        return True

    def __hash__(self):
        return hash((self.n, self.gates, tuple(sorted(self.adaptive))))


# --------------------------------------------------------------------------
# text format


def parse_complex(tok: str) -> complex:
    """``re,im`` or a bare real number."""
    parts = tok.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValueError(f"expected 're,im' or a real number, got {tok!r}")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r},{z.imag!r}"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _gate_from_tokens(name: str, qubits: list[int], rest: list[str]) -> Gate:
    key = gates.canonical(name)
    if key in gates.ROTATIONS:
        if len(rest) != 1:
            raise CircuitError(f"{key} expects one angle")
        return Gate.named(key, qubits, float(rest[0]))
    if rest:
        raise CircuitError(f"unexpected tokens {rest}")
    return Gate.named(key, qubits)


def _matrix_gate(w: int, qubits: list[int], entries: list[str]) -> Gate:
    if w > MAX_GATE_WIDTH:
        raise CircuitError(f"gate width {w} exceeds limit {MAX_GATE_WIDTH}")
    d = 1 << w
    if len(entries) != d * d:
        raise CircuitError(f"matrix on {w} qubits needs {d * d} entries, got {len(entries)}")
    m = np.array([parse_complex(e) for e in entries]).reshape(d, d)
    return Gate(m, tuple(qubits), "matrix")


def _parse_gate_line(toks: list[str]) -> Gate:
    name = toks[0].lower()
    if name == "matrix":
        w = int(toks[1])
        qubits = [int(q) for q in toks[2:2 + w]]
        return _matrix_gate(w, qubits, toks[2 + w:])
    if name in gates.ROTATIONS:
        if len(toks) != 3:
            raise CircuitError(f"usage: {name} <qubit> <theta>")
        return Gate.named(name, [int(toks[1])], float(toks[2]))
    key = gates.canonical(name)
    if key not in gates.FIXED:
        raise CircuitError(f"unknown gate {toks[0]!r}")
    arity = gates.FIXED[key][0]
    if len(toks) != 1 + arity:
        raise CircuitError(f"{key} expects {arity} qubit(s)")
    return Gate.named(key, [int(q) for q in toks[1:]])


def parse_control_table(text: str, base: Gate, source: str | None = None) -> ControlTable:
    """Parse a control table for the gate slot ``base``.

    Format::

        controls 3 4
        01 x            # gate name (+ angle) applied on base.support
        10 matrix 1,0 0,0 0,0 0,1
    """
    controls: tuple[int, ...] | None = None
    table: dict[tuple[int, ...], Gate] = {}
    w = base.width
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        toks = line.split()
        try:
            if controls is None:
                if toks[0] != "controls":
                    raise CircuitError("control table must start with 'controls'")
                controls = tuple(int(q) for q in toks[1:])
                continue
            key = tuple(int(ch) for ch in toks[0])
            if len(key) != len(controls):
                raise CircuitError(f"record {toks[0]} does not match {len(controls)} controls")
            if toks[1].lower() == "matrix":
                g = _matrix_gate(w, list(base.support), toks[2:])
            else:
                g = _gate_from_tokens(toks[1], list(base.support), toks[2:])
            table[key] = g
        except (CircuitError, ValueError, IndexError) as exc:
            raise CircuitParseError(str(exc), lineno, source) from None
    if controls is None:
        raise CircuitParseError("empty control table", None, source)
    try:
        return ControlTable(controls, table, base, source)
    except CircuitError as exc:
        raise CircuitParseError(str(exc), None, source) from None


def parse_circuit(
    text: str,
    source: str | None = None,
    base_dir: str | Path | None = None,
    loader: Callable[[str], str] | None = None,
) -> Circuit:
    """Parse the circuit text format.

    ``loader`` maps a control-table reference to its text; by default the
    reference is read as a file relative to ``base_dir``.
    """
    if loader is None:
        root = Path(base_dir) if base_dir is not None else Path(".")

        def loader(ref: str) -> str:
            return (root / ref).read_text(encoding="utf-8")

    n = None
    gate_list: list[Gate] = []
    adaptive: dict[int, ControlTable] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        toks = line.split()
        try:
            if n is None:
                if toks[0].lower() != "qubits" or len(toks) != 2:
                    raise CircuitError("first line must be 'qubits N'")
                n = int(toks[1])
                if n < 1:
                    raise CircuitError("qubit count must be positive")
                continue
            ref = None
            if "ctrl" in toks:
                k = toks.index("ctrl")
                if k != len(toks) - 2:
                    raise CircuitError("'ctrl <table-file>' must end the line")
                ref = toks[k + 1]
                toks = toks[:k]
            g = _parse_gate_line(toks)
            if max(g.support) >= n:
                raise CircuitError(f"qubit {max(g.support)} out of range for {n} qubits")
            if g.width > MAX_GATE_WIDTH:
                raise CircuitError(f"gate width {g.width} exceeds limit {MAX_GATE_WIDTH}")
            if ref is not None:
                try:
                    table_text = loader(ref)
                except OSError as exc:
                    raise CircuitError(f"cannot read control table {ref}: {exc}") from None
                ctl = parse_control_table(table_text, g, ref)
                if ctl.controls and max(ctl.controls) >= n:
                    raise CircuitError(f"control qubit out of range in {ref}")
                adaptive[len(gate_list)] = ctl
            gate_list.append(g)
        except CircuitParseError:
            raise
        except (CircuitError, ValueError, IndexError) as exc:
            raise CircuitParseError(str(exc), lineno, source) from None
    if n is None:
        raise CircuitParseError("missing 'qubits N' header", None, source)
    return Circuit(n, tuple(gate_list), adaptive)


def load_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_circuit(path.read_text(encoding="utf-8"), str(path), path.parent)


def _gate_tokens(g: Gate, with_support: bool = True) -> list[str]:
    sup = [str(q) for q in g.support] if with_support else []
    if g.label == "matrix":
        entries = [format_complex(z) for z in g.matrix.reshape(-1)]
        head = ["matrix", str(g.width)] if with_support else ["matrix"]
        return head + sup + entries
    if g.label in gates.ROTATIONS:
        return [g.label] + sup + [repr(g.params[0])]
    return [g.label] + sup


def serialize_control_table(ctl: ControlTable) -> str:
    lines = ["controls " + " ".join(map(str, ctl.controls))]
    for key, g in ctl.table.items():
        lines.append("".join(map(str, key)) + " " + " ".join(_gate_tokens(g, with_support=False)))
    return "\n".join(lines) + "\n"


def serialize_circuit(c: Circuit, table_names: Mapping[int, str] | None = None) -> str:
    """Inverse of :func:`parse_circuit`.

    Adaptive slots need a reference name per gate index in ``table_names``;
    the caller is responsible for writing :func:`serialize_control_table`
    output under those names.
    """
    lines = [f"qubits {c.n}"]
    for t, g in enumerate(c.gates):
        toks = _gate_tokens(g)
        if t in c.adaptive:
            if not table_names or t not in table_names:
                raise CircuitError(f"gate {t} is adaptive; pass a table name for it")
            toks += ["ctrl", table_names[t]]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def circuit_from_gates(n: int, gate_list: Iterable[Gate], adaptive: Mapping[int, ControlTable] | None = None) -> Circuit:
    return Circuit(n, tuple(gate_list), adaptive or {})
