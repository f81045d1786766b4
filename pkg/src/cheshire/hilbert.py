"""Sparse state-vector and operator algebra on tensor products of two-level factors.

Basis convention
----------------
An n-photon state lives on 2n two-level factors ordered as

    path_1 ... path_n  pol_1 ... pol_n

with encoding L -> 0, R -> 1 for path factors and H -> 0, V -> 1 for
polarization factors. A basis index k in [0, 4**n) is the 2n-bit binary
string read in factor order, most significant bit first, so for n = 2 the
label "0100" (photon 1 on the left arm, photon 2 on the right, both
horizontal) is index 4.

Labels are accepted in two forms: a compact 2n-character string over
{0, 1, L, R, H, V} ("0100", "LRHH", and mixtures), or whitespace-separated
per-factor tokens such as "L1 R2 H1 H2" (an optional underscore before the
photon number is allowed). Both name the same basis state.

Kets are sparse maps from basis index to a complex amplitude; amplitudes
with magnitude below PRUNE_THRESHOLD are dropped after every operation.
Operators are sparse in column-access form: a function from a basis index
to the nonzero entries of that column. The named constructors build the
path projectors, the circular polarization observable

    sigma_z = |up><up| - |down><down|,   up/down = (|H> +- i|V>)/sqrt(2)

(which acts as sigma_z|H> = i|V>, sigma_z|V> = -i|H> in the H/V basis),
and their per-arm products.

Global phase is never silently normalized away; comparing two kets up to a
global phase is the separate operation `fidelity_up_to_phase`.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError, ZeroNormError

PRUNE_THRESHOLD = 1e-14
NORM_TOL = 1e-12

_PATH_CHARS = {"0": 0, "1": 1, "L": 0, "R": 1}
_POL_CHARS = {"0": 0, "1": 1, "H": 0, "V": 1}
_TOKEN_FORM = re.compile(r"^([LRHV])_?([0-9]+)$")

# to_dense / items guard: keeps accidental materialization of huge spaces out
_DENSE_DIM_LIMIT = 1024


@dataclass(frozen=True)
class BasisConvention:
    """Fixes the factor ordering and encoding for an n-photon space."""

    n_photons: int

    def __post_init__(self):
        if not isinstance(self.n_photons, int) or self.n_photons < 1:
            raise InputError(f"n_photons must be a positive integer, got {self.n_photons!r}")

    @property
    def n_factors(self) -> int:
        return 2 * self.n_photons

    @property
    def dim(self) -> int:
        return 4**self.n_photons

    def check_photon(self, i: int) -> None:
        if not 1 <= i <= self.n_photons:
            raise InputError(f"photon index {i} out of range 1..{self.n_photons}")

    def bit_position(self, factor: int) -> int:
        # factor counted 0-based from the left of the label; MSB-first encoding
        return self.n_factors - 1 - factor

    def index_of_label(self, label: str) -> int:
        n = self.n_photons
        text = label.strip()
        if any(ch.isspace() for ch in text):
            return self._index_of_tokens(text)
        if len(text) != self.n_factors:
            raise InputError(
                f"label {label!r} has length {len(text)}, expected {self.n_factors} for n={n}"
            )
        bits = []
        for pos, ch in enumerate(text.upper()):
            table = _PATH_CHARS if pos < n else _POL_CHARS
            if ch not in table:
                kind = "path" if pos < n else "polarization"
                raise InputError(f"label {label!r}: character {ch!r} invalid for a {kind} factor")
            bits.append(table[ch])
        index = 0
        for b in bits:
            index = (index << 1) | b
        return index

    def _index_of_tokens(self, text: str) -> int:
        n = self.n_photons
        values: dict[int, int] = {}
        for token in text.split():
            m = _TOKEN_FORM.match(token.upper())
            if m is None:
                raise InputError(f"token {token!r} is not of the form L1/R2/H1/V2")
            letter, num = m.group(1), int(m.group(2))
            if not 1 <= num <= n:
                raise InputError(f"token {token!r}: photon index out of range 1..{n}")
            if letter in ("L", "R"):
                factor, bit = num - 1, _PATH_CHARS[letter]
            else:
                factor, bit = n + num - 1, _POL_CHARS[letter]
            if factor in values:
                raise InputError(f"token {token!r} repeats an already specified factor")
            values[factor] = bit
        if len(values) != self.n_factors:
            raise InputError(
                f"label {text!r} specifies {len(values)} factors, expected {self.n_factors}"
            )
        index = 0
        for factor in range(self.n_factors):
            index = (index << 1) | values[factor]
        return index

    def label_of_index(self, index: int, letters: bool = False) -> str:
        if not 0 <= index < self.dim:
            raise InputError(f"basis index {index} out of range for dim {self.dim}")
        bits = format(index, f"0{self.n_factors}b")
        if not letters:
            return bits
        n = self.n_photons
        path = "".join("LR"[int(b)] for b in bits[:n])
        pol = "".join("HV"[int(b)] for b in bits[n:])
        return path + pol


def _prune(amplitudes: dict[int, complex]) -> dict[int, complex]:
    return {k: complex(v) for k, v in amplitudes.items() if abs(v) >= PRUNE_THRESHOLD}


@dataclass(frozen=True)
class Ket:
    """Sparse complex amplitude vector over the labeled basis.

    The `normalized` flag is computed at construction and simply records
    whether the stored norm is 1 within NORM_TOL.
    """

    convention: BasisConvention
    amplitudes: dict[int, complex]
    normalized: bool = field(default=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ket):
            return NotImplemented
        return self.convention == other.convention and self.amplitudes == other.amplitudes

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.amplitudes))

    def amplitude(self, label_or_index) -> complex:
        k = label_or_index
        if isinstance(k, str):
            k = self.convention.index_of_label(k)
        return self.amplitudes.get(k, 0j)

    def to_dense(self) -> np.ndarray:
        vec = np.zeros(self.convention.dim, dtype=complex)
        for k, a in self.amplitudes.items():
            vec[k] = a
        return vec


def make_ket(convention: BasisConvention, amplitudes: dict[int, complex]) -> Ket:
    """Build a Ket from raw amplitudes, pruning and setting the norm flag."""
    amps = _prune(amplitudes)
    for k in amps:
        if not 0 <= k < convention.dim:
            raise InputError(f"basis index {k} out of range for dim {convention.dim}")
    total = sum(abs(a) ** 2 for a in amps.values())
    return Ket(convention, amps, abs(total - 1.0) <= NORM_TOL)


def basis_ket(convention: BasisConvention, label: str) -> Ket:
    """Unit amplitude on one basis state, named by either label form."""
    return make_ket(convention, {convention.index_of_label(label): 1.0 + 0j})


def ket_from_dense(convention: BasisConvention, vec: np.ndarray) -> Ket:
    if len(vec) != convention.dim:
        raise InputError(f"dense vector has length {len(vec)}, expected {convention.dim}")
    return make_ket(convention, {k: complex(v) for k, v in enumerate(vec) if v != 0})


def superpose(terms: Sequence[tuple[complex, Ket]]) -> Ket:
    """Linear combination sum_j c_j |ket_j>. All terms must share a convention."""
    if not terms:
        raise InputError("superpose needs at least one term")
    convention = terms[0][1].convention
    out: dict[int, complex] = {}
    for coeff, ket in terms:
        if ket.convention != convention:
            raise InputError("superpose terms use mixed conventions")
        for k, a in ket.amplitudes.items():
            out[k] = out.get(k, 0j) + coeff * a
    return make_ket(convention, out)


def inner(bra_side: Ket, ket_side: Ket) -> complex:
    """<bra|ket>, conjugate-linear in the first argument."""
    if bra_side.convention != ket_side.convention:
        raise InputError("inner product between mixed conventions")
    bra, ket = bra_side.amplitudes, ket_side.amplitudes
    keys = bra if len(bra) <= len(ket) else ket
    return complex(sum(bra[k].conjugate() * ket[k] for k in keys if k in bra and k in ket))


def normalize(state: Ket) -> Ket:
    """Scale to unit norm. Global phase is untouched."""
    n = state.norm()
    if n == 0.0:
        raise ZeroNormError("cannot normalize the zero vector")
    return make_ket(state.convention, {k: a / n for k, a in state.amplitudes.items()})


def fidelity_up_to_phase(a: Ket, b: Ket) -> float:
    """max over phases of |<a|e^{i phi} b>| after normalizing both: |<a_hat|b_hat>|."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("fidelity with the zero vector is undefined")
    return abs(inner(a, b)) / (na * nb)


def equal_up_to_phase(a: Ket, b: Ket, tol: float = 1e-12) -> bool:
    return fidelity_up_to_phase(a, b) >= 1.0 - tol


ColumnAction = Callable[[int], dict[int, complex]]


@dataclass(frozen=True)
class Operator:
    """Linear map in sparse column-access form.

    `column(k)` returns the nonzero entries of column k as {row: value},
    i.e. the expansion of O|k>. Structural constructors never materialize
    the full matrix, which keeps large-n photon counts cheap; `to_dense`
    and `items` are guarded for small dimensions only.
    """

    convention: BasisConvention
    col_action: ColumnAction
    name: str = ""

    def column(self, k: int) -> dict[int, complex]:
        if not 0 <= k < self.convention.dim:
            raise InputError(f"column index {k} out of range for dim {self.convention.dim}")
        return self.col_action(k)

    def items(self) -> Iterator[tuple[int, int, complex]]:
        dim = self.convention.dim
        if dim > _DENSE_DIM_LIMIT:
            raise InputError(f"refusing to enumerate a dim-{dim} operator; limit {_DENSE_DIM_LIMIT}")
        for k in range(dim):
            col = self.col_action(k)
            for j in sorted(col):
                if abs(col[j]) >= PRUNE_THRESHOLD:
                    yield j, k, col[j]

    def to_dense(self) -> np.ndarray:
        dim = self.convention.dim
        if dim > _DENSE_DIM_LIMIT:
            raise InputError(f"refusing to densify a dim-{dim} operator; limit {_DENSE_DIM_LIMIT}")
        mat = np.zeros((dim, dim), dtype=complex)
        for j, k, v in self.items():
            mat[j, k] = v
        return mat


def apply(op: Operator, state: Ket) -> Ket:
    """Matrix-vector product O|state>, sparsity preserving."""
    if op.convention != state.convention:
        raise InputError("operator and state use mixed conventions")
    out: dict[int, complex] = {}
    for k, a in state.amplitudes.items():
        for j, v in op.col_action(k).items():
            out[j] = out.get(j, 0j) + v * a
    return make_ket(state.convention, out)


def identity_op(convention: BasisConvention) -> Operator:
    return Operator(convention, lambda k: {k: 1.0 + 0j}, "identity")


def path_projector(convention: BasisConvention, photon: int, arm: str) -> Operator:
    """|arm><arm| on the path factor of one photon, identity elsewhere."""
    convention.check_photon(photon)
    if arm not in ("L", "R"):
        raise InputError(f"arm must be 'L' or 'R', got {arm!r}")
    want = _PATH_CHARS[arm]
    shift = convention.bit_position(photon - 1)

    def col(k: int) -> dict[int, complex]:
        return {k: 1.0 + 0j} if (k >> shift) & 1 == want else {}

    return Operator(convention, col, f"path:{photon}:{arm}")


def circular_sigma_z(convention: BasisConvention, photon: int) -> Operator:
    """Circular polarization observable on one photon.

    In the H/V basis this is [[0, -i], [i, 0]]: H maps to i V and V to -i H.
    Eigenvalues are exactly +1 and -1 on the circular basis states.
    """
    convention.check_photon(photon)
    shift = convention.bit_position(convention.n_photons + photon - 1)
    mask = 1 << shift

    def col(k: int) -> dict[int, complex]:
        if k & mask:
            return {k ^ mask: -1j}
        return {k ^ mask: 1j}

    return Operator(convention, col, f"sigma:{photon}")


def grin_observable(convention: BasisConvention, photon: int, arm: str) -> Operator:
    """Product of the circular polarization observable and one arm's projector.

    The two act on disjoint factors of the same photon, so they commute and
    the product is Hermitian.
    """
    convention.check_photon(photon)
    if arm not in ("L", "R"):
        raise InputError(f"arm must be 'L' or 'R', got {arm!r}")
    want = _PATH_CHARS[arm]
    path_shift = convention.bit_position(photon - 1)
    pol_shift = convention.bit_position(convention.n_photons + photon - 1)
    mask = 1 << pol_shift

    def col(k: int) -> dict[int, complex]:
        if (k >> path_shift) & 1 != want:
            return {}
        if k & mask:
            return {k ^ mask: -1j}
        return {k ^ mask: 1j}

    return Operator(convention, col, f"grin:{photon}:{arm}")


def op_add(a: Operator, b: Operator) -> Operator:
    if a.convention != b.convention:
        raise InputError("operator sum between mixed conventions")

    def col(k: int) -> dict[int, complex]:
        out = dict(a.col_action(k))
        for j, v in b.col_action(k).items():
            out[j] = out.get(j, 0j) + v
        return out

    return Operator(a.convention, col, f"({a.name}+{b.name})")


def op_scale(c: complex, a: Operator) -> Operator:
    cc = complex(c)
    return Operator(a.convention, lambda k: {j: cc * v for j, v in a.col_action(k).items()},
                    f"{c}*{a.name}")


def op_compose(a: Operator, b: Operator) -> Operator:
    """Operator product a @ b (apply b first)."""
    if a.convention != b.convention:
        raise InputError("operator product between mixed conventions")

    def col(k: int) -> dict[int, complex]:
        out: dict[int, complex] = {}
        for m, v in b.col_action(k).items():
            for j, w in a.col_action(m).items():
                out[j] = out.get(j, 0j) + w * v
        return out

    return Operator(a.convention, col, f"({a.name}@{b.name})")


def operator_from_dense(convention: BasisConvention, matrix: np.ndarray, name: str = "") -> Operator:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (convention.dim, convention.dim):
        raise InputError(
            f"matrix shape {matrix.shape} does not match dim {convention.dim}"
        )

    def col(k: int) -> dict[int, complex]:
        column = matrix[:, k]
        return {int(j): complex(column[j]) for j in np.nonzero(column)[0]}

    return Operator(convention, col, name)


# ---------------------------------------------------------------------------
# structured text serialization
#
# Kets:                               Operators:
#     ket n=2                             operator n=1
#     0100 0.7071067811865476 0.0         00 00 1.0 0.0
#     1000 0.7071067811865476 0.0         ...
#
# One row per nonzero amplitude (entry), floats written with repr so the
# round-trip is bit exact.


def ket_to_text(state: Ket) -> str:
    lines = [f"ket n={state.convention.n_photons}"]
    for k in sorted(state.amplitudes):
        a = state.amplitudes[k]
        label = state.convention.label_of_index(k)
        lines.append(f"{label} {a.real!r} {a.imag!r}")
    return "\n".join(lines) + "\n"


def ket_from_text(text: str) -> Ket:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("ket "):
        raise InputError("ket text must start with a 'ket n=<photons>' header")
    header = lines[0].split()
    if len(header) != 2 or not header[1].startswith("n="):
        raise InputError(f"malformed ket header {lines[0]!r}")
    convention = BasisConvention(int(header[1][2:]))
    amps: dict[int, complex] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise InputError(f"malformed ket row {ln!r}")
        k = convention.index_of_label(parts[0])
        amps[k] = amps.get(k, 0j) + complex(float(parts[1]), float(parts[2]))
    return make_ket(convention, amps)


def operator_to_text(op: Operator) -> str:
    lines = [f"operator n={op.convention.n_photons}"]
    for j, k, v in op.items():
        row = op.convention.label_of_index(j)
        col = op.convention.label_of_index(k)
        lines.append(f"{row} {col} {v.real!r} {v.imag!r}")
    return "\n".join(lines) + "\n"


def operator_from_text(text: str) -> Operator:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("operator "):
        raise InputError("operator text must start with an 'operator n=<photons>' header")
    header = lines[0].split()
    if len(header) != 2 or not header[1].startswith("n="):
        raise InputError(f"malformed operator header {lines[0]!r}")
    convention = BasisConvention(int(header[1][2:]))
    entries: dict[tuple[int, int], complex] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise InputError(f"malformed operator row {ln!r}")
        j = convention.index_of_label(parts[0])
        k = convention.index_of_label(parts[1])
        entries[(j, k)] = entries.get((j, k), 0j) + complex(float(parts[2]), float(parts[3]))
    columns: dict[int, dict[int, complex]] = {}
    for (j, k), v in entries.items():
        columns.setdefault(k, {})[j] = v

    def col(k: int) -> dict[int, complex]:
        return dict(columns.get(k, {}))

    return Operator(convention, col, "from_text")
