"""Linear-optical circuit simulator for the two-photon interferometer.

States are sparse maps from a configuration, one (mode, polarization) pair
per photon, to a complex amplitude. Spatial modes are free-form identifiers
(L, R, w1, ...); polarization is H or V. Elements act unitarily on their
addressed subspace:

* PBS on ports (a, b): H stays on its port, V swaps ports (self-inverse).
* HWP on one arm: swaps H and V there.
* Hadamard plate on one arm: (1/sqrt 2)[[1, 1], [1, -1]] on polarization.
* Phase shifter on one arm: multiplies amplitudes by e^{i phase}.
* Mirror: identity relabeling, no phase.
* Beam splitter on a pair of joint path configurations (one mode per
  photon): the 2x2 unitary [[t, -conj(r)], [r, conj(t)]] applied identically
  across polarization blocks, with |t|^2 + |r|^2 = 1. The 50:50 symmetric
  convention is t = 1/sqrt(2), r = i/sqrt(2). Output ports may relabel the
  modes. "Adjusting" a splitter means choosing (t, r); splitters marked
  adjustable are the ones `calibrate_postselection` retunes.

Circuit description file, one directive per line ('#' starts a comment):

    photons 2
    source spdc modes=L,L            # or: source ket path=L,R pol=H,V
    element pbs photon=1 ports=L,R
    element hwp photon=1 arm=R
    element hadamard photon=2 arm=L
    element phase photon=2 arm=L shift=pi/2
    element mirror photon=1 arm=L
    element bs name=BS1 in_a=L,R in_b=R,L out_a=L,R out_b=R,L \
               t=1/sqrt(2) r=-1/sqrt(2) adjustable
    postselection                    # splits pre-block from post-block
    detector D5 photon=1 mode=R pol=H
    postselect-on D5

Numeric parameters are arithmetic expressions (pi, i, sqrt, ...). Elements
before the `postselection` marker form the pre-selection block; the rest is
the post-selection block. Detector lines bind (photon, mode, polarization)
ports to labels; a run groups final configurations by their coincidence
pattern (the sorted set of labels the photons land on, joined with '+'), and
the `postselect-on` label names the success pattern in which every photon
lands on that detector.

Monte Carlo runs draw whole coincidence patterns from the exact
distribution. Shots are processed in fixed 4096-shot blocks, each with its
own generator seeded from (seed, block index), so counts depend only on
(circuit, shots, seed) and never on how many workers process the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import hilbert
from .errors import (
    CalibrationError,
    CircuitConfigError,
    CircuitParseError,
    InputError,
    ZeroNormError,
)
from .expr import parse_complex, parse_real
from .hilbert import BasisConvention, Ket

Config = tuple[tuple[str, str], ...]
OpticsState = dict[Config, complex]

_PRUNE = 1e-14
_POLS = ("H", "V")
_BLOCK = 4096


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class Pbs:
    photon: int
    ports: tuple[str, str]


@dataclass(frozen=True)
class Hwp:
    photon: int
    arm: str


@dataclass(frozen=True)
class HadamardPlate:
    photon: int
    arm: str


@dataclass(frozen=True)
class PhaseShifter:
    photon: int
    arm: str
    phase: float


@dataclass(frozen=True)
class Mirror:
    photon: int
    arm: str


@dataclass(frozen=True)
class BeamSplitter:
    name: str
    in_a: tuple[str, ...]
    in_b: tuple[str, ...]
    out_a: tuple[str, ...]
    out_b: tuple[str, ...]
    t: complex
    r: complex
    adjustable: bool = False

    def __post_init__(self):
        if abs(abs(self.t) ** 2 + abs(self.r) ** 2 - 1.0) > 1e-12:
            raise InputError(
                f"beam splitter {self.name or '(unnamed)'}: |t|^2 + |r|^2 must be 1, "
                f"got t={self.t}, r={self.r}"
            )
        if self.in_a == self.in_b or self.out_a == self.out_b:
            raise InputError(f"beam splitter {self.name!r} needs two distinct port configurations")


Element = Pbs | Hwp | HadamardPlate | PhaseShifter | Mirror | BeamSplitter


def pbs_action(photon: int, ports: tuple[str, str] = ("L", "R")) -> Pbs:
    """Polarizing splitter: H transmits (stays on its port), V reflects (swaps)."""
    return Pbs(photon, tuple(ports))


def hwp_action(photon: int, arm: str) -> Hwp:
    """Half-wave plate: H <-> V on the addressed arm only."""
    return Hwp(photon, arm)


def hadamard_plate(photon: int, arm: str) -> HadamardPlate:
    return HadamardPlate(photon, arm)


def phase_shifter(photon: int, arm: str, phase: float) -> PhaseShifter:
    return PhaseShifter(photon, arm, float(phase))


def mirror(photon: int, arm: str) -> Mirror:
    return Mirror(photon, arm)


def beam_splitter(
    in_a: Sequence[str],
    in_b: Sequence[str],
    t: complex,
    r: complex,
    out_a: Sequence[str] | None = None,
    out_b: Sequence[str] | None = None,
    name: str = "",
    adjustable: bool = False,
) -> BeamSplitter:
    """Two-port splitter on joint path configurations (one mode per photon)."""
    in_a = tuple(in_a)
    in_b = tuple(in_b)
    return BeamSplitter(
        name,
        in_a,
        in_b,
        tuple(out_a) if out_a is not None else in_a,
        tuple(out_b) if out_b is not None else in_b,
        complex(t),
        complex(r),
        adjustable,
    )


# ---------------------------------------------------------------------------
# circuit


@dataclass(frozen=True)
class SpdcSource:
    modes: tuple[str, str]


@dataclass(frozen=True)
class KetSource:
    paths: tuple[str, ...]
    pols: tuple[str, ...]


@dataclass(frozen=True)
class Circuit:
    n_photons: int
    source: SpdcSource | KetSource
    pre_elements: tuple[Element, ...]
    post_elements: tuple[Element, ...]
    detectors: dict[tuple[int, str, str], str]
    postselect_on: str

    def element_photon_range_ok(self) -> None:
        for el in self.pre_elements + self.post_elements:
            if isinstance(el, BeamSplitter):
                for cfg in (el.in_a, el.in_b, el.out_a, el.out_b):
                    if len(cfg) != self.n_photons:
                        raise CircuitConfigError(
                            f"beam splitter {el.name!r} port configuration {cfg} "
                            f"does not list one mode per photon"
                        )
            else:
                if not 1 <= el.photon <= self.n_photons:
                    raise CircuitConfigError(f"element {el} addresses a missing photon")


def spdc_source() -> Ket:
    """Polarization-entangled pair (|HV> + |VH>)/sqrt(2), both photons on mode L."""
    conv = BasisConvention(2)
    inv = 1 / math.sqrt(2)
    return hilbert.make_ket(conv, {1: inv + 0j, 2: inv + 0j})


def _initial_state(circuit: Circuit) -> OpticsState:
    if isinstance(circuit.source, SpdcSource):
        m1, m2 = circuit.source.modes
        inv = 1 / math.sqrt(2)
        return {
            ((m1, "H"), (m2, "V")): inv + 0j,
            ((m1, "V"), (m2, "H")): inv + 0j,
        }
    pairs = tuple(zip(circuit.source.paths, circuit.source.pols))
    return {pairs: 1.0 + 0j}


# ---------------------------------------------------------------------------
# propagation


def _prune_state(state: OpticsState) -> OpticsState:
    return {c: a for c, a in state.items() if abs(a) >= _PRUNE}


def _norm(state: OpticsState) -> float:
    return math.sqrt(sum(abs(a) ** 2 for a in state.values()))


def apply_element(state: OpticsState, element: Element) -> OpticsState:
    out: OpticsState = {}
    if isinstance(element, BeamSplitter):
        block_a: dict[tuple[str, ...], complex] = {}
        block_b: dict[tuple[str, ...], complex] = {}
        for config, amp in state.items():
            modes = tuple(m for m, _ in config)
            pols = tuple(p for _, p in config)
            if modes == element.in_a:
                block_a[pols] = block_a.get(pols, 0j) + amp
            elif modes == element.in_b:
                block_b[pols] = block_b.get(pols, 0j) + amp
            else:
                out[config] = out.get(config, 0j) + amp
        t, r = element.t, element.r
        for pols in sorted(set(block_a) | set(block_b)):
            a_in = block_a.get(pols, 0j)
            b_in = block_b.get(pols, 0j)
            cfg_a = tuple(zip(element.out_a, pols))
            cfg_b = tuple(zip(element.out_b, pols))
            out[cfg_a] = out.get(cfg_a, 0j) + t * a_in - r.conjugate() * b_in
            out[cfg_b] = out.get(cfg_b, 0j) + r * a_in + t.conjugate() * b_in
        return _prune_state(out)

    i = element.photon - 1
    for config, amp in state.items():
        mode, pol = config[i]
        if isinstance(element, Pbs):
            a, b = element.ports
            if pol == "V" and mode == a:
                config = config[:i] + ((b, pol),) + config[i + 1 :]
            elif pol == "V" and mode == b:
                config = config[:i] + ((a, pol),) + config[i + 1 :]
            out[config] = out.get(config, 0j) + amp
        elif isinstance(element, Hwp):
            if mode == element.arm:
                flipped = "V" if pol == "H" else "H"
                config = config[:i] + ((mode, flipped),) + config[i + 1 :]
            out[config] = out.get(config, 0j) + amp
        elif isinstance(element, HadamardPlate):
            if mode == element.arm:
                inv = 1 / math.sqrt(2)
                cfg_h = config[:i] + ((mode, "H"),) + config[i + 1 :]
                cfg_v = config[:i] + ((mode, "V"),) + config[i + 1 :]
                if pol == "H":
                    out[cfg_h] = out.get(cfg_h, 0j) + inv * amp
                    out[cfg_v] = out.get(cfg_v, 0j) + inv * amp
                else:
                    out[cfg_h] = out.get(cfg_h, 0j) + inv * amp
                    out[cfg_v] = out.get(cfg_v, 0j) - inv * amp
            else:
                out[config] = out.get(config, 0j) + amp
        elif isinstance(element, PhaseShifter):
            if mode == element.arm:
                amp = amp * complex(math.cos(element.phase), math.sin(element.phase))
            out[config] = out.get(config, 0j) + amp
        elif isinstance(element, Mirror):
            out[config] = out.get(config, 0j) + amp
        else:
            raise InputError(f"unknown element {element!r}")
    return _prune_state(out)


def propagate(state: OpticsState, elements: Iterable[Element]) -> OpticsState:
    norm_before = _norm(state)
    for element in elements:
        state = apply_element(state, element)
        norm_after = _norm(state)
        if abs(norm_after - norm_before) > 1e-12 * max(norm_before, 1.0):
            raise CircuitConfigError(
                f"norm changed from {norm_before} to {norm_after} at element {element}; "
                "output modes collide with occupied pass-through modes"
            )
        norm_before = norm_after
    return state


def _adjoint(element: Element) -> Element:
    """Element whose action is the inverse of the given one."""
    if isinstance(element, PhaseShifter):
        return PhaseShifter(element.photon, element.arm, -element.phase)
    if isinstance(element, BeamSplitter):
        return BeamSplitter(
            element.name + "^-1",
            element.out_a,
            element.out_b,
            element.in_a,
            element.in_b,
            element.t.conjugate(),
            -element.r,
            element.adjustable,
        )
    # PBS, HWP, Hadamard plate, mirror are self-inverse
    return element


def state_to_ket(state: OpticsState, n_photons: int) -> Ket:
    """Convert a configuration state on L/R modes to a labeled-basis ket."""
    conv = BasisConvention(n_photons)
    amps: dict[int, complex] = {}
    for config, amp in state.items():
        index = 0
        for mode, _ in config:
            if mode not in ("L", "R"):
                raise InputError(f"mode {mode!r} has no labeled-basis equivalent")
            index = (index << 1) | (0 if mode == "L" else 1)
        for _, pol in config:
            index = (index << 1) | (0 if pol == "H" else 1)
        amps[index] = amps.get(index, 0j) + amp
    return hilbert.make_ket(conv, amps)


def ket_to_state(ket: Ket) -> OpticsState:
    n = ket.convention.n_photons
    state: OpticsState = {}
    for k, amp in ket.amplitudes.items():
        bits = format(k, f"0{2 * n}b")
        config = tuple(
            ("LR"[int(bits[i])], "HV"[int(bits[n + i])]) for i in range(n)
        )
        state[config] = amp
    return state


def run_pre_block(circuit: Circuit) -> Ket:
    """Source through the pre-selection block, as a labeled-basis ket."""
    circuit.element_photon_range_ok()
    state = propagate(_initial_state(circuit), circuit.pre_elements)
    return state_to_ket(state, circuit.n_photons)


# ---------------------------------------------------------------------------
# runs


@dataclass(frozen=True)
class PatternOutcome:
    probability: float
    state: OpticsState  # renormalized conditional state


@dataclass(frozen=True)
class ExactResult:
    patterns: dict[str, PatternOutcome]
    success_pattern: str

    def probabilities(self) -> dict[str, float]:
        return {p: o.probability for p, o in sorted(self.patterns.items())}

    def probability(self, pattern: str) -> float:
        outcome = self.patterns.get(pattern)
        return outcome.probability if outcome else 0.0

    @property
    def success_probability(self) -> float:
        return self.probability(self.success_pattern)

    def conditional(self, pattern: str) -> OpticsState:
        if pattern not in self.patterns:
            raise InputError(f"no amplitude reached pattern {pattern!r}")
        return dict(self.patterns[pattern].state)


@dataclass(frozen=True)
class ClickRecord:
    """Coincidence-pattern counts from a seeded Monte Carlo run.

    Keys are the same pattern strings run_exact reports; a singleton pattern
    such as "D5" counts the events in which every photon landed on that
    detector and nothing else clicked.
    """

    counts: dict[str, int]
    shots: int
    seed: int


def run_exact(circuit: Circuit) -> ExactResult:
    """Propagate exactly and group the final state by coincidence pattern."""
    circuit.element_photon_range_ok()
    state = propagate(_initial_state(circuit), circuit.pre_elements)
    state = propagate(state, circuit.post_elements)
    grouped: dict[str, OpticsState] = {}
    for config, amp in state.items():
        labels = set()
        for photon, (mode, pol) in enumerate(config, start=1):
            label = circuit.detectors.get((photon, mode, pol))
            if label is None:
                raise CircuitConfigError(
                    f"photon {photon} port ({mode}, {pol}) holds amplitude {amp} "
                    "but is not bound to any detector"
                )
            labels.add(label)
        pattern = "+".join(sorted(labels))
        grouped.setdefault(pattern, {})[config] = amp
    patterns: dict[str, PatternOutcome] = {}
    for pattern in sorted(grouped):
        block = grouped[pattern]
        prob = sum(abs(a) ** 2 for a in block.values())
        scale = 1 / math.sqrt(prob)
        patterns[pattern] = PatternOutcome(
            probability=prob,
            state={c: a * scale for c, a in sorted(block.items())},
        )
    return ExactResult(patterns, circuit.postselect_on)


def _block_counts(cum: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    rng = np.random.default_rng([seed, block])
    draws = rng.random(size)
    idx = np.searchsorted(cum, draws, side="right")
    return np.bincount(np.minimum(idx, len(cum) - 1), minlength=len(cum))


def run_monte_carlo(circuit: Circuit, shots: int, seed: int, workers: int = 1) -> ClickRecord:
    """Sample coincidence patterns; identical (circuit, shots, seed) give identical counts."""
    if shots < 1:
        raise InputError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise InputError(f"seed must be a nonnegative integer, got {seed}")
    exact = run_exact(circuit)
    names = sorted(exact.patterns)
    probs = np.array([exact.patterns[p].probability for p in names])
    cum = np.cumsum(probs / probs.sum())
    blocks = [(b, min(_BLOCK, shots - b * _BLOCK)) for b in range((shots + _BLOCK - 1) // _BLOCK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda bs: _block_counts(cum, seed, bs[0], bs[1]), blocks))
    else:
        partials = [_block_counts(cum, seed, b, size) for b, size in blocks]
    totals = np.sum(partials, axis=0)
    return ClickRecord(
        counts={name: int(c) for name, c in zip(names, totals)},
        shots=shots,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# post-selection analysis and calibration


def _success_config(circuit: Circuit) -> Config:
    """The unique final configuration in which every photon hits the success detector."""
    per_photon: list[list[tuple[str, str]]] = []
    for photon in range(1, circuit.n_photons + 1):
        options = sorted(
            (mode, pol)
            for (ph, mode, pol), label in circuit.detectors.items()
            if ph == photon and label == circuit.postselect_on
        )
        if not options:
            raise CircuitConfigError(
                f"photon {photon} has no port bound to detector {circuit.postselect_on!r}"
            )
        per_photon.append(options)
    combos = list(product(*per_photon))
    if len(combos) != 1:
        raise CircuitConfigError(
            f"post-selection on {circuit.postselect_on!r} is not a unique configuration "
            f"({len(combos)} candidates); calibration needs a single success port"
        )
    return tuple(combos[0])


def effective_postselection(circuit: Circuit) -> Ket:
    """The post-selection vector the post-block realizes on its L/R inputs.

    Pulls the success configuration backward through the post-block
    (adjoint propagation), then keeps the components on L/R input modes.
    Weak values computed against this vector are exactly those the physical
    conditioning implements.
    """
    vec: OpticsState = {_success_config(circuit): 1.0 + 0j}
    for element in reversed(circuit.post_elements):
        vec = apply_element(vec, _adjoint(element))
    kept = {
        cfg: amp
        for cfg, amp in vec.items()
        if all(mode in ("L", "R") for mode, _ in cfg)
    }
    if not kept:
        raise CircuitConfigError(
            "the post-block's success functional has no support on L/R input modes"
        )
    return state_to_ket(kept, circuit.n_photons)


def _mode_images(element: Element, modes: tuple[str, ...]) -> set[tuple[str, ...]]:
    """Conservative reachability step on mode configurations."""
    if isinstance(element, BeamSplitter):
        if modes in (element.in_a, element.in_b):
            return {element.out_a, element.out_b}
        return {modes}
    if isinstance(element, Pbs):
        i = element.photon - 1
        a, b = element.ports
        images = {modes}
        if modes[i] == a:
            images.add(modes[:i] + (b,) + modes[i + 1 :])
        elif modes[i] == b:
            images.add(modes[:i] + (a,) + modes[i + 1 :])
        return images
    return {modes}


def _reaches_success(
    start: tuple[str, ...], remaining: Sequence[Element], succ_modes: tuple[str, ...]
) -> bool:
    frontier = {start}
    for element in remaining:
        frontier = set().union(*(_mode_images(element, m) for m in frontier))
    return succ_modes in frontier


@dataclass(frozen=True)
class CalibrationResult:
    circuit: Circuit
    residual: float
    settings: dict[str, tuple[complex, complex]]


def _pol_block(state: OpticsState, modes: tuple[str, ...], n: int) -> np.ndarray:
    block = np.zeros(2**n, dtype=complex)
    for j, pols in enumerate(product(_POLS, repeat=n)):
        block[j] = state.get(tuple(zip(modes, pols)), 0j)
    return block


def calibrate_postselection(
    circuit: Circuit, target_post: Ket, threshold: float = 1e-10
) -> CalibrationResult:
    """Retune the adjustable splitters so the success port realizes the target.

    The success functional after the block is the success-port bra composed
    with the block unitary, so calibration is funneling: propagating the
    normalized target forward, each adjustable splitter must send zero
    amplitude into whichever of its output ports cannot reach the success
    configuration. The (t, r) achieving that is the smallest-singular-value
    direction of the two input polarization blocks; colinear blocks give an
    exact zero, anything else gets the least-squares best and shows up in
    the residual 1 - |<success|block|target>|. Raises the calibration error,
    carrying the best residual, if the threshold is not met.
    """
    circuit.element_photon_range_ok()
    if not any(isinstance(e, BeamSplitter) and e.adjustable for e in circuit.post_elements):
        raise InputError("circuit has no adjustable beam splitter to calibrate")
    succ = _success_config(circuit)
    succ_modes = tuple(m for m, _ in succ)
    n = circuit.n_photons
    norm = target_post.norm()
    if norm == 0.0:
        raise ZeroNormError("calibration target is the zero vector")
    state = ket_to_state(hilbert.normalize(target_post))

    elements = list(circuit.post_elements)
    new_elements: list[Element] = []
    settings: dict[str, tuple[complex, complex]] = {}
    for pos, element in enumerate(elements):
        if not (isinstance(element, BeamSplitter) and element.adjustable):
            state = apply_element(state, element)
            new_elements.append(element)
            continue
        remaining = elements[pos + 1 :]
        reach_a = _reaches_success(element.out_a, remaining, succ_modes)
        reach_b = _reaches_success(element.out_b, remaining, succ_modes)
        if reach_a and reach_b:
            raise CircuitConfigError(
                f"both output ports of {element.name!r} can reach the success port; "
                "calibration is ambiguous"
            )
        alpha = _pol_block(state, element.in_a, n)
        beta = _pol_block(state, element.in_b, n)
        columns = np.column_stack([alpha, beta])
        if not np.any(np.abs(columns) > 0):
            t, r = 1.0 + 0j, 0j
        else:
            x = np.linalg.svd(columns)[2][-1].conj()
            peak = int(np.argmax(np.abs(x)))
            x = x * (x[peak].conjugate() / abs(x[peak]))
            if reach_b or not reach_a:
                # dump through out_a: zero t*alpha - conj(r)*beta
                t, r = complex(x[0]), -complex(x[1]).conjugate()
            else:
                # dump through out_b: zero r*alpha + conj(t)*beta
                r, t = complex(x[0]), complex(x[1]).conjugate()
        tuned = replace(element, t=t, r=r)
        settings[element.name or f"bs@{pos}"] = (t, r)
        state = apply_element(state, tuned)
        new_elements.append(tuned)

    amp = state.get(succ, 0j)
    residual = 1.0 - abs(amp)
    result = CalibrationResult(
        circuit=replace(circuit, post_elements=tuple(new_elements)),
        residual=residual,
        settings=settings,
    )
    if residual > threshold:
        raise CalibrationError(
            f"calibration residual {residual} exceeds threshold {threshold}", residual
        )
    return result


# ---------------------------------------------------------------------------
# circuit file parsing


def _split_kv(parts: Sequence[str], line_no: int) -> tuple[dict[str, str], set[str]]:
    kv: dict[str, str] = {}
    flags: set[str] = set()
    for part in parts:
        if "=" in part:
            key, value = part.split("=", 1)
            if key in kv:
                raise CircuitParseError(f"duplicate key {key!r}", line_no)
            kv[key] = value
        else:
            flags.add(part)
    return kv, flags


def _need(kv: dict[str, str], key: str, line_no: int) -> str:
    if key not in kv:
        raise CircuitParseError(f"missing {key}=...", line_no)
    return kv[key]


def _modes_tuple(text: str, n: int, line_no: int) -> tuple[str, ...]:
    modes = tuple(m.strip() for m in text.split(","))
    if len(modes) != n or not all(modes):
        raise CircuitParseError(f"expected {n} comma-separated modes, got {text!r}", line_no)
    return modes


def parse_circuit(text: str) -> Circuit:
    n_photons: int | None = None
    source: SpdcSource | KetSource | None = None
    pre: list[Element] = []
    post: list[Element] = []
    seen_marker = False
    detectors: dict[tuple[int, str, str], str] = {}
    postselect_on: str | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0]
        if word == "photons":
            if n_photons is not None:
                raise CircuitParseError("duplicate photons line", line_no)
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise CircuitParseError("photons needs one positive integer", line_no)
            n_photons = int(parts[1])
            continue
        if n_photons is None:
            raise CircuitParseError("photons must be the first directive", line_no)

        if word == "source":
            if source is not None:
                raise CircuitParseError("duplicate source line", line_no)
            if len(parts) < 2:
                raise CircuitParseError("source needs a kind (spdc or ket)", line_no)
            kv, _ = _split_kv(parts[2:], line_no)
            if parts[1] == "spdc":
                if n_photons != 2:
                    raise CircuitParseError("spdc source requires photons 2", line_no)
                modes = _modes_tuple(_need(kv, "modes", line_no), 2, line_no)
                source = SpdcSource(modes)
            elif parts[1] == "ket":
                paths = _modes_tuple(_need(kv, "path", line_no), n_photons, line_no)
                pols = _modes_tuple(_need(kv, "pol", line_no), n_photons, line_no)
                if not all(p in _POLS for p in pols):
                    raise CircuitParseError("pol entries must be H or V", line_no)
                source = KetSource(paths, pols)
            else:
                raise CircuitParseError(f"unknown source kind {parts[1]!r}", line_no)
        elif word == "element":
            if len(parts) < 2:
                raise CircuitParseError("element needs a kind", line_no)
            kind = parts[1]
            kv, flags = _split_kv(parts[2:], line_no)
            try:
                if kind == "pbs":
                    ports = _modes_tuple(_need(kv, "ports", line_no), 2, line_no)
                    el: Element = pbs_action(int(_need(kv, "photon", line_no)), ports)
                elif kind == "hwp":
                    el = hwp_action(int(_need(kv, "photon", line_no)), _need(kv, "arm", line_no))
                elif kind == "hadamard":
                    el = hadamard_plate(int(_need(kv, "photon", line_no)), _need(kv, "arm", line_no))
                elif kind == "phase":
                    el = phase_shifter(
                        int(_need(kv, "photon", line_no)),
                        _need(kv, "arm", line_no),
                        parse_real(_need(kv, "shift", line_no)),
                    )
                elif kind == "mirror":
                    el = mirror(int(_need(kv, "photon", line_no)), _need(kv, "arm", line_no))
                elif kind == "bs":
                    in_a = _modes_tuple(_need(kv, "in_a", line_no), n_photons, line_no)
                    in_b = _modes_tuple(_need(kv, "in_b", line_no), n_photons, line_no)
                    out_a = _modes_tuple(kv["out_a"], n_photons, line_no) if "out_a" in kv else in_a
                    out_b = _modes_tuple(kv["out_b"], n_photons, line_no) if "out_b" in kv else in_b
                    el = beam_splitter(
                        in_a,
                        in_b,
                        parse_complex(_need(kv, "t", line_no)),
                        parse_complex(_need(kv, "r", line_no)),
                        out_a,
                        out_b,
                        name=kv.get("name", ""),
                        adjustable="adjustable" in flags,
                    )
                else:
                    raise CircuitParseError(f"unknown element kind {kind!r}", line_no)
            except InputError as exc:
                raise CircuitParseError(str(exc), line_no) from None
            except ValueError:
                raise CircuitParseError("photon index must be an integer", line_no) from None
            (post if seen_marker else pre).append(el)
        elif word == "postselection":
            if seen_marker:
                raise CircuitParseError("duplicate postselection marker", line_no)
            seen_marker = True
        elif word == "detector":
            if len(parts) < 2:
                raise CircuitParseError("detector needs a label", line_no)
            kv, _ = _split_kv(parts[2:], line_no)
            try:
                photon = int(_need(kv, "photon", line_no))
            except ValueError:
                raise CircuitParseError("photon index must be an integer", line_no) from None
            mode = _need(kv, "mode", line_no)
            pol = _need(kv, "pol", line_no)
            if pol not in _POLS:
                raise CircuitParseError("pol must be H or V", line_no)
            key = (photon, mode, pol)
            if key in detectors:
                raise CircuitParseError(
                    f"port photon={photon} mode={mode} pol={pol} already bound", line_no
                )
            detectors[key] = parts[1]
        elif word == "postselect-on":
            if len(parts) != 2:
                raise CircuitParseError("postselect-on needs one detector label", line_no)
            postselect_on = parts[1]
        else:
            raise CircuitParseError(f"unknown directive {word!r}", line_no)

    if n_photons is None:
        raise CircuitParseError("missing photons line", 1)
    if source is None:
        raise CircuitParseError("missing source line", 1)
    if postselect_on is None:
        raise CircuitParseError("missing postselect-on line", 1)
    if postselect_on not in detectors.values():
        raise CircuitParseError(
            f"postselect-on names {postselect_on!r} but no detector line binds it", 1
        )
    if not seen_marker:
        post, pre = pre, post  # no marker: everything is post-selection side
    circuit = Circuit(n_photons, source, tuple(pre), tuple(post), detectors, postselect_on)
    circuit.element_photon_range_ok()
    return circuit


def parse_circuit_file(path) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def builtin_circuit_path() -> str:
    """Filesystem path of the packaged two-photon interferometer description."""
    return str(resources.files("cheshire").joinpath("data/two_cat_device.circuit"))


def two_cat_device() -> Circuit:
    return parse_circuit_file(builtin_circuit_path())
