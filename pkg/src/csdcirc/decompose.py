"""Recursive CSD of a 2**n unitary and its mapping onto gates.

The recursion turns U into the ordered product

    U = (prod_{p=1..2**n-1} U_p . A_p) . U_{2**n}

where every A_p rotates index pairs differing in qubit i(p) (one angle per
control pattern) and every U_p is a diagonal of unit phases.  The complex
pipeline turns each diagonal into a uniformly controlled R_z by splitting
paired phases into half-sums (absorbed rightwards) and half-differences (the
gate angles); the real pipeline conjugates each A_p with the running +-1
diagonal instead, which only flips angle signs, and factors the final sign
diagonal into Pi gates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csd import split_stack
from .errors import NotRealDecompositionError, OutOfRangeError
from .gates import Axis, Circuit, GlobalPhase, PiGate, UniformRotation, pair_indices
from .matrices import Tolerances, UnitaryOperator, qubit_count


@dataclass(frozen=True)
class LeafDiagonal:
    """Phases (radians) of a diagonal factor; entries are exp(i*phase)."""

    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "phases", p)


@dataclass(frozen=True)
class SignDiagonal:
    """A +-1 diagonal, stored as the signs themselves."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=np.float64)
        if not np.all(np.abs(s) == 1.0):
            raise ValueError("sign diagonal entries must be exactly +-1")
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)


@dataclass(frozen=True)
class SequenceFactor:
    """One position p: the diagonal U_p followed by the rotation block A_p."""

    level: int
    theta: np.ndarray
    diag_phases: np.ndarray


@dataclass(frozen=True)
class DecompositionSequence:
    n: int
    factors: tuple[SequenceFactor, ...]
    leaf_diagonal: LeafDiagonal
    is_real: bool


def level_of_position(p: int, n: int) -> int:
    """Recursion level owning position p: n minus p's trailing zero bits."""
    if not 1 <= p <= (1 << n) - 1:
        raise OutOfRangeError(f"position {p} outside 1..{(1 << n) - 1}")
    return n - ((p & -p).bit_length() - 1)


def recursive_csd(u_op: UnitaryOperator, tol: Tolerances = Tolerances()) -> DecompositionSequence:
    """Fully decompose a certified power-of-two unitary."""
    n = qubit_count(u_op.dim)
    work = u_op.as_real() if u_op.is_real else u_op.as_complex().copy()
    if n == 0:
        return DecompositionSequence(
            n=0,
            factors=(),
            leaf_diagonal=LeafDiagonal(_phases_of(work.reshape(1))),
            is_real=u_op.is_real,
        )
    items, trailing = _recurse(work[None, :, :], 1, tol)
    factors = tuple(
        SequenceFactor(level=level, theta=theta, diag_phases=_phases_of(diag))
        for diag, level, theta in items
    )
    return DecompositionSequence(
        n=n,
        factors=factors,
        leaf_diagonal=LeafDiagonal(_phases_of(trailing)),
        is_real=u_op.is_real,
    )


def _recurse(blocks: np.ndarray, level: int, tol: Tolerances):
    """In-order expansion of a stack of diagonal blocks.

    Returns (items, trailing) with items = [(diag, level, theta), ...]; each
    diagonal precedes its rotation factor, and ``trailing`` is the rightmost
    leaf diagonal of this subtree.
    """
    if blocks.shape[1] == 1:
        return [], blocks[:, 0, 0].copy()
    lefts, theta, rights = split_stack(blocks, tol)
    left_items, left_trailing = _recurse(lefts, level + 1, tol)
    right_items, right_trailing = _recurse(rights, level + 1, tol)
    return [*left_items, (left_trailing, level, theta), *right_items], right_trailing


def _phases_of(diag: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(diag):
        return np.angle(diag)
    return np.where(diag > 0, 0.0, np.pi)


def _wrap_angle(a):
    """Map angles into (-pi, pi]; gate matrices are 2*pi-periodic in them.

    Values already in range pass through bit-exactly.
    """
    a = np.asarray(a, dtype=np.float64)
    out_of_range = (a > np.pi) | (a <= -np.pi)
    if not out_of_range.any():
        return a
    w = np.mod(a + np.pi, 2 * np.pi) - np.pi
    w = np.where(w == -np.pi, np.pi, w)
    return np.where(out_of_range, w, a)


def _other_qubits(target: int, n: int) -> tuple[int, ...]:
    return tuple(q for q in range(1, n + 1) if q != target)


def compile_complex(seq: DecompositionSequence) -> Circuit:
    """Map a decomposition to the general pipeline: R_y/R_z pairs + diagonal cascade."""
    n = seq.n
    if n == 0:
        return Circuit(0, (GlobalPhase(float(_wrap_angle(seq.leaf_diagonal.phases[0]))),))
    dim = 1 << n
    carried = np.zeros(dim)  # phases of the diagonal pushed right so far
    pairs_in_matrix_order = []
    for factor in seq.factors:
        j0, j1 = pair_indices(n, factor.level)
        alpha = factor.diag_phases - carried
        a0, a1 = alpha[j0], alpha[j1]
        controls = _other_qubits(factor.level, n)
        pairs_in_matrix_order.append(
            (
                UniformRotation(Axis.Y, factor.level, controls, factor.theta),
                UniformRotation(Axis.Z, factor.level, controls, _wrap_angle((a0 - a1) / 2)),
            )
        )
        pair_phase = -(a0 + a1) / 2
        carried = np.empty(dim)
        carried[j0] = pair_phase
        carried[j1] = pair_phase
    global_phase, cascade = factor_phase_diagonal(seq.leaf_diagonal.phases - carried)
    gates = [GlobalPhase(global_phase), *cascade]
    for gate_a, gate_b in reversed(pairs_in_matrix_order):
        gates.append(gate_a)
        gates.append(gate_b)
    return Circuit(n, tuple(gates))


def compile_real(seq: DecompositionSequence, tol: Tolerances = Tolerances()) -> Circuit:
    """Map a real decomposition to R_y gates with sign flips + Pi-gate cascade."""
    n = seq.n
    all_phases = [f.diag_phases for f in seq.factors] + [seq.leaf_diagonal.phases]
    worst = max(float(np.abs(np.sin(p)).max()) for p in all_phases)
    if worst > tol.real:
        raise NotRealDecompositionError(
            f"diagonal phase off {{0, pi}} by |sin| = {worst:.3e} (> {tol.real:.3e})"
        )
    if n == 0:
        negative = np.cos(seq.leaf_diagonal.phases[0]) < 0
        return Circuit(0, (GlobalPhase(np.pi),) if negative else ())
    signs = np.ones(1 << n)
    rotations_in_matrix_order = []
    for factor in seq.factors:
        signs = signs * _signs_from_phases(factor.diag_phases)
        j0, j1 = pair_indices(n, factor.level)
        angles = np.where(signs[j0] * signs[j1] < 0, -factor.theta, factor.theta)
        rotations_in_matrix_order.append(
            UniformRotation(Axis.Y, factor.level, _other_qubits(factor.level, n), angles)
        )
    signs = signs * _signs_from_phases(seq.leaf_diagonal.phases)
    global_sign, pi_gates = factor_sign_diagonal(SignDiagonal(signs), n)
    gates: list = [GlobalPhase(np.pi)] if global_sign < 0 else []
    gates.extend(pi_gates)
    gates.extend(reversed(rotations_in_matrix_order))
    return Circuit(n, tuple(gates))


def _signs_from_phases(phases: np.ndarray) -> np.ndarray:
    return np.where(np.cos(phases) > 0, 1.0, -1.0)


def factor_sign_diagonal(d: SignDiagonal, n: int) -> tuple[int, list[PiGate]]:
    """Factor a +-1 diagonal into a global sign and one Pi gate per target.

    Greedy by target: the flag for pattern c is set when the running residual
    is -1 at index (c, 1, 0...0); each set flag flips every index under it.
    The triangular flip structure drives the residual to all +1.
    """
    signs = d.signs
    if signs.size != 1 << n:
        raise ValueError(f"sign diagonal of length {signs.size} does not match n={n}")
    global_sign = int(signs[0])
    residual = signs * global_sign
    pi_gates = []
    for m in range(1, n + 1):
        grouped = residual.reshape(1 << (m - 1), 2, -1)
        flags = grouped[:, 1, 0] < 0
        grouped[:, 1, :] *= np.where(flags, -1.0, 1.0)[:, None]
        pi_gates.append(PiGate(target=m, controls=tuple(range(1, m)), flags=flags))
    return global_sign, pi_gates


def factor_phase_diagonal(phases) -> tuple[float, list[UniformRotation]]:
    """Factor diag(exp(i*phases)) into a global phase and an R_z cascade.

    Pairs over the last qubit split into half-differences (that gate's
    angles) and half-sums (the next, coarser diagonal); gates are returned
    in emission order, target 1 first.
    """
    a = np.asarray(phases, dtype=np.float64).copy()
    n = qubit_count(a.size)
    gates = []
    for m in range(n, 0, -1):
        pairs = a.reshape(-1, 2)
        gates.append(
            UniformRotation(
                Axis.Z,
                target=m,
                controls=tuple(range(1, m)),
                angles=_wrap_angle((pairs[:, 0] - pairs[:, 1]) / 2),
            )
        )
        a = pairs.mean(axis=1)
    gates.reverse()
    return float(_wrap_angle(a[0])), gates
