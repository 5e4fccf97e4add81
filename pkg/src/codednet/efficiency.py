"""Expected Hamming distortion along transmission paths.

A symbol pushed through one edge is corrupted with that edge's probability
p, and a corrupted symbol is resampled uniformly from the q-1 other field
values.  Tracking the per-symbol probability A_j of disagreeing with the
original after j edges gives

    A_j = A_{j-1} * ((1-p) + p*(q-2)/(q-1)) + B_{j-1} * p,    B_j = 1 - A_j

with A_0 = 0, which telescopes to the closed form

    A_l = (q-1)/q * (1 - (1 - p*q/(q-1))**l).

For q = 2 this is the classic (1 - (1-2p)**l) / 2.  Symbols are independent,
so a length-n codeword drifts by n * A_l in expectation.

All functions run in exact rational arithmetic when every probability is a
Fraction (or int), and in floating point otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .codes import is_prime
from .network import CodedNetwork, Path, Prob, shortest_path


class EfficiencyClass(enum.Enum):
    """Path and network classes; ordered from best to worst."""

    EFFICIENT = 0
    SEMI_EFFICIENT = 1
    INEFFICIENT = 2

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


def _norm(p: Prob) -> Prob:
    """Integers become Fractions so exact inputs stay exact end to end."""
    return Fraction(p) if isinstance(p, int) else p


def _one(p: Prob):
    return Fraction(1) if isinstance(p, Fraction) else 1.0


def flip_prob_binary(p: Prob, l: int) -> Prob:
    """Probability that one bit disagrees after l independent flip channels.

    Computed as the odd-flip-count binomial sum
    sum_k C(l, 2k+1) p^(2k+1) (1-p)^(l-2k-1); equals (1-(1-2p)^l)/2.
    """
    if l < 1:
        raise ValueError("path length must be >= 1")
    p = _norm(p)
    one = _one(p)
    total = one - one  # typed zero
    for flips in range(1, l + 1, 2):
        total += comb(l, flips) * p ** flips * (one - p) ** (l - flips)
    return total


def flip_prob_binary_closed(p: Prob, l: int) -> Prob:
    """Closed form of flip_prob_binary; kept separate as a cross-check."""
    p = _norm(p)
    one = _one(p)
    return (one - (one - 2 * p) ** l) / 2


def _stay_corrupted(p: Prob, q: int) -> Prob:
    # chance a wrong symbol is still wrong after one edge
    one = _one(p)
    if isinstance(p, Fraction):
        return (one - p) + p * Fraction(q - 2, q - 1)
    return (one - p) + p * (q - 2) / (q - 1)


def flip_prob_qary(p: Prob, q: int, l: int, *, nonconserving: bool = False) -> Prob:
    """Per-symbol disagreement probability over F_q after l edges.

    Runs the two-state recurrence from the module docstring.  With
    nonconserving=True the survival term for an already-corrupted symbol on
    an error-free hop is dropped; that variant violates A+B=1 and exists
    only for side-by-side comparison.
    """
    if not is_prime(q):
        raise ValueError(f"field order must be prime, got {q}")
    if l < 1:
        raise ValueError("path length must be >= 1")
    p = _norm(p)
    one = _one(p)
    ratio = Fraction(1, q - 1) if isinstance(p, Fraction) else 1.0 / (q - 1)
    a, b = p * one, one - p
    for _ in range(l - 1):
        if nonconserving:
            a, b = a * p * (q - 2) * ratio + b * p, a * p * ratio + b * (one - p)
        else:
            a = a * _stay_corrupted(p, q) + b * p
            b = one - a
    return a


def flip_prob_qary_closed(p: Prob, q: int, l: int) -> Prob:
    """Closed form (q-1)/q * (1 - (1 - p*q/(q-1))^l); exact for Fractions."""
    p = _norm(p)
    one = _one(p)
    if isinstance(p, Fraction):
        return Fraction(q - 1, q) * (one - (one - p * Fraction(q, q - 1)) ** l)
    return (q - 1) / q * (one - (one - p * q / (q - 1)) ** l)


def flip_state_sequence(ps: Sequence[Prob], q: int) -> list[tuple[Prob, Prob]]:
    """(A_j, B_j) after each edge, stepping edge-by-edge with that edge's p."""
    if not is_prime(q):
        raise ValueError(f"field order must be prime, got {q}")
    ps = [_norm(p) for p in ps]
    exact = all(isinstance(p, Fraction) for p in ps)
    one = Fraction(1) if exact else 1.0
    a = one - one
    out: list[tuple[Prob, Prob]] = []
    for p in ps:
        p = p if exact else float(p)
        a = a * _stay_corrupted(p, q) + (one - a) * p
        out.append((a, one - a))
    return out


def expected_hamming(csn: CodedNetwork, path: Path) -> Prob:
    """Expected Hamming distance between the sent codeword and the word
    arriving at the end of the path; 0 for a single-vertex path."""
    path.validate(csn.graph)
    if path.length == 0:
        return Fraction(0)
    ps = [csn.p(a, b) for a, b in zip(path.vertices, path.vertices[1:])]
    a_l = flip_state_sequence(ps, csn.code.q)[-1][0]
    return csn.code.n * a_l


@dataclass(frozen=True)
class PathReport:
    path: Path
    expected_hamming: Prob
    classification: EfficiencyClass
    correct_capacity: int
    detect_capacity: int


def classify_expected(expected: Prob, code) -> EfficiencyClass:
    if expected <= code.correct_capacity:
        return EfficiencyClass.EFFICIENT
    if expected <= code.detect_capacity:
        return EfficiencyClass.SEMI_EFFICIENT
    return EfficiencyClass.INEFFICIENT


def classify_path(csn: CodedNetwork, path: Path) -> PathReport:
    """Apply the capacity thresholds to the path's expected distortion."""
    e = expected_hamming(csn, path)
    return PathReport(
        path=path,
        expected_hamming=e,
        classification=classify_expected(e, csn.code),
        correct_capacity=csn.code.correct_capacity,
        detect_capacity=csn.code.detect_capacity,
    )


def expected_at_length(csn: CodedNetwork, l: int) -> Prob:
    """n * A_l under the constant edge probability; requires constant f."""
    if csn.constant_p is None:
        raise ValueError("network does not have a constant edge probability")
    if l == 0:
        return Fraction(0)
    return csn.code.n * flip_prob_qary(csn.constant_p, csn.code.q, l)


@dataclass(frozen=True)
class LengthReport:
    length: int
    per_symbol: Prob
    expected: Prob
    classification: EfficiencyClass


@dataclass(frozen=True)
class NetworkReport:
    classification: EfficiencyClass
    critical_value: int
    per_length: tuple[LengthReport, ...] | None  # populated for constant f
    worst_pair: tuple[str, str] | None  # populated for varying f


def network_report(csn: CodedNetwork) -> NetworkReport:
    if not csn.graph.connected:
        raise ValueError("network classification needs a connected graph")
    crit = csn.critical_value()
    code = csn.code
    if csn.constant_p is not None:
        # every length 1..crit is realized by some pair's shortest path
        rows = []
        worst = EfficiencyClass.EFFICIENT
        for l in range(1, crit + 1):
            a = flip_prob_qary(csn.constant_p, code.q, l)
            e = code.n * a
            cls = classify_expected(e, code)
            worst = max(worst, cls, key=lambda c: c.value)
            rows.append(LengthReport(l, a, e, cls))
        return NetworkReport(worst, crit, tuple(rows), None)
    worst = EfficiencyClass.EFFICIENT
    worst_pair = None
    verts = csn.graph.vertices
    for i, a in enumerate(verts):
        for b in verts[i + 1 :]:
            cls = classify_path(csn, shortest_path(csn.graph, a, b)).classification
            if cls.value > worst.value:
                worst, worst_pair = cls, (a, b)
    return NetworkReport(worst, crit, None, worst_pair)


def classify_network(csn: CodedNetwork) -> EfficiencyClass:
    """Worst classification over the shortest paths of all vertex pairs."""
    return network_report(csn).classification


def efficient_up_to(csn: CodedNetwork, max_length: int) -> bool:
    """True when every path length 1..max_length classifies efficient under
    the constant edge probability."""
    if max_length <= 0:
        return True
    if csn.constant_p is None:
        raise ValueError("length criterion needs a constant edge probability")
    code = csn.code
    t = code.correct_capacity
    return all(
        code.n * flip_prob_qary(csn.constant_p, code.q, l) <= t
        for l in range(1, max_length + 1)
    )
