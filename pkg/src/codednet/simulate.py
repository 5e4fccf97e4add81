"""Seeded Monte Carlo simulation of noisy transmissions.

Randomness comes from numpy's counter-based Philox generator.  Every
consumer derives its own stream as Philox(SeedSequence(seed, spawn_key)),
so runs are bit-reproducible for a fixed seed on any platform and results
never depend on how work is split across workers: single traces use the
spawn key (trial,), while the bulk estimator hands each fixed-size block of
trials the spawn key (block,) and vectorizes inside the block.

Per edge traversal the draw layout is frozen: n uniforms deciding which
symbols err, then n offsets in [1, q) selecting the replacement value as
(symbol + offset) mod q, which is uniform over the q-1 other field values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codes import Word, hamming_distance
from .covering import TransmissionPlan
from .labeling import Labeling, route
from .network import CodedNetwork, Path

TRIAL_BLOCK = 1 << 16
_BATCH_DECODE_CODEBOOK_CAP = 4096


@dataclass(frozen=True)
class ChannelModel:
    """Symbol-replacement channel over F_q with a fixed master seed."""

    q: int
    seed: int

    def stream(self, *key: int) -> np.random.Generator:
        return np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=self.seed, spawn_key=key))
        )

    def trial_stream(self, trial: int) -> np.random.Generator:
        return self.stream(trial)


@dataclass(frozen=True)
class TransmissionTrace:
    """One fully recorded transmission, replayable from (seed, inputs)."""

    sent: Word
    received: tuple[Word, ...]  # word after each traversed edge
    corrections: tuple[tuple[str, int], ...]  # (vertex, symbols corrected)
    decoded_message: Word
    final_hamming: int  # drift of the word arriving at the receiver
    success: bool  # decoded message equals the original


@dataclass(frozen=True)
class SimStats:
    trials: int
    mean_hamming: float
    std_error: float
    decode_success_rate: float


def transmit_edge(
    word: Sequence[int], p: float, channel: ChannelModel, rng: np.random.Generator
) -> Word:
    """Send a word across one edge: each symbol independently errs with
    probability p and is then replaced by a uniform other field value."""
    w = np.asarray(word, dtype=np.int64)
    u = rng.random(w.size)
    offsets = rng.integers(1, channel.q, size=w.size)
    out = np.where(u < float(p), (w + offsets) % channel.q, w)
    return tuple(int(s) for s in out)


def _check_channel(csn: CodedNetwork, channel: ChannelModel) -> None:
    if channel.q != csn.code.q:
        raise ValueError(f"channel field order {channel.q} != code field order {csn.code.q}")


def simulate_path(
    csn: CodedNetwork,
    path: Path,
    message: Sequence[int],
    channel: ChannelModel,
    trial: int = 0,
) -> TransmissionTrace:
    """Encode at the source, traverse the path with no intermediate
    correction, and let the receiver decode once."""
    _check_channel(csn, channel)
    path.validate(csn.graph)
    code = csn.code
    msg = code.field.check_word(message, code.k)
    sent = code.encode(msg)
    rng = channel.trial_stream(trial)
    word = sent
    received = []
    for a, b in zip(path.vertices, path.vertices[1:]):
        word = transmit_edge(word, float(csn.p(a, b)), channel, rng)
        received.append(word)
    final_hamming = hamming_distance(sent, word)
    dec = code.decode_nearest(word)
    decoded = code.message_of(dec.codeword)
    return TransmissionTrace(
        sent=sent,
        received=tuple(received),
        corrections=((path.vertices[-1], dec.corrected),),
        decoded_message=decoded,
        final_hamming=final_hamming,
        success=decoded == msg,
    )


def simulate_protocol(
    csn: CodedNetwork,
    plan: TransmissionPlan,
    labelings: Sequence[Labeling | None],
    message: Sequence[int],
    channel: ChannelModel,
    trial: int = 0,
) -> TransmissionTrace:
    """Relay a message across covering members: each leg follows its
    member's label routing, and every handoff vertex plus the receiver runs
    one error-correction pass."""
    _check_channel(csn, channel)
    code = csn.code
    msg = code.field.check_word(message, code.k)
    sent = code.encode(msg)
    rng = channel.trial_stream(trial)
    word = sent
    received = []
    corrections = []
    final_hamming = 0
    legs = plan.leg_endpoints()
    for leg_no, (member, start, stop) in enumerate(legs):
        lab = labelings[member]
        if lab is None:
            raise ValueError(f"member {member} carries no labeling")
        leg_path = route(lab, start, stop)
        for a, b in zip(leg_path.vertices, leg_path.vertices[1:]):
            word = transmit_edge(word, float(csn.p(a, b)), channel, rng)
            received.append(word)
        if leg_no == len(legs) - 1:
            final_hamming = hamming_distance(sent, word)
        dec = code.decode_nearest(word)
        corrections.append((stop, dec.corrected))
        word = dec.codeword
    decoded = code.message_of(word)
    return TransmissionTrace(
        sent=sent,
        received=tuple(received),
        corrections=tuple(corrections),
        decoded_message=decoded,
        final_hamming=final_hamming,
        success=decoded == msg,
    )


def _finalize(trials: int, total: float, total_sq: float, successes: int) -> SimStats:
    mean = total / trials
    if trials > 1:
        variance = max(0.0, (total_sq - trials * mean * mean) / (trials - 1))
    else:
        variance = 0.0
    return SimStats(
        trials=trials,
        mean_hamming=mean,
        std_error=math.sqrt(variance / trials),
        decode_success_rate=successes / trials,
    )


def _success_counts(code, words: np.ndarray) -> int:
    """Rows whose nearest codeword is the zero word (ties favor zero, the
    lexicographic minimum)."""
    weights = np.count_nonzero(words, axis=1)
    best_other = np.full(words.shape[0], code.n + 1, dtype=np.int64)
    first = True
    for chunk in code.codeword_chunks():
        cw = chunk[1:] if first else chunk  # chunk 0 starts with the zero word
        first = False
        if not len(cw):
            continue
        for lo in range(0, words.shape[0], 4096):
            rows = words[lo : lo + 4096]
            dist = (rows[:, None, :] != cw[None, :, :]).sum(axis=2).min(axis=1)
            np.minimum(best_other[lo : lo + 4096], dist, out=best_other[lo : lo + 4096])
    return int(np.count_nonzero(weights <= best_other))


def estimate_expected_hamming(
    csn: CodedNetwork, path: Path, trials: int, seed: int
) -> SimStats:
    """Monte Carlo estimate of the expected drift along a path.

    Transmits the zero codeword (drift and decode success are
    message-independent under the symmetric channel).  Deterministic for a
    fixed (seed, trials); success-rate estimation needs a codebook of at
    most 4096 words.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    path.validate(csn.graph)
    code = csn.code
    if code.num_codewords > _BATCH_DECODE_CODEBOOK_CAP:
        raise ValueError(
            f"codebook of {code.num_codewords} words is too large for batch decoding"
        )
    n, q = code.n, code.q
    ps = [float(csn.p(a, b)) for a, b in zip(path.vertices, path.vertices[1:])]
    total = 0.0
    total_sq = 0.0
    successes = 0
    for block in range((trials + TRIAL_BLOCK - 1) // TRIAL_BLOCK):
        size = min(TRIAL_BLOCK, trials - block * TRIAL_BLOCK)
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))
        )
        words = np.zeros((size, n), dtype=np.int64)
        for p in ps:
            flips = rng.random((size, n)) < p
            offsets = rng.integers(1, q, size=(size, n))
            words = np.where(flips, (words + offsets) % q, words)
        drift = np.count_nonzero(words, axis=1)
        total += float(drift.sum())
        total_sq += float((drift.astype(np.float64) ** 2).sum())
        successes += _success_counts(code, words)
    return _finalize(trials, total, total_sq, successes)


def protocol_stats(
    csn: CodedNetwork,
    plan: TransmissionPlan,
    labelings: Sequence[Labeling | None],
    message: Sequence[int],
    trials: int,
    seed: int,
) -> SimStats:
    """Trial-by-trial protocol statistics; trial i uses the stream derived
    from (seed, i), so any subset of trials replays identically."""
    if trials < 1:
        raise ValueError("need at least one trial")
    channel = ChannelModel(q=csn.code.q, seed=seed)
    total = 0.0
    total_sq = 0.0
    successes = 0
    for trial in range(trials):
        trace = simulate_protocol(csn, plan, labelings, message, channel, trial=trial)
        total += trace.final_hamming
        total_sq += trace.final_hamming ** 2
        successes += trace.success
    return _finalize(trials, total, total_sq, successes)


def path_stats(
    csn: CodedNetwork,
    path: Path,
    message: Sequence[int],
    trials: int,
    seed: int,
) -> SimStats:
    """Trial-by-trial single-path statistics with full decoding; the
    per-trial counterpart of estimate_expected_hamming for paired
    comparisons against protocol_stats."""
    if trials < 1:
        raise ValueError("need at least one trial")
    channel = ChannelModel(q=csn.code.q, seed=seed)
    total = 0.0
    total_sq = 0.0
    successes = 0
    for trial in range(trials):
        trace = simulate_path(csn, path, message, channel, trial=trial)
        total += trace.final_hamming
        total_sq += trace.final_hamming ** 2
        successes += trace.success
    return _finalize(trials, total, total_sq, successes)
