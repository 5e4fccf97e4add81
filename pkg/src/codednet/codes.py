"""Linear block codes over prime fields.

A code is held as an n-by-k generator matrix M over F_q; a message m of
length k encodes to the codeword M m of length n.  The (n-k)-by-n parity
check matrix N satisfies N M = 0, so a received word w is a codeword
exactly when N w = 0.  Decoding is nearest-codeword: a syndrome table
covers every error pattern within the correction capacity, and anything
beyond that falls back to an exhaustive search over the codebook.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

Word = tuple[int, ...]

# Exhaustive enumeration bound: codes with more than 2^24 codewords are
# rejected for distance computation and exhaustive decoding.
ENUMERATION_LIMIT = 2 ** 24
_CHUNK = 1 << 14
_SYNDROME_TABLE_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The finite field F_q for prime q; elements are ints in [0, q-1]."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, int) or not is_prime(q):
            raise ValueError(f"field order must be prime, got {q!r}")
        self.q = q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        """Multiplicative inverse via Fermat's little theorem."""
        if a % self.q == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return pow(a % self.q, self.q - 2, self.q)

    def elements(self) -> range:
        return range(self.q)

    def check_word(self, symbols: Sequence[int], length: int | None = None) -> Word:
        """Validate and canonicalize a word; returns it as a tuple."""
        w = tuple(int(s) for s in symbols)
        if length is not None and len(w) != length:
            raise ValueError(f"expected word of length {length}, got {len(w)}")
        for s in w:
            if not 0 <= s < self.q:
                raise ValueError(f"symbol {s} outside field of order {self.q}")
        return w

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where a and b differ; lengths must match."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def weight(a: Sequence[int]) -> int:
    """Hamming weight: distance from the zero word."""
    return sum(1 for x in a if x != 0)


# ---------------------------------------------------------------------------
# Exact linear algebra over F_q


def _rref(mat: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q; returns (rref, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % q
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i, c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[[r, pivot_row]] = m[[pivot_row, r]]
        m[r] = (m[r] * pow(int(m[r, c]), q - 2, q)) % q
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % q
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def _rank(mat: np.ndarray, q: int) -> int:
    return len(_rref(mat, q)[1])


def _nullspace(mat: np.ndarray, q: int) -> np.ndarray:
    """Rows form a basis of {x : mat @ x = 0 (mod q)}."""
    rref, pivots = _rref(mat, q)
    cols = mat.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for row, fc in enumerate(free):
        basis[row, fc] = 1
        for prow, pc in enumerate(pivots):
            basis[row, pc] = (-int(rref[prow, fc])) % q
    return basis


def _inverse(mat: np.ndarray, q: int) -> np.ndarray:
    """Inverse of a square matrix over F_q."""
    k = mat.shape[0]
    aug = np.concatenate([np.array(mat, dtype=np.int64) % q, np.eye(k, dtype=np.int64)], axis=1)
    rref, pivots = _rref(aug, q)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular over the field")
    return rref[:, k:]


# ---------------------------------------------------------------------------
# Linear codes


@dataclass(frozen=True)
class DecodeResult:
    """Nearest-codeword decoding outcome.

    corrected is the Hamming distance between the received word and the
    returned codeword.  ambiguous is set when the exhaustive fallback found
    more than one codeword at that distance (the lexicographically smallest
    one is returned).
    """

    codeword: Word
    corrected: int
    ambiguous: bool = False


class LinearCode:
    """A q-ary [n, k, d] linear code given by its generator matrix.

    The generator is n-by-k (one row per output symbol) and must have rank
    k.  The parity matrix is derived by Gaussian elimination when not
    supplied.  All instances are immutable after construction; the distance,
    syndrome table and codebook caches are filled on first use and shared
    by every query afterwards.
    """

    def __init__(
        self,
        field: PrimeField,
        generator,
        parity=None,
        min_distance: int | None = None,
    ):
        self.field = field
        q = field.q
        G = np.array(generator, dtype=np.int64) % q
        if G.ndim != 2:
            raise ValueError("generator must be a 2-D matrix")
        n, k = G.shape
        if not 1 <= k <= n:
            raise ValueError(f"generator must be n-by-k with 1 <= k <= n, got {n}x{k}")
        if _rank(G.T, q) != k:
            raise ValueError("generator matrix is rank deficient")
        self.n = n
        self.k = k
        self._G = G
        self._G.setflags(write=False)
        if parity is not None:
            N = np.array(parity, dtype=np.int64) % q
            if N.shape != (n - k, n):
                raise ValueError(f"parity matrix must be {(n - k)}x{n}, got {N.shape}")
            if _rank(N, q) != n - k:
                raise ValueError("parity matrix is rank deficient")
            if np.any((N @ G) % q):
                raise ValueError("parity x generator is not zero")
            self._N = N
        else:
            self._N = _nullspace(G.T, q)
        self._N.setflags(write=False)
        self._d = None if min_distance is None else int(min_distance)
        self._syndrome_table: dict[Word, np.ndarray] | None = None
        self._decode_rows: tuple[np.ndarray, np.ndarray] | None = None

    # -- basic parameters

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def generator(self) -> np.ndarray:
        return self._G

    @property
    def parity(self) -> np.ndarray:
        return self._N

    @property
    def num_codewords(self) -> int:
        return self.q ** self.k

    @property
    def min_distance(self) -> int:
        """Minimum weight over nonzero codewords (computed once, cached)."""
        if self._d is None:
            self._d = self._compute_min_distance()
        return self._d

    @property
    def detect_capacity(self) -> int:
        return self.min_distance - 1

    @property
    def correct_capacity(self) -> int:
        return (self.min_distance - 1) // 2

    def __repr__(self) -> str:
        d = str(self._d) if self._d is not None else "?"
        return f"LinearCode([{self.n},{self.k},{d}]_{self.q})"

    # -- encoding and syndromes

    def encode(self, message: Sequence[int]) -> Word:
        """Encode a length-k message into a length-n codeword."""
        m = self.field.check_word(message, self.k)
        return tuple(int(s) for s in (self._G @ np.array(m, dtype=np.int64)) % self.q)

    def syndrome(self, word: Sequence[int]) -> Word:
        """Parity-check image of a word; zero exactly for codewords."""
        w = self.field.check_word(word, self.n)
        return tuple(int(s) for s in (self._N @ np.array(w, dtype=np.int64)) % self.q)

    def is_codeword(self, word: Sequence[int]) -> bool:
        return not any(self.syndrome(word))

    def message_of(self, codeword: Sequence[int]) -> Word:
        """Invert the encoding map; raises if the word is not a codeword."""
        c = self.field.check_word(codeword, self.n)
        if not self.is_codeword(c):
            raise ValueError("word is not a codeword")
        rows, inv = self._decoder_rows()
        sub = np.array([c[i] for i in rows], dtype=np.int64)
        return tuple(int(s) for s in (inv @ sub) % self.q)

    def _decoder_rows(self) -> tuple[np.ndarray, np.ndarray]:
        if self._decode_rows is None:
            _, pivots = _rref(self._G.T, self.q)
            rows = np.array(pivots, dtype=np.int64)
            inv = _inverse(self._G[rows, :], self.q)
            self._decode_rows = (rows, inv)
        return self._decode_rows

    # -- enumeration

    def _message_chunk(self, start: int, count: int) -> np.ndarray:
        """Messages with indices start..start+count-1 in base-q order."""
        idx = np.arange(start, start + count, dtype=np.int64)
        out = np.empty((count, self.k), dtype=np.int64)
        base = 1
        for j in range(self.k - 1, -1, -1):
            out[:, j] = (idx // base) % self.q
            base *= self.q
        return out

    def codeword_chunks(self) -> Iterator[np.ndarray]:
        """All q^k codewords in message order, in fixed-size batches."""
        total = self.num_codewords
        if total > ENUMERATION_LIMIT:
            raise ValueError(
                f"code has {total} codewords, beyond the enumeration limit {ENUMERATION_LIMIT}"
            )
        start = 0
        while start < total:
            count = min(_CHUNK, total - start)
            msgs = self._message_chunk(start, count)
            yield (msgs @ self._G.T) % self.q
            start += count

    def codewords(self) -> Iterator[Word]:
        for chunk in self.codeword_chunks():
            for row in chunk:
                yield tuple(int(s) for s in row)

    def _compute_min_distance(self) -> int:
        best = self.n + 1
        first = True
        for chunk in self.codeword_chunks():
            w = np.count_nonzero(chunk, axis=1)
            if first:
                w = w[1:]  # drop the zero codeword
                first = False
            if w.size:
                best = min(best, int(w.min()))
            if best == 1:
                break
        return best

    # -- decoding

    def _table(self) -> dict[Word, np.ndarray]:
        """Syndrome -> error pattern, for all patterns within capacity.

        Built weight-ascending so each syndrome keeps its lightest pattern;
        construction stops early at the table size cap (the exhaustive
        fallback then covers the remainder).
        """
        if self._syndrome_table is None:
            table: dict[Word, np.ndarray] = {}
            t = self.correct_capacity
            nonzero = list(range(1, self.q))
            done = False
            for w in range(1, t + 1):
                for positions in itertools.combinations(range(self.n), w):
                    for values in itertools.product(nonzero, repeat=w):
                        err = np.zeros(self.n, dtype=np.int64)
                        for pos, val in zip(positions, values):
                            err[pos] = val
                        syn = tuple(int(s) for s in (self._N @ err) % self.q)
                        table.setdefault(syn, err)
                        if len(table) >= _SYNDROME_TABLE_LIMIT:
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            self._syndrome_table = table
        return self._syndrome_table

    def decode_nearest(self, word: Sequence[int]) -> DecodeResult:
        """Return a codeword at minimum Hamming distance from the word.

        Errors within the correction capacity are resolved by syndrome
        lookup; other syndromes trigger an exhaustive nearest-codeword
        search with a deterministic lexicographic tie-break.
        """
        w = self.field.check_word(word, self.n)
        syn = self.syndrome(w)
        if not any(syn):
            return DecodeResult(w, 0)
        err = self._table().get(syn)
        if err is not None:
            cw = tuple(int(s) for s in (np.array(w, dtype=np.int64) - err) % self.q)
            return DecodeResult(cw, int(np.count_nonzero(err)))
        return self._decode_exhaustive(w)

    def _decode_exhaustive(self, w: Word) -> DecodeResult:
        arr = np.array(w, dtype=np.int64)
        best_dist = self.n + 1
        best_cw: Word | None = None
        ties = 0
        for chunk in self.codeword_chunks():
            dist = np.count_nonzero(chunk != arr, axis=1)
            m = int(dist.min())
            if m > best_dist:
                continue
            rows = [tuple(int(s) for s in chunk[i]) for i in np.nonzero(dist == m)[0]]
            if m < best_dist:
                best_dist, best_cw, ties = m, min(rows), len(rows)
            else:
                ties += len(rows)
                best_cw = min(best_cw, min(rows))
        assert best_cw is not None
        return DecodeResult(best_cw, best_dist, ambiguous=ties > 1)


def capacities(code: LinearCode) -> tuple[int, int]:
    """(detectable, correctable) error counts: (d-1, floor((d-1)/2))."""
    return code.detect_capacity, code.correct_capacity


def simplex_code(m: int, field: PrimeField) -> LinearCode:
    """Binary code whose generator rows run through all nonzero m-bit vectors.

    Length 2^m - 1, dimension m; every pair of distinct codewords lies at
    distance exactly 2^(m-1).
    """
    if field.q != 2:
        raise ValueError("simplex construction is defined over the binary field")
    if not 2 <= m <= 20:
        raise ValueError(f"m must be in [2, 20], got {m}")
    ints = np.arange(1, 2 ** m, dtype=np.int64)
    G = (ints[:, None] >> np.arange(m - 1, -1, -1)) & 1
    return LinearCode(field, G, min_distance=2 ** (m - 1))


# ---------------------------------------------------------------------------
# Code specification files
#
# Plain text: `q`, `n`, `k` assignments, then a `generator` section of n rows
# of k integers, optionally followed by a `parity` section of (n-k) rows of
# n integers.  `#` starts a comment line.


def parse_code_spec(text: str, source: str = "<string>") -> LinearCode:
    header: dict[str, int] = {}
    sections: dict[str, list[list[int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] in ("q", "n", "k") and len(parts) == 2:
            try:
                header[parts[0]] = int(parts[1])
            except ValueError:
                raise ValueError(f"{source}:{lineno}: bad integer for {parts[0]!r}") from None
            continue
        if parts == ["generator"] or parts == ["parity"]:
            current = parts[0]
            sections[current] = []
            continue
        if current is None:
            raise ValueError(f"{source}:{lineno}: unexpected line {line!r}")
        try:
            sections[current].append([int(p) for p in parts])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: matrix rows must be integers") from None

    for key in ("q", "n", "k"):
        if key not in header:
            raise ValueError(f"{source}: missing {key!r}")
    if "generator" not in sections:
        raise ValueError(f"{source}: missing generator section")
    q, n, k = header["q"], header["n"], header["k"]
    field = PrimeField(q)
    gen = sections["generator"]
    if len(gen) != n or any(len(row) != k for row in gen):
        raise ValueError(f"{source}: generator must be {n} rows of {k} integers")
    parity = sections.get("parity")
    if parity is not None and (len(parity) != n - k or any(len(r) != n for r in parity)):
        raise ValueError(f"{source}: parity must be {n - k} rows of {n} integers")
    return LinearCode(field, gen, parity=parity)


def load_code(path) -> LinearCode:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_code_spec(fh.read(), source=str(path))
