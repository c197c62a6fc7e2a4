"""Bad-character-shift string search over exact and sketched tables.

The shift table maps a character c to one past its last index in the
pattern, with 0 meaning absent; any upper bound of that table keeps the
search correct and merely shortens some shifts, which is what lets a
compact approximator stand in for an exact table on large alphabets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import ceil

from .approximator import BuildParams, CompactApproximator, choose_params
from .cardinality import estimate_distinct
from .hashing import derive_seed

DIRECT_TABLE_BOUND = 256


class BackingUnsupportedError(ValueError):
    """Direct-address table asked to cover a code point past its bound."""


def as_code_points(symbols) -> list[int]:
    """str to code points; integer sequences pass through validated."""
    if isinstance(symbols, str):
        return [ord(c) for c in symbols]
    out = []
    for c in symbols:
        c = int(c)
        if c < 0:
            raise ValueError(f"code points must be nonnegative, got {c}")
        out.append(c)
    return out


def last_occurrence_table(pattern) -> dict[int, int]:
    """code point -> last index + 1, over the pattern's distinct chars."""
    table: dict[int, int] = {}
    for i, c in enumerate(as_code_points(pattern)):
        table[c] = i + 1
    return table


@dataclass
class MapShiftOracle:
    """Exact shift values from a dict; works for any alphabet."""

    pattern_length: int
    table: dict[int, int]
    backing: str = "associative"

    def lookup(self, c: int) -> int:
        return self.table.get(c, 0)


@dataclass
class DirectShiftOracle:
    """Exact shift values from a dense array of size `bound`.

    Only patterns whose code points all lie below the bound can be
    built; text characters at or above it are necessarily absent from
    the pattern and look up as 0.
    """

    pattern_length: int
    table: list[int]

    backing: str = "direct-address"

    def lookup(self, c: int) -> int:
        if 0 <= c < len(self.table):
            return self.table[c]
        return 0


class ApproxShiftOracle:
    """Upper-bounding shift values read from a compact approximator.

    Never reads below the exact table (the upper-approximation
    guarantee), and never above the pattern length.
    """

    backing = "approximator"

    def __init__(self, approximator: CompactApproximator, pattern_length: int,
                 params: BuildParams):
        self.approximator = approximator
        self.pattern_length = pattern_length
        self.params = params

    def lookup(self, c: int) -> int:
        return int(self.approximator.query(c))


def build_exact_oracle(pattern, backing: str = "associative",
                       table_bound: int = DIRECT_TABLE_BOUND):
    """Exact last-occurrence oracle with a dict or dense-array backing."""
    cps = as_code_points(pattern)
    if not cps:
        raise ValueError("pattern must be nonempty")
    table = last_occurrence_table(cps)
    if backing in ("associative", "map"):
        return MapShiftOracle(len(cps), table)
    if backing in ("direct-address", "direct"):
        top = max(table)
        if top >= table_bound:
            raise BackingUnsupportedError(
                f"pattern code point {top} is outside the direct table bound "
                f"{table_bound}; use the associative or approximator backing"
            )
        dense = [0] * table_bound
        for c, v in table.items():
            dense[c] = v
        return DirectShiftOracle(len(cps), dense)
    raise ValueError(f"unknown backing {backing!r}")


def build_approx_oracle(pattern, d: int = 3, m_floor: int = 16, seed: int = 0,
                        n_override: int | None = None,
                        m_override: int | None = None) -> ApproxShiftOracle:
    """Approximator-backed oracle sized from a distinct-count estimate.

    Any n in [1, pattern length] produces a correct oracle; the estimate
    only moves the precision/space tradeoff. `m_override` pins the
    bucket count directly (used by experiments scanning m/n ratios).
    """
    cps = as_code_points(pattern)
    if not cps:
        raise ValueError("pattern must be nonempty")
    if n_override is not None:
        n = n_override
    else:
        n = estimate_distinct(cps, seed=derive_seed(seed, "distinct")).for_sizing
    if m_override is not None:
        params = BuildParams(n=n, d=d, m=max(m_floor, int(m_override)))
    else:
        params = choose_params(n, d, m_floor)
    table = last_occurrence_table(cps)
    approx = CompactApproximator(
        lattice="nat", n_hashes=params.d, n_buckets=params.m,
        seed=derive_seed(seed, "family"),
    )
    approx.fit(list(table.keys()), list(table.values()))
    return ApproxShiftOracle(approx, len(cps), params)


def shift_bm(oracle, c: int, j: int) -> int:
    """Mismatch shift: align the last occurrence of c under position j."""
    if not 0 <= j < oracle.pattern_length:
        raise ValueError(f"mismatch index {j} out of range [0, {oracle.pattern_length})")
    return max(1, j - oracle.lookup(c) + 1)


def shift_qs(oracle, c: int) -> int:
    """Shift from the character just past the window (Sunday's rule)."""
    return max(1, oracle.pattern_length - oracle.lookup(c) + 1)


@dataclass
class SearchStats:
    """Counters collected by one search run."""

    candidates: int = 0
    comparisons: int = 0
    total_shift: int = 0
    matches: list = field(default_factory=list)
    #: (code point, mismatch index, shift) per oracle-computed shift,
    #: populated only when the run records shifts.
    shift_log: list | None = None


def _check_problem(pattern, text):
    if len(pattern) == 0:
        raise ValueError("pattern must be nonempty")
    if isinstance(pattern, str) != isinstance(text, str):
        raise TypeError("pattern and text must both be str or both be code-point sequences")


def search(pattern, text, oracle, heuristic: str = "bm",
           record_shifts: bool = False) -> SearchStats:
    """Find all (overlapping) matches, counting candidates and comparisons.

    Windows are compared right to left. With the "bm" heuristic the
    shift comes from the rightmost mismatch; with "qs" from the text
    character just past the window, so the final window simply ends the
    scan. Either way every shift is at least 1, and because the oracle
    only ever overestimates last occurrences the match set is the exact
    one: a larger table value merely shortens a shift.
    """
    _check_problem(pattern, text)
    if heuristic not in ("bm", "qs"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    stats = SearchStats(shift_log=[] if record_shifts else None)
    P = len(pattern)
    T = len(text)
    if P > T:
        return stats
    is_str = isinstance(pattern, str)
    lookups: dict = {}  # per-symbol cache of oracle reads
    last = T - P
    k = 0
    while k <= last:
        stats.candidates += 1
        i = P - 1
        while i >= 0:
            stats.comparisons += 1
            if pattern[i] != text[k + i]:
                break
            i -= 1
        if i < 0:
            stats.matches.append(k)
        if heuristic == "bm":
            if i < 0:
                shift = 1
            else:
                c = text[k + i]
                lp = lookups.get(c)
                if lp is None:
                    lp = oracle.lookup(ord(c) if is_str else c)
                    lookups[c] = lp
                shift = i - lp + 1
                if shift < 1:
                    shift = 1
                if stats.shift_log is not None:
                    stats.shift_log.append((ord(c) if is_str else c, i, shift))
        else:
            nxt = k + P
            if nxt >= T:
                break
            c = text[nxt]
            lp = lookups.get(c)
            if lp is None:
                lp = oracle.lookup(ord(c) if is_str else c)
                lookups[c] = lp
            shift = P - lp + 1
            if shift < 1:
                shift = 1
            if stats.shift_log is not None:
                stats.shift_log.append((ord(c) if is_str else c, P, shift))
        stats.total_shift += shift
        k += shift
    return stats


def search_brute(pattern, text) -> SearchStats:
    """Reference double loop: every window is a candidate."""
    _check_problem(pattern, text)
    stats = SearchStats()
    P = len(pattern)
    T = len(text)
    for k in range(T - P + 1):
        stats.candidates += 1
        i = 0
        while i < P:
            stats.comparisons += 1
            if pattern[i] != text[k + i]:
                break
            i += 1
        if i == P:
            stats.matches.append(k)
    return stats


def rank_characters(text, ascending: bool = False, exclude: str = "\n") -> list:
    """Text characters ordered by frequency (ties broken by code point)."""
    counts = Counter(text)
    for c in exclude:
        counts.pop(c, None)
    sign = 1 if ascending else -1
    key = lambda item: (sign * item[1], ord(item[0]) if isinstance(item[0], str) else item[0])
    return [c for c, _ in sorted(counts.items(), key=key)]


def pattern_from_corpus(text, length: int, kind: str = "frequent"):
    """Deterministic pattern of frequency-ranked corpus characters.

    Takes the `length` most frequent (or rarest occurring) characters,
    cycling them when the corpus has fewer distinct ones.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if kind not in ("frequent", "rare"):
        raise ValueError(f"unknown pattern kind {kind!r}")
    ranked = rank_characters(text, ascending=(kind == "rare"))
    if not ranked:
        raise ValueError("corpus has no usable characters")
    chosen = [ranked[i % len(ranked)] for i in range(length)]
    if isinstance(text, str):
        return "".join(chosen)
    return chosen


@dataclass(frozen=True)
class RatioRow:
    """One (pattern, d) cell of the candidate-count comparison."""

    pattern: str
    d: int
    m: int
    candidates_exact: int
    candidates_approx: int
    ratio: float


def ratio_experiment(text, patterns, d_values, m_multiplier: float | None = None,
                     heuristic: str = "qs", seed: int = 0,
                     m_floor: int = 16) -> list[RatioRow]:
    """Candidate counts of the sketch-backed engine versus the exact one.

    For each pattern the exact (associative) engine fixes the baseline
    candidate count; each d then gets a fresh approximate oracle and its
    own count. Match sets must agree between engines, and the run aborts
    with a diagnostic if they ever do not (they cannot, short of a bug).
    The ratio column simply reports measured counts; runs where the
    sketch happens to beat the exact table are possible and reported
    as ratios below one.
    """
    patterns = list(patterns)
    if not patterns:
        raise ValueError("need at least one pattern")
    rows = []
    for p_idx, pattern in enumerate(patterns):
        exact = build_exact_oracle(pattern)
        base = search(pattern, text, exact, heuristic)
        for d in d_values:
            sub_seed = derive_seed(seed, f"ratio/p{p_idx}/d{d}")
            if m_multiplier is not None:
                n = estimate_distinct(
                    as_code_points(pattern), seed=derive_seed(sub_seed, "distinct")
                ).for_sizing
                oracle = build_approx_oracle(
                    pattern, d=d, m_floor=m_floor, seed=sub_seed,
                    m_override=ceil(m_multiplier * n),
                )
            else:
                oracle = build_approx_oracle(pattern, d=d, m_floor=m_floor, seed=sub_seed)
            approx = search(pattern, text, oracle, heuristic)
            if approx.matches != base.matches:
                raise RuntimeError(
                    f"engine disagreement for pattern {pattern!r} at d={d}: "
                    f"exact found {len(base.matches)} matches, "
                    f"approximate found {len(approx.matches)}"
                )
            ratio = (
                approx.candidates / base.candidates if base.candidates else float("nan")
            )
            rows.append(RatioRow(
                pattern=pattern if isinstance(pattern, str) else repr(pattern),
                d=d,
                m=oracle.params.m,
                candidates_exact=base.candidates,
                candidates_approx=approx.candidates,
                ratio=ratio,
            ))
    return rows
