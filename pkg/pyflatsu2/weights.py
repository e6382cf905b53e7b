"""
Exact puncture-weight configurations: kappa_J, the regularity criterion and
the normalization that removes weights 0 and 1.

Subsets J of {1, ..., n} are bitmasks, bit j-1 standing for puncture j.
"""
import math
import numbers
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    IrregularWeights,
    NoInteriorWeight,
    NotNormalized,
    SubsetOverflow,
    WeightParseError,
)

MAX_PUNCTURES = 30
_CHUNK_BITS = 20
_WEIGHT_RE = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+)\s*)?$")


class Mode(Enum):
    CLASSIC = "classic"
    PARABOLIC = "parabolic"
    RAW = "raw"


def parse_weight(text):
    """
    Parse an exact weight from "p/q" or an integer string.

    :param text: str, Fraction or int
    :return: Fraction in [0, 1]
    """
    if isinstance(text, bool) or isinstance(text, float):
        raise WeightParseError(f"weights must be exact rationals, got float {text!r}")
    if isinstance(text, numbers.Rational):
        value = Fraction(text)
    elif isinstance(text, str):
        match = _WEIGHT_RE.match(text)
        if match is None:
            raise WeightParseError(f"cannot parse weight {text!r}; expected 'p/q' or an integer")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise WeightParseError(f"zero denominator in weight {text!r}")
        value = Fraction(int(num), int(den) if den is not None else 1)
    else:
        raise WeightParseError(f"unsupported weight type {type(text).__name__}")
    if value < 0 or value > 1:
        raise WeightParseError(f"weight {text!r} lies outside [0, 1]")
    return value


def parse_weights(text):
    """Parse a comma separated list such as "1/2,1/3"; the empty string gives no weights."""
    if text is None or text.strip() == "":
        return ()
    return tuple(parse_weight(part) for part in text.split(","))


def format_weight(t):
    return str(Fraction(t))


def subset_members(mask):
    """1-based sorted indices of the bitmask ``mask``."""
    members = []
    j = 1
    while mask:
        if mask & 1:
            members.append(j)
        mask >>= 1
        j += 1
    return tuple(members)


def format_subset(mask):
    """Set notation such as '{1,3}' for a bitmask."""
    return "{" + ",".join(str(j) for j in subset_members(mask)) + "}"


def as_mask(subset, n):
    """
    Normalize a subset given as a bitmask or an iterable of 1-based indices.

    :param subset: int bitmask or iterable of ints in 1..n
    :param n: number of punctures
    :return: int bitmask
    """
    if isinstance(subset, numbers.Integral) and not isinstance(subset, bool):
        mask = int(subset)
        if mask < 0 or mask >> n:
            raise ValueError(f"subset mask {mask} is not a subset of {{1..{n}}}")
        return mask
    mask = 0
    for j in subset:
        if type(j) is not int or not 1 <= j <= n:
            raise ValueError(f"subset element {j!r} is not in 1..{n}")
        mask |= 1 << (j - 1)
    return mask


class WeightConfig:
    """
    Genus plus exact puncture weights.

    Use :meth:`classic`, :meth:`parabolic` or :meth:`raw` rather than the
    constructor when the mode is known.
    """

    def __init__(self, g, weights=(), mode=Mode.RAW):
        if type(g) is not int or g < 0:
            raise ValueError("'g' must be a nonnegative integer value")
        self.g = g
        self.t = tuple(parse_weight(t) for t in weights)
        self.mode = Mode(mode)
        if self.mode is Mode.CLASSIC and self.t != (Fraction(1),):
            raise ValueError("a Classic configuration has exactly one weight equal to 1")
        if self.mode is Mode.PARABOLIC and any(t <= 0 or t >= 1 for t in self.t):
            raise ValueError("Parabolic weights must lie strictly inside (0, 1)")

    @classmethod
    def classic(cls, g):
        return cls(g, (Fraction(1),), Mode.CLASSIC)

    @classmethod
    def parabolic(cls, g, weights):
        return cls(g, weights, Mode.PARABOLIC)

    @classmethod
    def raw(cls, g, weights):
        return cls(g, weights, Mode.RAW)

    @property
    def n(self):
        return len(self.t)

    @property
    def is_classic(self):
        return self.mode is Mode.CLASSIC

    @property
    def is_normalized(self):
        return self.mode is not Mode.RAW

    def with_genus(self, g):
        return WeightConfig(g, self.t, self.mode)

    def to_dict(self):
        return {
            "g": self.g,
            "weights": [format_weight(t) for t in self.t],
            "mode": self.mode.value,
        }

    def __eq__(self, other):
        if not isinstance(other, WeightConfig):
            return NotImplemented
        return (self.g, self.t, self.mode) == (other.g, other.t, other.mode)

    def __hash__(self):
        return hash((self.g, self.t, self.mode))

    def __repr__(self):
        weights = ", ".join(format_weight(t) for t in self.t)
        return f"WeightConfig(g={self.g}, t=({weights}), mode={self.mode.value})"


@dataclass(frozen=True)
class KappaValue:
    """kappa_J = 1/2 (sum_{j in J} t_j - sum_{j not in J} t_j), J a bitmask."""

    value: Fraction
    J: int

    @property
    def members(self):
        return subset_members(self.J)


def kappa(cfg, J):
    """
    Exact kappa_J.

    :param cfg: WeightConfig
    :param J: bitmask or iterable of 1-based indices
    :return: KappaValue
    """
    mask = as_mask(J, cfg.n)
    signed = sum(t if mask >> j & 1 else -t for j, t in enumerate(cfg.t))
    return KappaValue(Fraction(signed) / 2, mask)


def floor_kappa(k):
    """Greatest integer <= kappa, exact."""
    value = k.value if isinstance(k, KappaValue) else Fraction(k)
    return math.floor(value)


@dataclass(frozen=True)
class Regularity:
    """Outcome of :func:`is_regular`; ``witness`` is a sorted tuple of 1-based indices."""

    regular: bool
    witness: tuple = None

    def __bool__(self):
        return self.regular


def _lex_least(masks):
    # least mask in the order of sorted index tuples: smallest first element,
    # a prefix before its extensions
    masks = np.asarray(masks, dtype=np.int64)
    chosen = 0
    while masks.size:
        low = masks & -masks
        least = low.min()
        masks = masks[low == least] ^ least
        chosen |= int(least)
        if np.any(masks == 0):
            break
    return chosen


def _integer_kappa_masks(cfg):
    # yields bitmasks J with kappa_J an integer, chunk by chunk, lowest chunk first
    n = cfg.n
    denominator = math.lcm(*(t.denominator for t in cfg.t)) if n else 1
    w = [int(t * denominator) for t in cfg.t]
    total = sum(w)
    modulus = 2 * denominator
    # kappa_J is an integer iff 2 * sum_J w - total == 0 mod 2 * denominator
    low_bits = min(n, _CHUNK_BITS)
    fits = modulus * (n + 2) < 2 ** 62
    dtype = np.int64 if fits else object
    low_w = np.array(w[:low_bits], dtype=dtype)
    masks = np.arange(2 ** low_bits, dtype=np.int64)
    low_sums = np.zeros(2 ** low_bits, dtype=dtype)
    for j in range(low_bits):
        low_sums = low_sums + ((masks >> j) & 1).astype(dtype) * low_w[j]
    for high in range(2 ** (n - low_bits)):
        high_sum = sum(w[low_bits + j] for j in range(n - low_bits) if high >> j & 1)
        hits = (2 * (low_sums + high_sum) - total) % modulus == 0
        found = masks[hits.astype(bool)]
        if found.size:
            yield (found | (high << low_bits)).astype(np.int64)


def is_regular(cfg):
    """
    Exact regularity test: I is a regular value iff no kappa_J is an integer.

    :param cfg: Classic or Parabolic WeightConfig
    :return: Regularity; when irregular, the lexicographically least witness J
    """
    if not cfg.is_normalized:
        raise NotNormalized("is_regular needs a Classic or Parabolic configuration; normalize first")
    if cfg.n > MAX_PUNCTURES:
        raise SubsetOverflow(f"{cfg.n} punctures exceed the enumeration bound of {MAX_PUNCTURES}")
    best = None
    for found in _integer_kappa_masks(cfg):
        candidate = _lex_least(found)
        if best is None or subset_members(candidate) < subset_members(best):
            best = candidate
        if best == 0:
            break
    if best is None:
        return Regularity(True)
    return Regularity(False, subset_members(best))


def require_regular(cfg):
    """Raise IrregularWeights unless ``cfg`` is regular."""
    result = is_regular(cfg)
    if not result.regular:
        raise IrregularWeights(result.witness)
    return result


def normalize(cfg):
    """
    Remove weights 0 and 1, flipping the first surviving weight when the number
    of weights equal to 1 is odd.

    :param cfg: WeightConfig (Raw, or already normalized)
    :return: (WeightConfig, transcript) where transcript is a list of str
    """
    if cfg.is_normalized:
        return cfg, [f"already {cfg.mode.value}; unchanged"]
    transcript = []
    zeros = [j + 1 for j, t in enumerate(cfg.t) if t == 0]
    if zeros:
        transcript.append(f"dropped t = 0 at puncture(s) {zeros}")
    nonzero = tuple(t for t in cfg.t if t != 0)
    if nonzero == (Fraction(1),):
        transcript.append("one puncture with t_1 = 1: Classic configuration kept as-is")
        return WeightConfig.classic(cfg.g), transcript

    ones = [j + 1 for j, t in enumerate(cfg.t) if t == 1]
    kept = [t for t in nonzero if t != 1]
    if ones:
        transcript.append(f"dropped t = 1 at puncture(s) {ones}")
    if len(ones) % 2 == 1:
        if not kept:
            raise NoInteriorWeight(
                "odd number of weights equal to 1 and no interior weight to absorb -I"
            )
        flipped = 1 - kept[0]
        transcript.append(
            f"odd count of t = 1: multiplied the first remaining C by -I, "
            f"t {format_weight(kept[0])} -> {format_weight(flipped)}"
        )
        kept[0] = flipped
    result = WeightConfig.parabolic(cfg.g, kept)
    transcript.append(f"result: {result!r}")
    return result, transcript
