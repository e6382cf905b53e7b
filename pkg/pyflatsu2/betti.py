"""
Critical strata and Poincare polynomials of the moduli spaces M_{g,n}.

The Morse function f = 1/2 tr A_g is perfect, so the Poincare polynomial is the
Morse polynomial sum over strata of t^index P_t(stratum).
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import pandas as pd

from .errors import GenusZero, NotNormalized, UnresolvedBaseCase
from .polynomial import ONE, T, IntPolynomial
from .weights import (
    Mode,
    WeightConfig,
    floor_kappa,
    format_subset,
    format_weight,
    kappa,
    normalize,
    require_regular,
    subset_members,
)

ONE_PLUS_T3 = ONE + T ** 3
ONE_PLUS_T = ONE + T
T_PLUS_T2 = T + T ** 2
# (1 - t^2)(1 - t^4)
DENOMINATOR = (ONE - T ** 2) * (ONE - T ** 4)


class StratumKind(Enum):
    END_MIN = "end_min"
    END_MAX = "end_max"
    INTERIOR_TORUS = "interior_torus"


@dataclass(frozen=True)
class CriticalStratum:
    """
    One critical submanifold of f.

    :param kind: StratumKind
    :param index: Morse index
    :param poincare: IntPolynomial of the stratum
    :param dim: dimension of the stratum
    :param J: bitmask of the torus label (Parabolic interior tori only)
    """

    kind: StratumKind
    index: int
    poincare: IntPolynomial
    dim: int
    J: int = None

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "J": None if self.J is None else list(subset_members(self.J)),
            "index": self.index,
            "dim": self.dim,
            "poincare": self.poincare.to_json(),
        }


class BaseCaseProvider:
    """
    Source of P_t(M_{0,n}), which the genus recursion bottoms out in.

    Strategies:
        - "empty": M_{0,n} asserted empty, P = 0
        - "user": a user-supplied polynomial with nonnegative coefficients
        - "probe": asserted empty, cross-checked by the numeric nonemptiness probe;
          UnresolvedBaseCase if the probe finds a point
    """

    EMPTY = "empty"
    USER = "user"
    PROBE = "probe"

    def __init__(self, strategy=EMPTY, polynomial=None, starts=64, seed=0, threads=1):
        if strategy not in [self.EMPTY, self.USER, self.PROBE]:
            raise ValueError(f"strategy must be in ['empty', 'user', 'probe'], got {strategy!r}")
        if strategy == self.USER:
            if not isinstance(polynomial, IntPolynomial):
                raise ValueError("the 'user' strategy needs an IntPolynomial")
            if not polynomial.is_nonnegative():
                raise ValueError("a supplied Poincare polynomial must have nonnegative coefficients")
        elif polynomial is not None:
            raise ValueError(f"strategy {strategy!r} takes no polynomial")
        self.strategy = strategy
        self.polynomial = polynomial
        self.starts = starts
        self.seed = seed
        self.threads = threads

    @classmethod
    def empty(cls):
        return cls(cls.EMPTY)

    @classmethod
    def user_supplied(cls, polynomial):
        return cls(cls.USER, polynomial)

    @classmethod
    def numeric_probe(cls, starts=64, seed=0, threads=1):
        return cls(cls.PROBE, starts=starts, seed=seed, threads=threads)

    @classmethod
    def parse(cls, text, seed=0):
        """
        Parse the command line form: "empty", "probe" or "poly:<c0,c1,...>".
        """
        text = text.strip()
        if text == cls.EMPTY:
            return cls.empty()
        if text == cls.PROBE:
            return cls.numeric_probe(seed=seed)
        if text.startswith("poly:"):
            return cls.user_supplied(IntPolynomial.parse(text[len("poly:"):]))
        raise ValueError(f"base must be 'empty', 'probe' or 'poly:<coeffs>', got {text!r}")

    def resolve(self, cfg):
        """
        P_t(M_{0,n}) for the genus-zero configuration ``cfg``.

        :param cfg: Parabolic WeightConfig with g = 0
        :return: IntPolynomial
        """
        if cfg.g != 0:
            raise ValueError("base cases are genus zero")
        if self.strategy == self.USER:
            return self.polynomial
        if self.strategy == self.PROBE:
            # imported here: the probe pulls in the whole numeric stack
            from .verifier import nonempty_probe

            result = nonempty_probe(cfg, starts=self.starts, seed=self.seed, threads=self.threads)
            if result.witness is not None:
                raise UnresolvedBaseCase(
                    f"M_0,{cfg.n} asserted empty but the probe found a point "
                    f"(residual {result.best_residual:.2e})"
                )
        return IntPolynomial()

    def to_dict(self):
        out = {"strategy": self.strategy}
        if self.polynomial is not None:
            out["polynomial"] = self.polynomial.to_json()
        return out

    def __repr__(self):
        return f"BaseCaseProvider({self.strategy!r})"


class SymbolicPoincare(NamedTuple):
    """P_t(M_{g,n}) = coefficient * P_t(M_{0,n}) + explicit."""

    coefficient: IntPolynomial
    explicit: IntPolynomial

    def substitute(self, base_poincare):
        return self.coefficient * base_poincare + self.explicit


def _require_normalized(cfg):
    if not cfg.is_normalized:
        raise NotNormalized("normalize the weight configuration first")


@lru_cache(maxsize=None)
def hn_poincare(g):
    """
    Harder-Narasimhan formula
    ((1+t^3)^{2g} - t^{2g}(1+t)^{2g}) / ((1-t^2)(1-t^4)).

    :param g: genus, int >= 0
    :return: IntPolynomial
    """
    if type(g) is not int or g < 0:
        raise ValueError("'g' must be a nonnegative integer value")
    numerator = ONE_PLUS_T3 ** (2 * g) - (ONE_PLUS_T ** (2 * g)).shift(2 * g)
    return numerator.exact_div(DENOMINATOR)


def dimension(cfg):
    """
    6g - 6 (Classic) or 6g - 6 + 2n (Parabolic).

    :param cfg: normalized WeightConfig
    :return: int, the real dimension of the smooth part
    :raises GenusZero: for Classic g = 0 and Parabolic g = 0 with n < 3, which have no smooth part
    """
    _require_normalized(cfg)
    if cfg.g == 0 and (cfg.is_classic or cfg.n < 3):
        raise GenusZero(f"M_{{0,{cfg.n}}} has no smooth part; its dimension is undefined")
    if cfg.is_classic:
        return 6 * cfg.g - 6
    return 6 * cfg.g - 6 + 2 * cfg.n


def torus_index(cfg, J):
    """2g + 2n - 2|J| + 4 floor(kappa_J) for a Parabolic configuration."""
    k = kappa(cfg, J)
    return 2 * cfg.g + 2 * cfg.n - 2 * len(k.members) + 4 * floor_kappa(k)


def strata(cfg, base=None):
    """
    Critical submanifolds of f = 1/2 tr A_g with their indices.

    :param cfg: regular Classic or Parabolic WeightConfig, g >= 1
    :param base: BaseCaseProvider for P_t(M_{0,n}); defaults to "empty"
    :return: list of CriticalStratum, empty end strata omitted
    """
    _require_normalized(cfg)
    if cfg.g < 1:
        raise GenusZero("f = 1/2 tr A_g needs at least one handle")
    require_regular(cfg)
    base = base or BaseCaseProvider.empty()
    g = cfg.g

    if cfg.is_classic:
        lower = hn_poincare(g - 1)
        tori = [
            CriticalStratum(
                StratumKind.INTERIOR_TORUS, 2 * g - 2, ONE_PLUS_T ** (2 * g - 2), 2 * g - 2
            )
        ]
    else:
        lower_cfg = cfg.with_genus(g - 1)
        lower = poincare(lower_cfg, base)
        torus_poincare = ONE_PLUS_T ** (2 * g - 2)
        tori = [
            CriticalStratum(
                StratumKind.INTERIOR_TORUS, torus_index(cfg, J), torus_poincare, 2 * g - 2, J
            )
            for J in range(2 ** cfg.n)
        ]

    end = ONE_PLUS_T3 * lower
    if end.is_zero():
        return tori
    lower_dim = 6 * g - 12 + (0 if cfg.is_classic else 2 * cfg.n)
    # SU(2)-bundles over the genus g-1 space with vanishing Euler class
    return (
        [CriticalStratum(StratumKind.END_MIN, 0, end, lower_dim + 3)]
        + tori
        + [CriticalStratum(StratumKind.END_MAX, 3, end, lower_dim + 3)]
    )


def morse_polynomial(stratum_list):
    """Sum of t^index P_t(stratum)."""
    total = IntPolynomial()
    for s in stratum_list:
        total = total + s.poincare.shift(s.index)
    return total


def poincare(cfg, base=None):
    """
    Poincare polynomial of M_{g,n} from the perfect Morse function.

    :param cfg: regular Classic or Parabolic WeightConfig
    :param base: BaseCaseProvider for P_t(M_{0,n}); defaults to "empty"
    :return: IntPolynomial
    """
    _require_normalized(cfg)
    require_regular(cfg)
    base = base or BaseCaseProvider.empty()
    if cfg.g == 0:
        if cfg.is_classic:
            return hn_poincare(0)
        return base.resolve(cfg)
    return morse_polynomial(strata(cfg, base))


def torus_sum(cfg):
    """sum_J t^{2(n + 1 - |J| + 2 floor(kappa_J))}."""
    total = IntPolynomial()
    for J in range(2 ** cfg.n):
        k = kappa(cfg, J)
        exponent = 2 * (cfg.n + 1 - len(k.members) + 2 * floor_kappa(k))
        total = total + IntPolynomial.monomial(exponent)
    return total


def symbolic_poincare(cfg):
    """
    Closed form relative to the unknown genus-zero polynomial:
    (1+t^3)^{2g} P_t(M_{0,n}) + ((1+t^3)^{2g} - (t+t^2)^{2g}) / ((1-t^2)(1-t^4)) * torus_sum.

    :param cfg: regular Parabolic WeightConfig
    :return: SymbolicPoincare(coefficient, explicit)
    """
    _require_normalized(cfg)
    if cfg.mode is not Mode.PARABOLIC:
        raise ValueError("symbolic_poincare needs a Parabolic configuration")
    require_regular(cfg)
    coefficient = ONE_PLUS_T3 ** (2 * cfg.g)
    ratio = (coefficient - T_PLUS_T2 ** (2 * cfg.g)).exact_div(DENOMINATOR)
    return SymbolicPoincare(coefficient, ratio * torus_sum(cfg))


def u2_poincare(cfg, base=None):
    """Poincare polynomial of the U(2) moduli space, (1+t)^{2g} P_t(M_{g,n})."""
    return ONE_PLUS_T ** (2 * cfg.g) * poincare(cfg, base)


def betti_numbers(poly):
    """Betti numbers b_0, b_1, ... read off a Poincare polynomial."""
    return list(poly.coeffs)


def betti_table(cfg, base=None):
    """
    Betti numbers of M_{g,n} as a DataFrame.

    :return: pandas DataFrame with columns 'degree' and 'betti'
    """
    numbers = betti_numbers(poincare(cfg, base))
    return pd.DataFrame({"degree": range(len(numbers)), "betti": numbers})


def strata_table(cfg, base=None):
    """
    Critical strata as a DataFrame with columns kind, J, index, dim, poincare.
    """
    rows = [
        {
            "kind": s.kind.value,
            "J": "" if s.J is None else format_subset(s.J),
            "index": s.index,
            "dim": s.dim,
            "poincare": str(s.poincare),
        }
        for s in strata(cfg, base)
    ]
    return pd.DataFrame(rows, columns=["kind", "J", "index", "dim", "poincare"])


def expected_euler(cfg):
    """
    Euler characteristic implied by the stratification, or None when it depends
    on the genus-zero base.
    """
    if cfg.g >= 2:
        return 0
    if cfg.g == 1:
        return 1 if cfg.is_classic else 2 ** cfg.n
    return None


def consistency_report(cfg, base=None):
    """
    Sanity checks on P_t(M_{g,n}): nonnegativity, Poincare duality, Euler
    characteristic and the index bound.

    :param cfg: regular Classic or Parabolic WeightConfig
    :param base: BaseCaseProvider
    :return: VerificationReport
    """
    from .report import VerificationReport

    report = VerificationReport("consistency", config=cfg.to_dict())
    poly = poincare(cfg, base)
    dim = dimension(cfg)
    report.add("nonnegative", poly.is_nonnegative(), measured=poly.to_json())
    report.add(
        "palindromic",
        poly.is_zero() or poly.is_palindromic(dim),
        measured=poly.to_json(),
        expected=f"t^{dim} P(1/t) = P(t)",
    )
    chi = poly(-1)
    expected = expected_euler(cfg)
    report.add(
        "euler_characteristic",
        expected is None or chi == expected,
        measured=chi,
        expected=expected,
    )
    if cfg.g >= 1:
        stratum_list = strata(cfg, base)
        worst = max(s.index + s.dim for s in stratum_list)
        report.add("index_bound", worst <= dim, measured=worst, expected=f"<= {dim}")
    if cfg.is_classic:
        report.add(
            "harder_narasimhan",
            poly == hn_poincare(cfg.g),
            measured=poly.to_json(),
            expected=hn_poincare(cfg.g).to_json(),
        )
    return report


def cp1_bundle_check(g, n):
    """
    For t_n = 1 and t_1 = ... = t_{n-1} = 1/(2n), M_{g,n} is a (CP^1)^{n-1}-bundle
    over M_g, so its Poincare polynomial is (1+t^2)^{n-1} P_t(M_g).

    :param g: genus >= 1
    :param n: number of punctures >= 1
    :return: (passed, computed, expected, normalized WeightConfig)
    """
    if type(g) is not int or g < 1:
        raise ValueError("'g' must be a positive integer value")
    if type(n) is not int or n < 1:
        raise ValueError("'n' must be a positive integer value")
    eps = Fraction(1, 2 * n)
    cfg, _ = normalize(WeightConfig.raw(g, [eps] * (n - 1) + [Fraction(1)]))
    computed = poincare(cfg, BaseCaseProvider.empty())
    expected = (ONE + T ** 2) ** (n - 1) * hn_poincare(g)
    return computed == expected, computed, expected, cfg


def describe(cfg):
    """One-line description used in text output."""
    weights = ",".join(format_weight(t) for t in cfg.t)
    return f"g={cfg.g} weights=({weights}) mode={cfg.mode.value}"
