"""
Critical tuples of f = 1/2 tr A_g, their Hessian on the normal slice and the
census of interior critical tori.
"""
import math
import multiprocessing
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .betti import dimension, torus_index
from .errors import CensusMismatch, DegenerateHessian, SliceDimensionMismatch
from .representation import (
    RepTuple,
    class_frame,
    jacobian,
    morse_function,
    residual_norm,
    retract,
    solve_to_fiber,
)
from .su2 import (
    IDENTITY,
    MINUS_IDENTITY,
    QUAT_I,
    QUAT_J,
    AlgebraVector,
    SU2Element,
    adjoint_matrix,
    exp_algebra,
    half_trace,
)
from .utils import HessianConfig
from .weights import format_subset, kappa, require_regular

FINGERPRINT_DIGITS = 8


def critical_tuple(cfg, J=0, lift=0, angles=None):
    """
    Explicit U(1)-fixed critical tuple.

    Parabolic: with kappa = kappa_J + lift, A_g = exp(-pi kappa i), B_g = j,
    C_j = exp(+-pi t_j i) (plus sign on J). Classic: A_g = i, B_g = j, C_1 = -1.
    The remaining A_i, B_i are diagonal.

    :param cfg: regular Classic or Parabolic WeightConfig, g >= 1
    :param J: bitmask or iterable of 1-based indices (ignored in Classic mode)
    :param lift: 0 or 1
    :param angles: optional list of g-1 pairs (alpha_i, beta_i); A_i = exp(alpha_i i)
    :return: RepTuple
    """
    if cfg.g < 1:
        raise ValueError("critical tuples need g >= 1")
    if lift not in (0, 1):
        raise ValueError("'lift' must be 0 or 1")
    require_regular(cfg)
    angles = angles if angles is not None else [(0.0, 0.0)] * (cfg.g - 1)
    if len(angles) != cfg.g - 1:
        raise ValueError(f"expected {cfg.g - 1} angle pairs")
    A = [_diagonal(alpha) for alpha, _ in angles]
    B = [_diagonal(beta) for _, beta in angles]

    if cfg.is_classic:
        return RepTuple(A + [QUAT_I], B + [QUAT_J], [MINUS_IDENTITY], cfg)

    k = kappa(cfg, J)
    value = float(k.value + lift)
    a_g = SU2Element(math.cos(math.pi * value), -math.sin(math.pi * value), 0.0, 0.0)
    C = []
    for j, t in enumerate(cfg.t):
        sign = 1.0 if k.J >> j & 1 else -1.0
        angle = math.pi * float(t)
        C.append(SU2Element(math.cos(angle), sign * math.sin(angle), 0.0, 0.0))
    return RepTuple(A + [a_g], B + [QUAT_J], C, cfg)


def _diagonal(angle):
    if angle == 0.0:
        return IDENTITY
    return exp_algebra(AlgebraVector(angle, 0.0, 0.0))


def fingerprint(p, digits=FINGERPRINT_DIGITS):
    """
    Conjugation-invariant trace fingerprint: half traces of A_g, B_g, A_g B_g,
    each C_j and each A_g C_j, rounded.

    :param p: RepTuple with g >= 1
    :return: tuple of floats
    """
    a, b = p.A[-1], p.B[-1]
    words = [a, b, a * b] + list(p.C) + [a * c for c in p.C]
    # + 0.0 folds -0.0 into 0.0
    return tuple(round(half_trace(w), digits) + 0.0 for w in words)


@dataclass(frozen=True)
class HessianReport:
    """
    Eigen counts of the Hessian of f on the slice.

    :param index: eigenvalues below -threshold
    :param nullity: eigenvalues with absolute value at most threshold
    :param spectrum: sorted eigenvalues
    :param slice_dim: slice dimension
    :param f_value: f at the point
    :param gradient_norm: norm of df restricted to the slice
    """

    index: int
    nullity: int
    spectrum: tuple
    slice_dim: int
    f_value: float
    gradient_norm: float
    threshold: float = 0.0

    @property
    def positive(self):
        return self.slice_dim - self.index - self.nullity

    def to_dict(self):
        return {
            "index": self.index,
            "nullity": self.nullity,
            "positive": self.positive,
            "slice_dim": self.slice_dim,
            "spectrum": [float(x) for x in self.spectrum],
            "f_value": self.f_value,
            "gradient_norm": self.gradient_norm,
            "threshold": self.threshold,
        }


def orbit_directions(p):
    """
    Flat coordinates of the infinitesimal conjugation X -> exp(s x) X exp(-s x)
    for x = i, j, k.

    :return: flat_dim x 3 numpy array
    """
    cols = []
    frames = [None if frozen else class_frame(c) for c, frozen in zip(p.C, p.frozen)]
    eye = np.eye(3)
    for x in eye:
        parts = []
        for a, b in zip(p.A, p.B):
            parts.append((adjoint_matrix(a.inverse()) - eye) @ x)
            parts.append((adjoint_matrix(b.inverse()) - eye) @ x)
        for c, frame in zip(p.C, frames):
            if frame is not None:
                parts.append(frame.T @ ((adjoint_matrix(c.inverse()) - eye) @ x))
        cols.append(np.concatenate(parts) if parts else np.zeros(0))
    return np.column_stack(cols)


def _null_space(m, rank_tol):
    u, s, vt = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    return vt[rank:].T


def slice_basis(p, config=None):
    """
    Orthonormal basis of ker D mu orthogonal to the conjugation orbit.

    :param p: RepTuple on the fiber
    :param config: HessianConfig
    :return: flat_dim x d numpy array
    """
    config = config or HessianConfig()
    kernel = _null_space(jacobian(p), config.rank)
    orbit = kernel.T @ orbit_directions(p)
    u, s, _ = np.linalg.svd(orbit, full_matrices=True)
    rank = int(np.sum(s > config.rank * s[0])) if s.size and s[0] > 0 else 0
    return kernel @ u[:, rank:]


def hessian_index(p, config=None, expected_nullity=None):
    """
    Morse index of f at a critical tuple from central second differences along
    curves in the fiber.

    A slice vector w is followed by retracting to p + w and pulling back onto
    mu^{-1}(I) with a minimal-norm Newton correction, so the second difference
    of f sees the constrained Hessian.

    :param p: critical RepTuple
    :param config: HessianConfig
    :param expected_nullity: raise DegenerateHessian on a different nullity;
        defaults to 2g - 2
    :return: HessianReport
    """
    config = config or HessianConfig()
    if p.g < 1:
        raise ValueError("f = 1/2 tr A_g needs g >= 1")
    res = residual_norm(p)
    if res > config.residual_gate:
        raise ValueError(f"tuple is not on the fiber (residual {res:.3e})")
    projection = config.projection_solver()
    base = solve_to_fiber(p, projection)
    expected_dim = dimension(p.cfg)
    basis = slice_basis(base, config)
    d = basis.shape[1]
    if d != expected_dim:
        raise SliceDimensionMismatch(
            f"slice dimension {d} != moduli space dimension {expected_dim}"
        )

    f0 = morse_function(base)
    h = config.step

    def f_along(w):
        q = solve_to_fiber(retract(base, w), projection)
        return morse_function(q)

    def second(w):
        return (f_along(h * w) - 2.0 * f0 + f_along(-h * w)) / (h * h)

    hess = np.zeros((d, d))
    for k in range(d):
        hess[k, k] = second(basis[:, k])
    for k in range(d):
        for m in range(k + 1, d):
            plus = second(basis[:, k] + basis[:, m])
            minus = second(basis[:, k] - basis[:, m])
            hess[k, m] = hess[m, k] = (plus - minus) / 4.0

    spectrum = np.linalg.eigvalsh(hess) if d else np.zeros(0)
    scale = float(np.max(np.abs(spectrum))) if d else 0.0
    threshold = config.eig_zero_rel * scale
    index = int(np.sum(spectrum < -threshold))
    nullity = int(np.sum(np.abs(spectrum) <= threshold))

    # df/da_g = -Im A_g in the left trivialization
    gradient = np.zeros(base.flat_dim)
    gradient[6 * (base.g - 1): 6 * (base.g - 1) + 3] = -base.A[-1].array[1:]
    gradient_norm = float(np.linalg.norm(basis.T @ gradient))

    report = HessianReport(
        index, nullity, tuple(float(x) for x in spectrum), d, float(f0), gradient_norm, threshold
    )
    expected_nullity = 2 * p.g - 2 if expected_nullity is None else expected_nullity
    if nullity != expected_nullity:
        raise DegenerateHessian(report, expected_nullity)
    return report


def _class_hessian(cfg, J, lift, config):
    return hessian_index(critical_tuple(cfg, J, lift), config)


@dataclass
class TorusCensus:
    """
    Distinct interior critical tori found from the explicit tuples.

    ``classes`` holds one row per conjugacy class: representative (J, lift),
    kappa, f value and the Hessian report.
    """

    cfg: object
    classes: list = field(default_factory=list)

    @property
    def indices(self):
        return sorted(c["report"].index for c in self.classes)

    @property
    def nullities(self):
        return sorted(c["report"].nullity for c in self.classes)

    @property
    def formula_indices(self):
        return sorted(torus_index(self.cfg, J) for J in range(2 ** self.cfg.n))

    @property
    def levels(self):
        """Distinct critical values of f among the tori."""
        return sorted({round(c["f_value"], FINGERPRINT_DIGITS) + 0.0 for c in self.classes})

    def to_frame(self):
        rows = [
            {
                "J": format_subset(c["J"]),
                "lift": c["lift"],
                "kappa": str(c["kappa"]),
                "f_value": c["f_value"],
                "index": c["report"].index,
                "nullity": c["report"].nullity,
                "gradient_norm": c["report"].gradient_norm,
            }
            for c in self.classes
        ]
        return pd.DataFrame(
            rows, columns=["J", "lift", "kappa", "f_value", "index", "nullity", "gradient_norm"]
        )

    def to_dict(self):
        return {
            "classes": [
                {
                    "J": list(kappa(self.cfg, c["J"]).members),
                    "lift": c["lift"],
                    "kappa": str(c["kappa"]),
                    "f_value": c["f_value"],
                    "hessian": c["report"].to_dict(),
                }
                for c in self.classes
            ],
            "indices": self.indices,
            "formula_indices": self.formula_indices,
            "levels": self.levels,
        }

    def __len__(self):
        return len(self.classes)

    def __repr__(self):
        return f"TorusCensus({len(self.classes)} classes, indices={self.indices})"


def torus_census(cfg, config=None, threads=1):
    """
    Build critical_tuple for every (J, lift), keep one tuple per conjugacy class,
    and compute the Hessian index of each class.

    :param cfg: regular Parabolic WeightConfig, g >= 1
    :param config: HessianConfig
    :param threads: worker processes for the Hessians
    :return: TorusCensus
    """
    if cfg.is_classic or not cfg.is_normalized:
        raise ValueError("torus_census needs a Parabolic configuration")
    if type(threads) is not int or threads < 1:
        raise ValueError("'threads' must be a positive integer value")
    config = config or HessianConfig()
    require_regular(cfg)

    seen = {}
    for J in range(2 ** cfg.n):
        for lift in (0, 1):
            p = critical_tuple(cfg, J, lift)
            key = fingerprint(p)
            if key not in seen:
                seen[key] = (J, lift, p)

    census = TorusCensus(cfg)
    reps = sorted(seen.values(), key=lambda r: (r[0], r[1]))
    if threads == 1:
        reports = [hessian_index(p, config) for _, _, p in reps]
    else:
        with multiprocessing.Pool(processes=threads) as pool:
            results = [
                pool.apply_async(_class_hessian, args=(cfg, J, lift, config))
                for J, lift, _ in reps
            ]
            reports = [r.get() for r in results]
    for (J, lift, p), report in zip(reps, reports):
        census.classes.append(
            {
                "J": J,
                "lift": lift,
                "kappa": kappa(cfg, J).value + lift,
                "f_value": morse_function(p),
                "report": report,
            }
        )

    if len(census) != 2 ** cfg.n:
        raise CensusMismatch(
            census, f"found {len(census)} distinct critical tori, expected {2 ** cfg.n}"
        )
    if census.indices != census.formula_indices:
        raise CensusMismatch(
            census,
            f"Hessian indices {census.indices} differ from the formula {census.formula_indices}",
        )
    return census
