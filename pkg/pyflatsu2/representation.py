"""
Points (A_1, B_1, ..., A_g, B_g, C_1, ..., C_n) of the representation variety,
the product map mu_{g,n}, its derivative and a Gauss-Newton solver onto the
fiber mu^{-1}(I).

Tangent vectors are left-trivialized: A_i moves as A_i exp(s a_i), B_i as
B_i exp(s b_i), and C_j along its conjugacy class as exp(-s d_j) C_j exp(s d_j),
whose velocity is c_j = (1 - Ad C_j^{-1}) d_j. Derivatives of mu are measured as
mu^{-1} d mu.

Flat coordinates list a_1, b_1, ..., a_g, b_g (three each) followed by two
coordinates per C_j in an orthonormal frame of its class tangent plane. C_j with
t_j in {0, 1} is a point class and has no coordinates.
"""
import math

import numpy as np

from .errors import AntipodalLog, NoConvergence
from .su2 import (
    IDENTITY,
    MINUS_IDENTITY,
    AlgebraVector,
    adjoint_matrix,
    class_element,
    commutator,
    exp_algebra,
    half_trace,
    haar_sample,
    log_group,
)
from .utils import DEFAULT_TOLERANCES, SolverConfig, task_rng
from .weights import WeightConfig, is_regular


class RepTuple:
    """
    A representation tuple belonging to a Classic or Parabolic WeightConfig.

    :param A: list of g SU2Element
    :param B: list of g SU2Element
    :param C: list of n SU2Element, C_j in the class of weight t_j
    :param cfg: WeightConfig
    :param tol: class membership tolerance on half traces
    """

    def __init__(self, A, B, C, cfg, tol=DEFAULT_TOLERANCES.class_membership):
        if not cfg.is_normalized:
            raise ValueError("representation tuples need a Classic or Parabolic configuration")
        A, B, C = list(A), list(B), list(C)
        if len(A) != cfg.g or len(B) != cfg.g:
            raise ValueError(f"expected {cfg.g} A and B elements, got {len(A)} and {len(B)}")
        if len(C) != cfg.n:
            raise ValueError(f"expected {cfg.n} C elements, got {len(C)}")
        for j, (c, t) in enumerate(zip(C, cfg.t)):
            expected = math.cos(math.pi * float(t))
            if abs(half_trace(c) - expected) > tol:
                raise ValueError(
                    f"C_{j + 1} has half trace {half_trace(c):.12g}, "
                    f"expected cos(pi t) = {expected:.12g}"
                )
        self.A = A
        self.B = B
        self.C = C
        self.cfg = cfg
        # point classes (t = 0 or 1) carry no tangent directions
        self.frozen = [t in (0, 1) for t in cfg.t]

    @property
    def g(self):
        return self.cfg.g

    @property
    def n(self):
        return self.cfg.n

    @property
    def flat_dim(self):
        return 6 * self.g + 2 * self.frozen.count(False)

    def elements(self):
        """A_1, B_1, ..., A_g, B_g, C_1, ..., C_n in product order."""
        out = []
        for a, b in zip(self.A, self.B):
            out.extend([a, b])
        return out + self.C

    def replace(self, A=None, B=None, C=None, cfg=None):
        return RepTuple(
            self.A if A is None else A,
            self.B if B is None else B,
            self.C if C is None else C,
            self.cfg if cfg is None else cfg,
        )

    def __repr__(self):
        return f"RepTuple(g={self.g}, n={self.n}, residual={residual_norm(self):.3e})"


def class_frame(c):
    """
    Orthonormal basis of the tangent plane of the conjugacy class through ``c``,
    i.e. the plane orthogonal to its axis.

    :param c: SU2Element, not +-I
    :return: 3x2 numpy array
    """
    v = c.array[1:]
    norm = np.linalg.norm(v)
    if norm < 1e-14:
        raise ValueError("point classes have no tangent plane")
    u = v / norm
    # standard basis vector least aligned with the axis
    e = np.zeros(3)
    e[np.argmin(np.abs(u))] = 1.0
    v1 = e - np.dot(e, u) * u
    v1 /= np.linalg.norm(v1)
    v2 = np.cross(u, v1)
    return np.column_stack([v1, v2])


def _conjugator_direction(c, cj):
    # minimal d with (1 - Ad C^{-1}) d = c
    m = np.eye(3) - adjoint_matrix(c.inverse())
    return np.linalg.lstsq(m, cj, rcond=None)[0]


class TangentVector:
    """
    Tangent vector (a_i, b_i, c_j) at a RepTuple.

    Build it with :meth:`from_conjugators`, :meth:`from_flat`, :meth:`zero` or
    :meth:`random` so that every c_j lies in the image of (1 - Ad C_j^{-1}).
    """

    def __init__(self, a, b, c):
        self.a = [_as_vector(x) for x in a]
        self.b = [_as_vector(x) for x in b]
        self.c = [_as_vector(x) for x in c]

    @classmethod
    def from_conjugators(cls, p, a, b, d):
        """c_j = (1 - Ad C_j^{-1}) d_j."""
        c = []
        for cj, dj in zip(p.C, d):
            m = np.eye(3) - adjoint_matrix(cj.inverse())
            c.append(AlgebraVector.from_array(m @ _as_vector(dj).array))
        return cls(a, b, c)

    @classmethod
    def from_flat(cls, p, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (p.flat_dim,):
            raise ValueError(f"flat vector must have length {p.flat_dim}")
        a = [x[6 * i: 6 * i + 3] for i in range(p.g)]
        b = [x[6 * i + 3: 6 * i + 6] for i in range(p.g)]
        c = []
        k = 6 * p.g
        for cj, frozen in zip(p.C, p.frozen):
            if frozen:
                c.append(np.zeros(3))
            else:
                c.append(class_frame(cj) @ x[k: k + 2])
                k += 2
        return cls(a, b, c)

    @classmethod
    def zero(cls, p):
        return cls.from_flat(p, np.zeros(p.flat_dim))

    @classmethod
    def random(cls, p, rng, scale=1.0):
        return cls.from_flat(p, scale * rng.standard_normal(p.flat_dim))

    def to_flat(self, p):
        parts = []
        for a, b in zip(self.a, self.b):
            parts.extend([a.array, b.array])
        for cj, c, frozen in zip(p.C, self.c, p.frozen):
            if not frozen:
                parts.append(class_frame(cj).T @ c.array)
        return np.concatenate(parts) if parts else np.zeros(0)

    def __repr__(self):
        return f"TangentVector(g={len(self.a)}, n={len(self.c)})"


def _as_vector(x):
    if isinstance(x, AlgebraVector):
        return x
    return AlgebraVector.from_array(x)


def mu_eval(p):
    """
    (prod_i [A_i, B_i]) (prod_j C_j), multiplied left to right. In Classic mode
    C_1 = -I supplies the sign of -prod [A_i, B_i].

    :param p: RepTuple
    :return: SU2Element
    """
    out = IDENTITY
    for a, b in zip(p.A, p.B):
        out = out * commutator(a, b)
    for c in p.C:
        out = out * c
    return out


def residual(p, tol=DEFAULT_TOLERANCES.antipode):
    """log_group(mu_eval(p)) as a numpy 3-vector; AntipodalLog near mu = -I."""
    return log_group(mu_eval(p), tol).array


def residual_norm(p):
    """|log mu|, with pi standing in for the antipode."""
    try:
        return float(np.linalg.norm(residual(p)))
    except AntipodalLog:
        return math.pi


def _suffixes(p):
    # Q_i = prod_{k > i} [A_k, B_k] prod C, S_j = prod_{l > j} C_l
    s = [IDENTITY] * (p.n + 1)
    for j in range(p.n - 1, -1, -1):
        s[j] = p.C[j] * s[j + 1]
    q = [IDENTITY] * (p.g + 1)
    q[p.g] = s[0]
    for i in range(p.g - 1, -1, -1):
        q[i] = commutator(p.A[i], p.B[i]) * q[i + 1]
    return q[1:], s[1:]


def dmu_blocks(p):
    """
    Matrix blocks of D mu. For handle i, with Q_i = prod_{k>i}[A_k, B_k] prod C::

        a_i -> Ad(Q_i)^{-1} Ad(B_i A_i) (Ad B_i^{-1} - 1) a_i
        b_i -> Ad(Q_i)^{-1} Ad(B_i A_i) (1 - Ad A_i^{-1}) b_i

    and c_j -> Ad(prod_{l>j} C_l)^{-1} c_j.

    :param p: RepTuple
    :return: (list of (Ma_i, Mb_i), list of Mc_j), all 3x3 arrays
    """
    q, s = _suffixes(p)
    eye = np.eye(3)
    handles = []
    for a, b, qi in zip(p.A, p.B, q):
        outer = adjoint_matrix(qi.inverse()) @ adjoint_matrix(b * a)
        ma = outer @ (adjoint_matrix(b.inverse()) - eye)
        mb = outer @ (eye - adjoint_matrix(a.inverse()))
        handles.append((ma, mb))
    punctures = [adjoint_matrix(sj.inverse()) for sj in s]
    return handles, punctures


def jacobian(p):
    """
    D mu in flat coordinates.

    :param p: RepTuple
    :return: 3 x flat_dim numpy array
    """
    handles, punctures = dmu_blocks(p)
    cols = []
    for ma, mb in handles:
        cols.extend([ma, mb])
    for cj, mc, frozen in zip(p.C, punctures, p.frozen):
        if not frozen:
            cols.append(mc @ class_frame(cj))
    return np.hstack(cols) if cols else np.zeros((3, 0))


def dmu_apply(p, v):
    """
    D mu(v) at p, term by term.

    :param p: RepTuple
    :param v: TangentVector at p
    :return: AlgebraVector
    """
    handles, punctures = dmu_blocks(p)
    out = np.zeros(3)
    for (ma, mb), a, b in zip(handles, v.a, v.b):
        out += ma @ a.array + mb @ b.array
    for mc, c in zip(punctures, v.c):
        out += mc @ c.array
    return AlgebraVector.from_array(out)


def rank_dmu(p, threshold=DEFAULT_TOLERANCES.rank):
    """
    Numerical rank of D mu: singular values above threshold * sigma_max.

    :param p: RepTuple
    :param threshold: relative cutoff
    :return: int in 0..3
    """
    handles, punctures = dmu_blocks(p)
    # full 3-vector blocks: rank does not depend on the frame
    blocks = [m for pair in handles for m in pair]
    for cj, mc, frozen in zip(p.C, punctures, p.frozen):
        if not frozen:
            blocks.append(mc @ class_frame(cj))
    if not blocks:
        return 0
    sv = np.linalg.svd(np.hstack(blocks), compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > threshold * sv[0]))


def retract(p, x):
    """
    Move p along the flat vector x: A_i exp(a_i), B_i exp(b_i) and
    exp(-d_j) C_j exp(d_j). Class membership is exact.

    :param p: RepTuple
    :param x: flat vector or TangentVector
    :return: RepTuple
    """
    v = x if isinstance(x, TangentVector) else TangentVector.from_flat(p, x)
    A = [ai * exp_algebra(a) for ai, a in zip(p.A, v.a)]
    B = [bi * exp_algebra(b) for bi, b in zip(p.B, v.b)]
    C = []
    for cj, c, frozen in zip(p.C, v.c, p.frozen):
        if frozen:
            C.append(cj)
            continue
        d = AlgebraVector.from_array(_conjugator_direction(cj, c.array))
        h = exp_algebra(d)
        C.append(h.inverse() * cj * h)
    return RepTuple(A, B, C, p.cfg)


def conjugate(p, h):
    """Global conjugation X -> h X h^{-1} of every entry."""
    hi = h.inverse()
    return RepTuple(
        [h * a * hi for a in p.A],
        [h * b * hi for b in p.B],
        [h * c * hi for c in p.C],
        p.cfg,
    )


def morse_function(p, handle=None):
    """
    f = 1/2 tr A_handle, with the last handle by default.

    :param p: RepTuple with g >= 1
    :param handle: 1-based handle index
    :return: float
    """
    handle = p.g if handle is None else handle
    if type(handle) is not int or not 1 <= handle <= p.g:
        raise ValueError(f"'handle' must be an integer in 1..{p.g}")
    return half_trace(p.A[handle - 1])


def _class_point(t, rng=None):
    if t == 0:
        return IDENTITY
    if t == 1:
        return MINUS_IDENTITY
    return class_element(t, conjugator=haar_sample(rng) if rng is not None else None)


def random_tuple(cfg, rng):
    """
    Haar-random A_i, B_i and Haar-random conjugates of the class representatives.

    :param cfg: Classic or Parabolic WeightConfig
    :param rng: numpy Generator
    :return: RepTuple (not on the fiber)
    """
    A = [haar_sample(rng) for _ in range(cfg.g)]
    B = [haar_sample(rng) for _ in range(cfg.g)]
    C = [_class_point(t, rng) for t in cfg.t]
    return RepTuple(A, B, C, cfg)


def solve_to_fiber(initial, solver=None):
    """
    Gauss-Newton on r(p) = log mu(p) with backtracking line search.

    The least-squares step is the minimal norm solution of J x = -r, so a point
    already on the fiber only moves by its residual. A start that hits the
    antipode mu = -I is retried from a perturbed copy of ``initial``.

    :param initial: RepTuple
    :param solver: SolverConfig
    :return: RepTuple with |log mu| < solver.tol
    """
    solver = solver or SolverConfig()
    rng = task_rng(solver.seed, 1)
    start = initial
    best = math.pi
    iterations = 0
    for attempt in range(solver.max_restarts + 1):
        try:
            return _gauss_newton(start, solver)
        except NoConvergence as e:
            best = min(best, e.residual)
            iterations += e.iterations
        except AntipodalLog:
            pass
        if initial.flat_dim == 0:
            break
        start = retract(initial, 0.1 * rng.standard_normal(initial.flat_dim))
    raise NoConvergence(best, iterations)


def _gauss_newton(p, solver):
    r = residual(p)
    norm = float(np.linalg.norm(r))
    polish = 0
    for it in range(solver.max_iter):
        if norm < solver.tol:
            if polish >= solver.polish_steps:
                return p
            polish += 1
        if p.flat_dim == 0:
            break
        step = -np.linalg.lstsq(jacobian(p), r, rcond=solver.rank)[0]
        alpha = 1.0
        for _ in range(solver.halvings):
            candidate = retract(p, alpha * step)
            try:
                r_c = residual(candidate)
            except AntipodalLog:
                alpha *= 0.5
                continue
            n_c = float(np.linalg.norm(r_c))
            if n_c < norm:
                p, r, norm = candidate, r_c, n_c
                break
            if norm < solver.tol:
                return p
            alpha *= 0.5
        else:
            # no decrease: converged to rounding, or stuck
            if norm < solver.tol:
                return p
            raise NoConvergence(norm, it + 1)
    if norm < solver.tol:
        return p
    raise NoConvergence(norm, solver.max_iter)


def irregular_witness_tuple(cfg, rng=None):
    """
    Commuting diagonal tuple on the fiber for irregular weights: with witness J,
    C_j = exp(+-pi t_j i) (plus sign on J) and diagonal A_i, B_i.

    :param cfg: irregular Parabolic WeightConfig
    :param rng: numpy Generator for the A_i, B_i angles; identity when None
    :return: (RepTuple, witness tuple of 1-based indices)
    """
    result = is_regular(cfg)
    if result.regular:
        raise ValueError("weights are regular; no commuting witness tuple exists")
    members = set(result.witness)
    C = [
        class_element(t, axis=AlgebraVector(1.0 if j + 1 in members else -1.0, 0.0, 0.0))
        for j, t in enumerate(cfg.t)
    ]

    def diagonal():
        if rng is None:
            return IDENTITY
        return exp_algebra(AlgebraVector(rng.uniform(-math.pi, math.pi), 0.0, 0.0))

    A = [diagonal() for _ in range(cfg.g)]
    B = [diagonal() for _ in range(cfg.g)]
    return RepTuple(A, B, C, cfg), result.witness


def split_at_last_handle(p):
    """
    Drop the last handle: the genus g-1 tuple (same C) and the one-handle tuple
    (A_g, B_g) with no punctures.

    :param p: RepTuple with g >= 1
    :return: (RepTuple, RepTuple)
    """
    if p.g < 1:
        raise ValueError("no handle to split off")
    lower = RepTuple(p.A[:-1], p.B[:-1], p.C, p.cfg.with_genus(p.g - 1))
    handle = RepTuple(p.A[-1:], p.B[-1:], [], WeightConfig.parabolic(1, ()))
    return lower, handle


def splitting_defect(p, v, tol=DEFAULT_TOLERANCES.structural):
    """
    At A_g = +-I, D mu_{g,n}(v) = D mu_{g-1,n}(v') + Ad(prod C)^{-1} D mu_{1,0}(a_g, b_g).

    :param p: RepTuple with A_g = +-I
    :param v: TangentVector at p
    :return: max-norm difference of the two sides
    """
    a_g = p.A[-1]
    if not (a_g.allclose(IDENTITY, tol) or a_g.allclose(MINUS_IDENTITY, tol)):
        raise ValueError("the splitting holds at A_g = +I or -I only")
    lower, handle = split_at_last_handle(p)
    full = dmu_apply(p, v).array
    lower_part = dmu_apply(lower, TangentVector(v.a[:-1], v.b[:-1], v.c)).array
    handle_part = dmu_apply(handle, TangentVector(v.a[-1:], v.b[-1:], [])).array
    prod_c = IDENTITY
    for c in p.C:
        prod_c = prod_c * c
    split = lower_part + adjoint_matrix(prod_c.inverse()) @ handle_part
    return float(np.max(np.abs(full - split)))


def fd_dmu(p, v, step=1e-5):
    """
    Central difference of mu^{-1} mu along the retraction curve through p with velocity v.

    :return: numpy 3-vector
    """
    x = v.to_flat(p)
    mu0_inv = mu_eval(p).inverse()
    plus = log_group(mu0_inv * mu_eval(retract(p, step * x))).array
    minus = log_group(mu0_inv * mu_eval(retract(p, -step * x))).array
    return (plus - minus) / (2.0 * step)
