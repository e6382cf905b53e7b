"""
Symmetries of the representation variety: the circle action that fixes f, the
half twist on the last handle and the sign action of (Z/2)^{2g}.
"""
import cmath
import math
import numbers

from .critical import fingerprint
from .errors import ActionUndefined
from .su2 import AlgebraVector, SU2Element, half_trace

UNIT_TOL = 1e-12


class CircleSubgroup:
    """
    The homomorphism phi: U(1) -> SU(2), phi(e^{i theta}) = cos theta + sin theta u,
    whose upper half circle contains a given element.

    :param axis: unit AlgebraVector u
    """

    def __init__(self, axis):
        self.axis = axis

    def __call__(self, lam):
        theta = _angle(lam)
        return SU2Element(math.cos(theta), *(math.sin(theta) * self.axis.array))

    def __repr__(self):
        return f"CircleSubgroup(axis={self.axis!r})"


def _angle(lam):
    if isinstance(lam, bool) or not isinstance(lam, numbers.Complex):
        raise ValueError("'lam' must be a unit complex number")
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > UNIT_TOL:
        raise ValueError(f"|lam| = {abs(lam):.15g}, expected 1")
    return cmath.phase(lam)


def phi_from(a_g, tol=UNIT_TOL):
    """
    Writing A_g = cos alpha + sin alpha u with alpha in (0, pi), the subgroup
    through u.

    :param a_g: SU2Element with half trace in (-1, 1)
    :return: CircleSubgroup
    """
    v = a_g.array[1:]
    s = math.sqrt(float(v @ v))
    if s <= tol or abs(half_trace(a_g)) >= 1.0 - tol:
        raise ActionUndefined("the circle action does not extend over A_g = +I or -I")
    return CircleSubgroup(AlgebraVector.from_array(v / s))


def u1_action(lam, p):
    """
    lam . (A_i, B_i, C_j) = (A_1, B_1, ..., A_g, B_g phi(lam), C_j).

    :param lam: unit complex number
    :param p: RepTuple with g >= 1
    :return: RepTuple
    """
    if p.g < 1:
        raise ValueError("the circle action needs g >= 1")
    phi = phi_from(p.A[-1])
    return p.replace(B=p.B[:-1] + [p.B[-1] * phi(lam)])


def half_twist(p):
    """
    A_g -> A_g B_g A_g^{-1} B_g^{-1} A_g^{-1}, B_g -> A_g B_g^{-1} A_g^{-1};
    all other entries fixed.
    """
    if p.g < 1:
        raise ValueError("the half twist needs g >= 1")
    a, b = p.A[-1], p.B[-1]
    ai, bi = a.inverse(), b.inverse()
    return p.replace(A=p.A[:-1] + [a * b * ai * bi * ai], B=p.B[:-1] + [a * bi * ai])


def _bits(bits, g, name):
    bits = list(bits)
    if len(bits) != g or any(b not in (0, 1) for b in bits):
        raise ValueError(f"'{name}' must hold {g} bits")
    return bits


def sign_action(delta, eps, p):
    """
    ((-1)^{delta_i} A_i, (-1)^{eps_i} B_i, C_j).

    :param delta: g bits
    :param eps: g bits
    :param p: RepTuple
    :return: RepTuple
    """
    delta = _bits(delta, p.g, "delta")
    eps = _bits(eps, p.g, "eps")
    A = [-a if d else a for a, d in zip(p.A, delta)]
    B = [-b if e else b for b, e in zip(p.B, eps)]
    return p.replace(A=A, B=B)


def unit_bits(g, handle):
    """The bit vector e_handle (1-based)."""
    return [1 if i == handle - 1 else 0 for i in range(g)]


def is_circle_fixed(p, samples=(1j, -1.0, cmath.exp(0.7j))):
    """True when u1_action(lam, p) has the fingerprint of p for every sample."""
    key = fingerprint(p)
    return all(fingerprint(u1_action(lam, p)) == key for lam in samples)
