"""
SU(2) as the unit quaternions and su(2) as the purely imaginary quaternions.

The matrix identification is fixed once and for all::

    w + xi + yj + zk  <->  [[w + xi,  y + zi],
                            [-y + zi, w - xi]]

so tr q = 2w, diag(e^{i theta}, e^{-i theta}) <-> cos(theta) + sin(theta) i and
[[0, 1], [-1, 0]] <-> j.
"""
import math
import numbers

import numpy as np

from .errors import AntipodalLog
from .utils import DEFAULT_TOLERANCES


def _qmul(p, q):
    # Hamilton product of two length-4 arrays (w, x, y, z)
    pw, pv = p[0], p[1:]
    qw, qv = q[0], q[1:]
    out = np.empty(4)
    out[0] = pw * qw - np.dot(pv, qv)
    out[1:] = pw * qv + qw * pv + np.cross(pv, qv)
    return out


def _rotation(q):
    # Ad_q as a 3x3 matrix: v -> q v q^{-1}
    w, v = q[0], q[1:]
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return (w * w - np.dot(v, v)) * np.eye(3) + 2.0 * np.outer(v, v) + 2.0 * w * vx


class AlgebraVector:
    """
    Element x i + y j + z k of su(2), stored as a read-only 3-vector.

    The invariant form <a, b> = -1/2 tr(ab) is the Euclidean dot product of the
    coefficient vectors.
    """

    def __init__(self, x=0.0, y=0.0, z=0.0):
        v = np.array([x, y, z], dtype=float)
        v.flags.writeable = False
        self._v = v

    @classmethod
    def from_array(cls, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise ValueError("algebra vectors have exactly 3 components")
        return cls(v[0], v[1], v[2])

    @classmethod
    def basis(cls, k):
        """Unit vector along i (k=0), j (k=1) or k (k=2)."""
        v = np.zeros(3)
        v[k] = 1.0
        return cls.from_array(v)

    @property
    def x(self):
        return float(self._v[0])

    @property
    def y(self):
        return float(self._v[1])

    @property
    def z(self):
        return float(self._v[2])

    @property
    def array(self):
        return self._v

    def norm(self):
        return float(np.linalg.norm(self._v))

    def dot(self, other):
        return float(np.dot(self._v, other.array))

    def bracket(self, other):
        """Lie bracket ab - ba, which is 2 (a x b) in coefficients."""
        return AlgebraVector.from_array(2.0 * np.cross(self._v, other.array))

    def __add__(self, other):
        return AlgebraVector.from_array(self._v + other.array)

    def __sub__(self, other):
        return AlgebraVector.from_array(self._v - other.array)

    def __neg__(self):
        return AlgebraVector.from_array(-self._v)

    def __mul__(self, scalar):
        return AlgebraVector.from_array(float(scalar) * self._v)

    __rmul__ = __mul__

    def allclose(self, other, tol=DEFAULT_TOLERANCES.structural):
        return bool(np.max(np.abs(self._v - other.array)) <= tol)

    def __repr__(self):
        return f"AlgebraVector({self.x:.12g}, {self.y:.12g}, {self.z:.12g})"


class SU2Element:
    """
    Unit quaternion w + xi + yj + zk. Components are renormalized on construction.
    """

    def __init__(self, w=1.0, x=0.0, y=0.0, z=0.0):
        q = np.array([w, x, y, z], dtype=float)
        norm = np.linalg.norm(q)
        if not np.isfinite(norm) or norm < 1e-300:
            raise ValueError("cannot normalize a zero or non-finite quaternion")
        q = q / norm
        q.flags.writeable = False
        self._q = q

    @classmethod
    def from_array(cls, q):
        q = np.asarray(q, dtype=float)
        if q.shape != (4,):
            raise ValueError("quaternions have exactly 4 components")
        return cls(q[0], q[1], q[2], q[3])

    @classmethod
    def from_matrix(cls, m):
        """
        Inverse of :meth:`matrix`.

        :param m: 2x2 complex array in SU(2)
        :return: SU2Element
        """
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag)

    @property
    def w(self):
        return float(self._q[0])

    @property
    def x(self):
        return float(self._q[1])

    @property
    def y(self):
        return float(self._q[2])

    @property
    def z(self):
        return float(self._q[3])

    @property
    def array(self):
        return self._q

    @property
    def vector(self):
        """Imaginary part as an AlgebraVector (not normalized)."""
        return AlgebraVector.from_array(self._q[1:])

    def inverse(self):
        return SU2Element(self._q[0], -self._q[1], -self._q[2], -self._q[3])

    def matrix(self):
        w, x, y, z = self._q
        return np.array([[w + 1j * x, y + 1j * z], [-y + 1j * z, w - 1j * x]])

    def __mul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return SU2Element.from_array(-self._q)

    def distance(self, other):
        """Max-norm distance between component vectors."""
        return float(np.max(np.abs(self._q - other.array)))

    def allclose(self, other, tol=DEFAULT_TOLERANCES.structural):
        return self.distance(other) <= tol

    def __repr__(self):
        return f"SU2Element({self.w:.12g}, {self.x:.12g}, {self.y:.12g}, {self.z:.12g})"


IDENTITY = SU2Element(1.0, 0.0, 0.0, 0.0)
MINUS_IDENTITY = SU2Element(-1.0, 0.0, 0.0, 0.0)
QUAT_I = SU2Element(0.0, 1.0, 0.0, 0.0)
QUAT_J = SU2Element(0.0, 0.0, 1.0, 0.0)
QUAT_K = SU2Element(0.0, 0.0, 0.0, 1.0)


def multiply(p, q):
    """Quaternion product pq, renormalized."""
    return SU2Element.from_array(_qmul(p.array, q.array))


def commutator(a, b):
    """[a, b] = a b a^{-1} b^{-1}."""
    return a * b * a.inverse() * b.inverse()


def half_trace(q):
    """1/2 tr q, i.e. the real part w."""
    return q.w


def adjoint_matrix(g):
    """
    Matrix of Ad_g on su(2) in the (i, j, k) basis.

    :param g: SU2Element
    :return: 3x3 orthogonal numpy array
    """
    return _rotation(g.array)


def adjoint(g, v):
    """Ad_g v = g v g^{-1}."""
    return AlgebraVector.from_array(_rotation(g.array) @ v.array)


def pairing(a, b):
    """-1/2 tr(ab) computed from the quaternion product of a and b."""
    prod = _qmul(np.concatenate(([0.0], a.array)), np.concatenate(([0.0], b.array)))
    return float(-prod[0])


def exp_algebra(v):
    """
    Group exponential, v -> cos|v| + sin|v| v/|v|.

    :param v: AlgebraVector
    :return: SU2Element
    """
    theta = v.norm()
    # sin(theta)/theta without the removable singularity
    scale = np.sinc(theta / math.pi)
    return SU2Element(math.cos(theta), *(scale * v.array))


def log_group(q, tol=DEFAULT_TOLERANCES.antipode):
    """
    Principal logarithm with |v| in [0, pi).

    :param q: SU2Element
    :param tol: refuse q whose real part lies within tol of -1
    :return: AlgebraVector
    """
    w = q.w
    if w <= -1.0 + tol:
        raise AntipodalLog("log_group is undefined at -1")
    v = q.array[1:]
    s = float(np.linalg.norm(v))
    if s < 1e-15:
        return AlgebraVector.from_array(v / w)
    theta = math.atan2(s, w)
    return AlgebraVector.from_array((theta / s) * v)


def haar_sample(rng):
    """
    Haar-distributed element: a normalized vector of four standard Gaussians.

    :param rng: numpy Generator
    :return: SU2Element
    """
    return SU2Element.from_array(rng.standard_normal(4))


def _check_weight(t):
    if isinstance(t, bool) or not isinstance(t, numbers.Rational):
        raise ValueError("'t' must be an exact rational (int or Fraction)")
    if t < 0 or t > 1:
        raise ValueError("'t' must lie in [0, 1]")


def class_element(t, axis=None, conjugator=None):
    """
    Element of the conjugacy class of diag(e^{i pi t}, e^{-i pi t}).

    :param t: exact rational in [0, 1]
    :param axis: AlgebraVector giving the direction of the imaginary part
    :param conjugator: SU2Element g; the result is g (cos pi t + sin pi t i) g^{-1}
    :return: SU2Element with half_trace = cos(pi t)
    """
    _check_weight(t)
    if axis is not None and conjugator is not None:
        raise ValueError("give either 'axis' or 'conjugator', not both")
    angle = math.pi * float(t)
    if axis is not None:
        norm = axis.norm()
        if norm == 0.0:
            raise ValueError("'axis' must be nonzero")
        return SU2Element(math.cos(angle), *(math.sin(angle) / norm * axis.array))
    base = SU2Element(math.cos(angle), math.sin(angle), 0.0, 0.0)
    if conjugator is None:
        return base
    return conjugator * base * conjugator.inverse()
