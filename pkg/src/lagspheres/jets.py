"""Second-order jets in two chart variables.

A :class:`Jet2` carries a value together with its first and second
partial derivatives with respect to two chart coordinates ``(u1, u2)``.
Arithmetic and the elementary functions propagate the derivatives with
the product and chain rules, so a closed-form chart map written in terms
of jets returns exact 2-jets (up to floating point rounding).

Components are numpy arrays and broadcast like numpy arrays, so one jet
can hold a whole grid of points.  Complex dtypes are allowed; derivatives
are always with respect to the real chart variables.
"""

from __future__ import annotations

import numpy as np

_FIELDS = ("v", "d1", "d2", "d11", "d12", "d22")


class Jet2:
    """Truncated second-order Taylor data ``(v, d1, d2, d11, d12, d22)``."""

    __slots__ = _FIELDS
    __array_priority__ = 1000

    def __init__(self, v, d1=0.0, d2=0.0, d11=0.0, d12=0.0, d22=0.0):
        self.v = np.asarray(v)
        self.d1 = np.asarray(d1)
        self.d2 = np.asarray(d2)
        self.d11 = np.asarray(d11)
        self.d12 = np.asarray(d12)
        self.d22 = np.asarray(d22)

    @classmethod
    def variable(cls, value, index: int) -> "Jet2":
        """Seed the chart coordinate ``u1`` (index 1) or ``u2`` (index 2)."""
        value = np.asarray(value, dtype=float)
        one, zero = np.ones_like(value), np.zeros_like(value)
        if index == 1:
            return cls(value, one, zero, zero, zero, zero)
        if index == 2:
            return cls(value, zero, one, zero, zero, zero)
        raise ValueError(f"chart variable index must be 1 or 2, got {index}")

    @classmethod
    def constant(cls, value) -> "Jet2":
        return cls(value)

    @classmethod
    def stack(cls, jets, axis: int = -1) -> "Jet2":
        """Stack scalar jets into a vector-valued jet along ``axis``."""
        jets = [j if isinstance(j, Jet2) else Jet2(j) for j in jets]
        shape = np.broadcast_shapes(*(c.shape for j in jets for c in j.components()))
        return cls(*(
            np.stack([np.broadcast_to(getattr(j, name), shape) for j in jets], axis=axis)
            for name in _FIELDS
        ))

    def components(self):
        return tuple(getattr(self, name) for name in _FIELDS)

    def __getitem__(self, key) -> "Jet2":
        return Jet2(*(np.broadcast_to(c, self.v.shape)[key] for c in self.components()))

    @property
    def shape(self):
        return self.v.shape

    def __repr__(self) -> str:
        return "Jet2(" + ", ".join(f"{n}={getattr(self, n)!r}" for n in _FIELDS) + ")"

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "Jet2":
        return Jet2(*(-c for c in self.components()))

    def __add__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(*(a + b for a, b in zip(self.components(), other.components())))
        return Jet2(self.v + other, self.d1, self.d2, self.d11, self.d12, self.d22)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet2":
        return self + (-other)

    def __rsub__(self, other) -> "Jet2":
        return (-self) + other

    def __mul__(self, other) -> "Jet2":
        if not isinstance(other, Jet2):
            return Jet2(*(c * other for c in self.components()))
        a, b = self, other
        return Jet2(
            a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + a.v * b.d2,
            a.d11 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d11,
            a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.d12,
            a.d22 * b.v + 2.0 * a.d2 * b.d2 + a.v * b.d22,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        r = 1.0 / self.v
        return _chain(self, r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other) -> "Jet2":
        return self.reciprocal() * other

    def __pow__(self, n) -> "Jet2":
        if n == 2:
            return self * self
        if n == 3:
            return self * self * self
        n = float(n)
        v = self.v
        return _chain(self, v**n, n * v ** (n - 1), n * (n - 1) * v ** (n - 2))

    def conj(self) -> "Jet2":
        return Jet2(*(np.conj(c) for c in self.components()))

    @property
    def real(self) -> "Jet2":
        return Jet2(*(np.real(c) for c in self.components()))

    @property
    def imag(self) -> "Jet2":
        return Jet2(*(np.imag(c) for c in self.components()))


def _chain(a: Jet2, f0, f1, f2) -> Jet2:
    """Compose a scalar function with value f0, slope f1, curvature f2."""
    return Jet2(
        f0,
        f1 * a.d1,
        f1 * a.d2,
        f1 * a.d11 + f2 * a.d1 * a.d1,
        f1 * a.d12 + f2 * a.d1 * a.d2,
        f1 * a.d22 + f2 * a.d2 * a.d2,
    )


def _lift(x) -> Jet2:
    return x if isinstance(x, Jet2) else Jet2(x)


def sqrt(a) -> Jet2:
    a = _lift(a)
    r = np.sqrt(a.v)
    return _chain(a, r, 0.5 / r, -0.25 / (r * a.v))


def exp(a) -> Jet2:
    a = _lift(a)
    e = np.exp(a.v)
    return _chain(a, e, e, e)


def log(a) -> Jet2:
    a = _lift(a)
    return _chain(a, np.log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v))


def sin(a) -> Jet2:
    a = _lift(a)
    s, c = np.sin(a.v), np.cos(a.v)
    return _chain(a, s, c, -s)


def cos(a) -> Jet2:
    a = _lift(a)
    s, c = np.sin(a.v), np.cos(a.v)
    return _chain(a, c, -s, -c)


def sinh(a) -> Jet2:
    a = _lift(a)
    s, c = np.sinh(a.v), np.cosh(a.v)
    return _chain(a, s, c, s)


def cosh(a) -> Jet2:
    a = _lift(a)
    s, c = np.sinh(a.v), np.cosh(a.v)
    return _chain(a, c, s, c)


def tanh(a) -> Jet2:
    a = _lift(a)
    t = np.tanh(a.v)
    s2 = 1.0 - t * t
    return _chain(a, t, s2, -2.0 * t * s2)


def arctan(a) -> Jet2:
    a = _lift(a)
    q = 1.0 / (1.0 + a.v * a.v)
    return _chain(a, np.arctan(a.v), q, -2.0 * a.v * q * q)


def artanh(a) -> Jet2:
    a = _lift(a)
    q = 1.0 / (1.0 - a.v * a.v)
    return _chain(a, np.arctanh(a.v), q, 2.0 * a.v * q * q)


def expi(a) -> Jet2:
    """``exp(i a)`` for a real jet ``a``."""
    a = _lift(a)
    e = np.exp(1j * a.v)
    return _chain(a, e, 1j * e, -e)


def dot(a: Jet2, b: Jet2) -> Jet2:
    """Bilinear (never Hermitian) contraction over the trailing axis."""
    return _reduce_last(a * b)


def _reduce_last(a: Jet2) -> Jet2:
    return Jet2(*(np.sum(np.broadcast_to(c, a.v.shape), axis=-1) for c in a.components()))
