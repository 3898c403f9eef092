"""Exact rational scalars, q-special functions and parameter points.

Every quantity in the package is a :class:`fractions.Fraction`. The
deformation parameter enters through ``q`` and ``p = q**2``; the weight
parameter enters only through ``u = q**(mu/2)`` so that ``q**mu == u**2``
stays rational.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction


class InadmissibleError(ValueError):
    """A parameter point violates an admissibility requirement."""


class GenericityError(InadmissibleError):
    """A denominator that must be nonzero vanished at the chosen point."""


class SamplingExhausted(InadmissibleError):
    """No admissible point was found within the retry budget."""


class NotNilpotentError(ValueError):
    """A matrix passed to a truncating q-exponential is not nilpotent."""


def as_scalar(value) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


def format_scalar(x: Fraction) -> str:
    """Serialise a scalar as ``num/den`` (denominator always written)."""
    x = as_scalar(x)
    return f"{x.numerator}/{x.denominator}"


def q_pochhammer(x, p, n: int) -> Fraction:
    """The q-Pochhammer symbol ``(x; p)_n`` for any integer ``n``.

    For ``n >= 0`` this is ``prod_{m=0}^{n-1} (1 - x p^m)``; for ``n < 0`` it
    is ``prod_{m=n}^{-1} (1 - x p^m)^{-1}``.

    Raises
    ------
    GenericityError
        If a factor that must be inverted vanishes; the message names ``m``.
    """
    x, p = as_scalar(x), as_scalar(p)
    if p == 0 and n < 0:
        raise GenericityError("q_pochhammer: p = 0 with negative index")
    result = Fraction(1)
    if n >= 0:
        pm = Fraction(1)
        for _ in range(n):
            result *= 1 - x * pm
            pm *= p
        return result
    for m in range(n, 0):
        factor = 1 - x * p**m
        if factor == 0:
            raise GenericityError(f"q_pochhammer: factor m={m} vanishes")
        result *= factor
    return 1 / result


# dense square matrices are lists of lists of Fractions

def mat_identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a, b) -> list[list[Fraction]]:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if inner else 0
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += aik * bk[j]
    return out


def mat_is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def _qexp_series(p, m, weight) -> list[list[Fraction]]:
    p = as_scalar(p)
    n = len(m)
    result = mat_identity(n)
    power = mat_identity(n)
    poch = Fraction(1)
    k = 0
    while True:
        power = mat_mul(power, m)
        if mat_is_zero(power):
            return result
        k += 1
        if k > n:
            raise NotNilpotentError(f"matrix power {k} nonzero at dimension {n}")
        poch *= 1 - p**k
        if poch == 0:
            raise GenericityError(f"(p;p)_{k} vanishes")
        c = weight(k) / poch
        for i in range(n):
            for j in range(n):
                if power[i][j]:
                    result[i][j] += c * power[i][j]


def qexp_nilpotent(p, m) -> list[list[Fraction]]:
    """``e_p(M) = sum_k M^k / (p;p)_k`` for a nilpotent square matrix ``M``.

    The sum stops at the first vanishing power; a power that is still nonzero
    beyond the dimension raises :class:`NotNilpotentError`.
    """
    return _qexp_series(p, m, lambda k: Fraction(1))


def qexp_big_nilpotent(p, m) -> list[list[Fraction]]:
    """``E_p(M) = sum_k p^{k(k-1)/2} M^k / (p;p)_k`` for nilpotent ``M``."""
    p = as_scalar(p)
    return _qexp_series(p, m, lambda k: p ** (k * (k - 1) // 2))


@dataclass(frozen=True)
class ParamPoint:
    """A rational sample of all continuous parameters.

    ``u`` stands for ``q**(mu/2)``. ``spectral`` holds named spectral values
    (``z``, ``y``, ``w``, ...), kept as a sorted tuple of pairs so that the
    point is hashable.
    """

    q: Fraction
    u: Fraction
    xi: Fraction
    xitilde: Fraction
    r: Fraction
    spectral: tuple[tuple[str, Fraction], ...] = field(default=())

    @property
    def p(self) -> Fraction:
        return self.q * self.q

    def s(self, name: str) -> Fraction:
        for key, value in self.spectral:
            if key == name:
                return value
        raise KeyError(f"spectral value {name!r} not sampled")

    def with_values(self, **values) -> "ParamPoint":
        """Return a copy with core fields and/or spectral values replaced."""
        core = {k: as_scalar(v) for k, v in values.items() if k in _CORE}
        spec = dict(self.spectral)
        spec.update({k: as_scalar(v) for k, v in values.items() if k not in _CORE})
        return replace(self, spectral=tuple(sorted(spec.items())), **core)

    def to_dict(self) -> dict[str, str]:
        out = {k: format_scalar(getattr(self, k)) for k in _CORE}
        out.update({k: format_scalar(v) for k, v in self.spectral})
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "ParamPoint":
        core = {k: as_scalar(data[k]) for k in _CORE}
        spec = tuple(sorted((k, as_scalar(v)) for k, v in data.items() if k not in _CORE))
        return cls(spectral=spec, **core)


_CORE = ("q", "u", "xi", "xitilde", "r")
SPECTRAL_NAMES = ("z", "y", "w", "x")


def k_bound(n_max: int) -> int:
    """Range of exponents the admissibility certificates must cover."""
    return 4 * (n_max + 4)


@dataclass(frozen=True)
class Admissibility:
    """Constraints for :func:`sample_params`.

    ``fixed`` pins named values (core or spectral); ``n_max`` is the largest
    truncation the point will be used with.
    """

    n_max: int = 12
    fixed: Mapping[str, object] = field(default_factory=dict)
    spectral: tuple[str, ...] = SPECTRAL_NAMES
    max_retries: int = 64


def certificates(point: ParamPoint, n_max: int) -> dict[str, bool]:
    """Evaluate the admissibility certificates of a point.

    Every denominator produced by the closed-form operators has the shape
    ``1 - c * q^k * x^(+-2)`` with ``c`` a monomial in ``u, xi, xitilde, r``
    and ``x`` a spectral argument (possibly rescaled by ``u`` or combined with
    another spectral value). A point is admitted when no such product equals
    an integer power of ``q`` within the bound.
    """
    q = point.q
    bound = k_bound(n_max)
    values = {"q": q, "u": point.u, "xi": point.xi, "xitilde": point.xitilde, "r": point.r}
    values.update(dict(point.spectral))
    certs = {f"nonzero:{k}": v != 0 for k, v in values.items()}
    certs["q-not-unit"] = q not in (0, 1, -1)
    if not all(certs.values()):
        return certs
    powers = {q**k for k in range(-2 * bound, 2 * bound + 1)}
    certs["q-not-root-of-unity"] = all(q**k != 1 for k in range(1, bound + 1))

    u, xi, xt, r = point.u, point.xi, point.xitilde, point.r
    spec = [v for _, v in point.spectral]
    args = set(spec)
    for i, a in enumerate(spec):
        for j, b in enumerate(spec):
            args.add(a * b)
            if i != j:
                args.add(a / b)
    scaled = set()
    for a in args:
        for s in (1, u, 1 / u):
            scaled.add(a * s)
    coeffs = set()
    for c1 in (1, xi, 1 / xi, xt, 1 / xt):
        for c2 in (1, u**2, u**-2):
            for c3 in (1, r, 1 / r):
                coeffs.add(c1 * c2 * c3)
    ok = True
    for x in scaled:
        x2 = x * x
        for c in coeffs:
            if c * x2 in powers or c / x2 in powers:
                ok = False
                break
        if not ok:
            break
    certs["spectral-generic"] = ok
    certs["weights-generic"] = all(c not in powers for c in coeffs if c != 1)
    return certs


def check_admissible(point: ParamPoint, n_max: int) -> None:
    """Raise :class:`InadmissibleError` naming the first failed certificate."""
    for name, ok in certificates(point, n_max).items():
        if not ok:
            raise InadmissibleError(f"certificate {name} fails at {point.to_dict()}")


_Q_CHOICES = tuple(Fraction(a, b) for a in (1, 2, 3, 4) for b in (1, 2, 3, 4)
                   if a != b and Fraction(a, b) not in (0, 1))
_PRIMES = {"u": 5, "xi": 7, "xitilde": 11, "r": 13}
_SPECTRAL_PRIMES = (17, 19, 23, 29, 31, 37, 41, 43)


def _draw(rng: random.Random, prime: int) -> Fraction:
    # a private prime factor keeps accidental multiplicative relations away
    cofactor = Fraction(rng.choice((1, 2, 3)), rng.choice((1, 2, 3)))
    return rng.choice((1, -1)) * cofactor * Fraction(prime) ** rng.choice((1, -1))


def sample_params(seed: int, constraints: Admissibility | None = None) -> ParamPoint:
    """Draw a deterministic admissible parameter point.

    The same ``(seed, constraints)`` always yields the same point. Each
    parameter other than ``q`` carries its own prime factor, so generic
    candidates are the norm; candidates failing a certificate are redrawn up
    to ``constraints.max_retries`` times.
    """
    c = constraints or Admissibility()
    if len(c.spectral) > len(_SPECTRAL_PRIMES):
        raise ValueError("too many spectral names")
    rng = random.Random(f"openchainq:{seed}")
    fixed = {k: as_scalar(v) for k, v in c.fixed.items()}
    last = None
    for _ in range(c.max_retries):
        core = {"q": rng.choice((1, -1)) * rng.choice(_Q_CHOICES)}
        for k, prime in _PRIMES.items():
            core[k] = _draw(rng, prime)
        spec = {k: _draw(rng, prime) for k, prime in zip(c.spectral, _SPECTRAL_PRIMES)}
        for k, v in fixed.items():
            (core if k in _CORE else spec)[k] = v
        point = ParamPoint(spectral=tuple(sorted(spec.items())), **core)
        certs = certificates(point, c.n_max)
        if all(certs.values()):
            return point
        last = [k for k, ok in certs.items() if not ok]
    raise SamplingExhausted(f"no admissible point after {c.max_retries} draws; last failures {last}")


def sample_points(seed: int, count: int, constraints: Admissibility | None = None) -> list[ParamPoint]:
    """``count`` independent points derived from one seed."""
    return [sample_params(seed * 1009 + t, constraints) for t in range(count)]


def scalars(values: Iterable) -> list[Fraction]:
    return [as_scalar(v) for v in values]
