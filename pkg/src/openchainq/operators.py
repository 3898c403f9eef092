"""Closed-form L-, K-, R-operators, the intertwiner O and the fusion maps.

All operators are built exactly at a :class:`ParamPoint`. L-operators act on
``W (x) C2`` as 2x2 matrices with entries in End(W): the ``(s, t)`` entry sends
``w (x) v_t`` to ``(L_st w) (x) v_s``. K-operators are diagonal on W (or on
C^2 for ``Pi``). R-operators and O are block-preserving on ``W (x) W`` and
are assembled block by block from truncating q-exponentials.
"""
from __future__ import annotations

from fractions import Fraction

from .exactq import (GenericityError, ParamPoint, as_scalar, mat_mul,
                     q_pochhammer, qexp_nilpotent)
from .fock import (FockOp, FockSpace, compose, diagonal, flip_legs,
                   from_blocks, from_c2_blocks, invert, make_generator, two_matrix)
from .linalg import mat_inverse

K_REPS = ("rho", "rhobar", "upsilon", "phi", "Pi")
L_REPS = ("rho", "rhobar", "upsilon", "phi")


def _w(n: int) -> FockSpace:
    return FockSpace(n, ("W",))


def _wc(n: int) -> FockSpace:
    return FockSpace(n, ("W", "C2"))


def _ww(n: int) -> FockSpace:
    return FockSpace(n, ("W", "W"))


def _nonzero(x: Fraction, what: str) -> Fraction:
    if x == 0:
        raise GenericityError(f"{what} vanishes")
    return x


# -- L-operators ------------------------------------------------------

def _l_entries(name: str, params: ParamPoint, z, n: int) -> dict:
    q, u = params.q, params.u
    z = as_scalar(z)
    w = _w(n)
    a = make_generator("a", 0, w)
    ad = make_generator("adag", 0, w, q)
    ab = make_generator("abardag", 0, w, q)

    def d(f):
        return diagonal(w, lambda b: f(b[0]))

    if name == "rho":
        return {(0, 0): d(lambda j: q**j),
                (0, 1): compose(ad, d(lambda j: q ** (-j - 1) * z)),
                (1, 0): compose(a, d(lambda j: q ** (j + 1) * z)),
                (1, 1): d(lambda j: q**-j - q ** (j + 2) * z * z)}
    if name == "rhobar":
        return {(0, 0): d(lambda j: q ** (j + 1) - q ** (1 - j) * z * z),
                (0, 1): compose(ab, d(lambda j: q**-j * z)),
                (1, 0): compose(a, d(lambda j: q**j * z)),
                (1, 1): d(lambda j: q ** (-j - 1))}
    if name == "upsilon":
        return {(0, 0): d(lambda j: q**j - q**-j * u * u * z * z),
                (0, 1): compose(ad, d(lambda j: q ** (-j - 2) * u * u * z)),
                (1, 0): compose(a, d(lambda j: q * z * (q**j / (u * u) - q**-j * u * u))),
                (1, 1): d(lambda j: q ** (-j - 1) * u * u - q ** (j + 1) * z * z)}
    if name == "phi":
        return {(0, 0): d(lambda j: q ** (j + 1)),
                (1, 0): compose(a, d(lambda j: q ** (j + 1) * z)),
                (1, 1): d(lambda j: q**-j / (u * u))}
    raise ValueError(f"no L-operator for {name!r}")


def build_L(name: str, params: ParamPoint, z, n: int, variant: str = "plus") -> FockOp:
    """L-operator of ``name`` at spectral value ``z`` on truncation ``n``.

    ``variant`` is ``"plus"`` (on ``W (x) C2``), ``"minus"`` (the leg-flipped
    operator on ``C2 (x) W``) or ``"tilde"`` (the inverse of the plus operator
    at ``q^2 z``, on ``W (x) C2``).
    """
    if variant == "plus":
        return from_c2_blocks(_l_entries(name, params, z, n), _wc(n))
    if variant == "minus":
        return flip_legs(build_L(name, params, z, n))
    if variant == "tilde":
        return invert(build_L(name, params, params.q**2 * as_scalar(z), n))
    raise ValueError(f"unknown L variant {variant!r}")


# -- K-operators ------------------------------------------------------

def _k_right(name: str, params: ParamPoint, z):
    q, u, xi = params.q, params.u, params.xi
    p = q * q
    z2 = z * z
    if name == "rho":
        return lambda j: (-(q**-j) * xi) ** j * q_pochhammer(p / xi * z2, p, j)
    if name == "rhobar":
        return lambda j: (q * z2) ** -j / _nonzero(q_pochhammer(p / (xi * z2), p, j), "K denominator")
    if name == "upsilon":
        c = p / (u * u * xi)
        return lambda j: z2**-j * q_pochhammer(c * z2, p, j) / _nonzero(q_pochhammer(c / z2, p, j), "K denominator")
    if name == "phi":
        return lambda j: (-(q ** (-j - 1)) * xi / (u * u)) ** j
    raise ValueError(f"no K-operator for {name!r}")


def _k_left(name: str, params: ParamPoint, z):
    q, u, xt = params.q, params.u, params.xitilde
    p = q * q
    z2 = z * z
    if name == "rho":
        return lambda j: (-(q**j) * xt) ** j / _nonzero(q_pochhammer(p * p * xt * z2, p, j), "K denominator")
    if name == "rhobar":
        return lambda j: (q**3 * z2) ** j * q_pochhammer(xt / z2, p, j)
    if name == "upsilon":
        c = xt / (u * u)
        return lambda j: (q * q * z2) ** j * q_pochhammer(c / z2, p, j) / _nonzero(q_pochhammer(p * p * c * z2, p, j), "K denominator")
    if name == "phi":
        return lambda j: (-(q ** (j + 1)) * u * u * xt) ** j
    raise ValueError(f"no K-operator for {name!r}")


def k_pi_matrix(params: ParamPoint, z, side: str = "right") -> list[list[Fraction]]:
    z = as_scalar(z)
    q, z2 = params.q, z * z
    if side == "right":
        xi = params.xi
        return [[xi * z2 - 1, 0], [0, xi - z2]]
    xt = params.xitilde
    return [[q * q * xt * z2 - 1, 0], [0, xt - q * q * z2]]


def k_diagonal(name: str, params: ParamPoint, z, n: int, side: str = "right") -> list[Fraction]:
    """Diagonal entries ``K(z) w_j`` for ``j = 0 .. n``."""
    z = as_scalar(z)
    f = _k_right(name, params, z) if side == "right" else _k_left(name, params, z)
    return [f(j) for j in range(n + 1)]


def build_K(name: str, params: ParamPoint, z, n: int, side: str = "right") -> FockOp:
    """Diagonal K-operator for ``name`` in ``rho, rhobar, upsilon, phi, Pi``.

    ``side="left"`` gives the left-boundary operator, which uses ``xitilde``.
    Every Fock K-operator fixes ``w_0``.
    """
    if name == "Pi":
        return two_matrix(FockSpace(n, ("C2",)), 0, k_pi_matrix(params, z, side))
    if side not in ("right", "left"):
        raise ValueError(f"unknown side {side!r}")
    values = k_diagonal(name, params, z, n, side)
    return diagonal(_w(n), lambda b: values[b[0]])


# -- block-preserving operators on W (x) W ----------------------------

def block_matrix(m: int, action) -> list[list[Fraction]]:
    """Matrix on block ``m`` of ``(j1, j2) -> {(j1', j2'): coeff}``."""
    basis = [(j, m - j) for j in range(m + 1)]
    pos = {b: i for i, b in enumerate(basis)}
    mat = [[Fraction(0)] * (m + 1) for _ in basis]
    for jc, b in enumerate(basis):
        for o, v in action(*b).items():
            if o in pos and v:
                mat[pos[o]][jc] += v
    return mat


def diag_block(m: int, f) -> list[list[Fraction]]:
    mat = [[Fraction(0)] * (m + 1) for _ in range(m + 1)]
    for j in range(m + 1):
        mat[j][j] = as_scalar(f(j, m - j))
    return mat


def lower1_raise2(q, c):
    """Action of ``c a_1 abar^dag_2`` on ``(j1, j2)``."""
    def act(j1, j2):
        if j1 == 0:
            return {}
        return {(j1 - 1, j2 + 1): c * (1 - q ** (-2 * (j2 + 1)))}
    return act


def raise1_lower2(q, c):
    """Action of ``c a^dag_1 a_2`` on ``(j1, j2)``."""
    def act(j1, j2):
        if j2 == 0:
            return {}
        return {(j1 + 1, j2 - 1): c * (1 - q ** (2 * (j1 + 1)))}
    return act


def barraise1_lower2(q, c):
    """Action of ``c abar^dag_1 a_2`` on ``(j1, j2)``."""
    def act(j1, j2):
        if j2 == 0:
            return {}
        return {(j1 + 1, j2 - 1): c * (1 - q ** (-2 * (j1 + 1)))}
    return act


def qexp_block(p, m: int, action) -> list[list[Fraction]]:
    """``e_p`` of a nilpotent block-preserving generator on block ``m``."""
    return qexp_nilpotent(p, block_matrix(m, action))


def blockwise(n: int, builder, top: int | None = None) -> FockOp:
    """Block-preserving operator on ``W (x) W`` from ``builder(m)``."""
    top = n if top is None else top
    return from_blocks(_ww(n), {m: builder(m) for m in range(top + 1)})


def r_blocks(pair: str, params: ParamPoint, z):
    """Block builder ``m -> matrix`` of the R-operator for ``pair`` at ``z``."""
    q, u = params.q, params.u
    p = q * q
    z = as_scalar(z)
    if pair == "upsilon_phi":
        def build(m):
            e = qexp_block(p, m, raise1_lower2(q, z))
            d = diag_block(m, lambda j1, j2: u ** (2 * (j2 - j1)) * q ** ((j1 - j2) - 2 * j1 * (j2 + 1)))
            return mat_mul(e, d)
        return build
    if pair == "rho_rhobar":
        def build(m):
            e1 = qexp_block(p, m, lower1_raise2(q, q**3 * z))
            e2 = qexp_block(p, m, raise1_lower2(q, z / q))
            d = diag_block(m, lambda j1, j2: q ** (-2 * j1 * (j2 + 1)))
            return mat_mul(e1, mat_mul(e2, d))
        return build
    raise ValueError(f"unknown R pair {pair!r}")


def build_R(pair: str, params: ParamPoint, z, n: int, tilde: bool = False, top: int | None = None) -> FockOp:
    """R-operator for ``pair`` in ``upsilon_phi``, ``rho_rhobar``.

    ``tilde=True`` gives the inverse of the operator at ``q^2 z``.
    """
    z = as_scalar(z)
    if tilde:
        build = r_blocks(pair, params, params.q**2 * z)
        return blockwise(n, lambda m: mat_inverse(build(m)), top)
    return blockwise(n, r_blocks(pair, params, z), top)


def build_O(params: ParamPoint, n: int, variant: str = "O", top: int | None = None) -> FockOp:
    """The intertwiner O on ``W (x) W``.

    ``variant`` is ``"O"``, ``"O21"`` (its leg flip) or ``"O_inverse"``.
    """
    q, u = params.q, params.u
    p = q * q

    def weights(sign):
        return lambda m: diag_block(m, lambda j1, j2: u ** (sign * (j1 - j2)))

    if variant == "O":
        return blockwise(n, lambda m: mat_mul(mat_inverse(qexp_block(p, m, lower1_raise2(q, p))), weights(1)(m)), top)
    if variant == "O_inverse":
        return blockwise(n, lambda m: mat_mul(weights(-1)(m), qexp_block(p, m, lower1_raise2(q, p))), top)
    if variant == "O21":
        return blockwise(n, lambda m: mat_mul(mat_inverse(qexp_block(p, m, barraise1_lower2(q, p))), weights(-1)(m)), top)
    raise ValueError(f"unknown O variant {variant!r}")


# -- fusion maps ------------------------------------------------------

def build_fusion(kind: str, params: ParamPoint, n: int, r=None) -> FockOp:
    """The fusion maps ``iota(r): W -> W (x) C2`` and ``tau(r): W (x) C2 -> W``.

    ``iota(r) w = (q^{-D} a^dag w) (x) v+ - (q^{D+1} r w) (x) v-`` and
    ``tau(r)`` is the row ``(q^D, q^{-D} r^{-1} a^dag)``.
    """
    q = params.q
    r = params.r if r is None else as_scalar(r)
    w, wc = _w(n), _wc(n)
    cols: dict = {}
    if kind == "iota":
        for j in range(n + 1):
            col = {(j, 1): -(q ** (j + 1)) * r}
            if j < n:
                col[(j + 1, 0)] = q ** (-j - 1) * (1 - q ** (2 * j + 2))
            cols[(j,)] = col
        return FockOp(w, cols, cod=wc, raising=(1,), guard=(1,), total_raising=1)
    if kind == "tau":
        for j in range(n + 1):
            cols[(j, 0)] = {(j,): q**j}
            if j < n:
                cols[(j, 1)] = {(j + 1,): q ** (-j - 1) * (1 - q ** (2 * j + 2)) / r}
        return FockOp(wc, cols, cod=w, raising=(1,), guard=(1,), total_raising=1)
    raise ValueError(f"unknown fusion map {kind!r}")


CATALOGUE = {
    "build_L": "Lax operators on W (x) C2 for rho, rhobar, upsilon, phi; minus and tilde variants",
    "build_K": "diagonal right and left boundary operators, closed forms in q-Pochhammer symbols",
    "build_R": "block-preserving R-operators for (upsilon, phi) and (rho, rhobar), with tilde variants",
    "build_O": "factorisation intertwiner, its leg flip and its inverse",
    "build_fusion": "inclusion iota(r) and projection tau(r) of the fusion sequence",
}
