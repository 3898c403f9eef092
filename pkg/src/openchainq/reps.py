"""Representations of the Borel halves on the Fock space and on C^2.

A :class:`Rep` is a table of images of the Chevalley generators ``e0, e1``
(positive half), ``f0, f1`` (negative half) and ``k0, k1``. Positive tables
use ``e``, negative tables use ``f``; the two full representations carry
both.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exactq import GenericityError, ParamPoint, as_scalar
from .fock import (FockOp, FockSpace, add, agree_on_window, compose, diagonal,
                   identity, is_zero_on_window, make_generator, scale, tensor, two_matrix)
from .report import Report

REP_NAMES = ("upsilon", "phi", "rho", "rhobar", "rho_minus", "rhobar_minus",
             "phi_minus", "Pi", "rho_r")
E_KEYS = ("e0", "e1")
F_KEYS = ("f0", "f1")
K_KEYS = ("k0", "k1")


@dataclass(frozen=True)
class Rep:
    name: str
    side: str  # "plus", "minus" or "full"
    table: Mapping[str, FockOp]
    q: Fraction
    space: FockSpace
    params: ParamPoint | None = field(default=None, compare=False)

    def __getitem__(self, key: str) -> FockOp:
        if key.endswith("inv"):
            return invert_diagonal(self.table[key[:-3]])
        return self.table[key]

    def has(self, key: str) -> bool:
        return (key[:-3] if key.endswith("inv") else key) in self.table

    @property
    def keys(self) -> tuple[str, ...]:
        return tuple(k for k in E_KEYS + F_KEYS + K_KEYS if k in self.table)

    def replaced(self, **table) -> "Rep":
        new = dict(self.table)
        new.update(table)
        return Rep(self.name, self.side, new, self.q, self.space, self.params)


def invert_diagonal(k: FockOp) -> FockOp:
    cols = {}
    for b in k.dom.basis:
        v = k.cols.get(b, {}).get(b, 0)
        if not v or len(k.cols.get(b, {})) != 1:
            raise GenericityError("Cartan image is not an invertible diagonal")
        cols[b] = {b: 1 / v}
    return FockOp(k.dom, cols, **k.meta())


def _fock_space(space) -> FockSpace:
    if isinstance(space, int):
        return FockSpace(space, ("W",))
    if space.layout != ("W",):
        raise ValueError("representations act on a single Fock leg")
    return space


def build_rep(name: str, params: ParamPoint, space) -> Rep:
    """Build one of the named representations.

    ``space`` is a single-leg Fock space or a truncation ``N``; ``Pi`` always
    acts on C^2 (the truncation is carried along for tensor products).
    """
    q, u = params.q, params.u
    c = 1 / (1 - q * q)
    if name == "Pi":
        n = space if isinstance(space, int) else space.n
        two = FockSpace(n, ("C2",))
        lower = two_matrix(two, 0, [[0, 0], [1, 0]])
        upper = two_matrix(two, 0, [[0, 1], [0, 0]])
        table = {
            "e0": lower, "e1": upper, "f0": upper, "f1": lower,
            "k0": two_matrix(two, 0, [[1 / q, 0], [0, q]]),
            "k1": two_matrix(two, 0, [[q, 0], [0, 1 / q]]),
        }
        return Rep(name, "full", table, q, two, params)

    w = _fock_space(space)
    a = make_generator("a", 0, w)
    ad = make_generator("adag", 0, w, q)
    ab = make_generator("abardag", 0, w, q)
    zero = FockOp(w, {})

    def kd(coef, step, shift=0):
        return diagonal(w, lambda b: coef * q ** (step * b[0] + shift))

    if name == "upsilon":
        lower = compose(a, diagonal(w, lambda b: q * q * c * (u**-2 - u * u * q ** (-2 * b[0]))))
        raise_ = scale(ad, c)
        table = {"e0": raise_, "f1": raise_, "e1": lower, "f0": lower,
                 "k0": kd(u**-2, 2, 1), "k1": kd(u * u, -2, -1)}
        return Rep(name, "full", table, q, w, params)
    if name == "phi":
        table = {"e0": zero, "e1": scale(a, q * c), "k0": kd(u * u, 2, 1), "k1": kd(u**-2, -2, -1)}
        return Rep(name, "plus", table, q, w, params)
    if name == "rho":
        table = {"e0": scale(ad, c), "e1": scale(a, q * q * c), "k0": kd(1, 2), "k1": kd(1, -2)}
        return Rep(name, "plus", table, q, w, params)
    if name == "rho_r":
        r = params.r
        table = {"e0": scale(ad, c), "e1": scale(a, q * q * c), "k0": kd(r, 2), "k1": kd(1 / r, -2)}
        return Rep(name, "plus", table, q, w, params)
    if name == "rhobar":
        table = {"e0": scale(ab, q * q * c), "e1": scale(a, c), "k0": kd(1, 2, 2), "k1": kd(1, -2, -2)}
        return Rep(name, "plus", table, q, w, params)
    if name == "rho_minus":
        table = {"f0": scale(a, q * q * c), "f1": scale(ad, c), "k0": kd(1, 2), "k1": kd(1, -2)}
        return Rep(name, "minus", table, q, w, params)
    if name == "rhobar_minus":
        table = {"f0": scale(a, c), "f1": scale(ab, q * q * c), "k0": kd(1, 2, 2), "k1": kd(1, -2, -2)}
        return Rep(name, "minus", table, q, w, params)
    if name == "phi_minus":
        table = {"f0": scale(a, q * c), "f1": zero, "k0": kd(u * u, 2, 1), "k1": kd(u**-2, -2, -1)}
        return Rep(name, "minus", table, q, w, params)
    raise ValueError(f"unknown representation {name!r}")


def trivial_rep(q, n: int = 0) -> Rep:
    """The one-dimensional representation: ``e, f -> 0`` and ``k -> 1``."""
    space = FockSpace(n, ())
    one = identity(space)
    zero = FockOp(space, {})
    table = {"e0": zero, "e1": zero, "f0": zero, "f1": zero, "k0": one, "k1": one}
    return Rep("trivial", "full", table, as_scalar(q), space)


def grading_shift(rep: Rep, z) -> Rep:
    """Principal grading shift: ``e_i -> z e_i``, ``f_i -> z^{-1} f_i``."""
    return graded(rep, z, z)


def graded(rep: Rep, z0, z1) -> Rep:
    """Shift with independent factors for the two nodes."""
    zs = (as_scalar(z0), as_scalar(z1))
    new = {}
    for key, op in rep.table.items():
        i = int(key[1])
        if key[0] == "e":
            new[key] = scale(op, zs[i])
        elif key[0] == "f":
            new[key] = scale(op, 1 / zs[i])
        else:
            new[key] = op
    return Rep(rep.name, rep.side, new, rep.q, rep.space, rep.params)


def psi_twist(rep: Rep) -> Rep:
    """Precompose with the anti-diagonal twist.

    The twist exchanges ``e_i`` with ``f_{1-i}`` and sends ``k_i`` to
    ``k_{1-i}^{-1}``; a positive table becomes a negative one and vice versa.
    """
    new = {}
    for key, op in rep.table.items():
        i = int(key[1])
        if key[0] == "e":
            new[f"f{1 - i}"] = op
        elif key[0] == "f":
            new[f"e{1 - i}"] = op
    for i in (0, 1):
        new[f"k{i}"] = invert_diagonal(rep.table[f"k{1 - i}"])
    side = {"plus": "minus", "minus": "plus", "full": "full"}[rep.side]
    return Rep(rep.name + "_psi", side, new, rep.q, rep.space, rep.params)


def coaction(rep_a: Rep, rep_b: Rep, gen: str, opposite: bool = False) -> FockOp:
    """Image of a generator under the (opposite) coproduct.

    ``e -> e (x) 1 + k (x) e``, ``f -> f (x) k^{-1} + 1 (x) f`` and
    ``k -> k (x) k``; the opposite coproduct swaps the tensor factors.
    """
    ia, ib = identity(rep_a.space), identity(rep_b.space)
    i = gen[1]
    k = f"k{i}"
    if gen[0] == "k":
        return tensor(rep_a[gen], rep_b[gen])
    if gen[0] == "e":
        if not opposite:
            return add(tensor(rep_a[gen], ib), tensor(rep_a[k], rep_b[gen]))
        return add(tensor(ia, rep_b[gen]), tensor(rep_a[gen], rep_b[k]))
    if gen[0] == "f":
        kinv = k + "inv"
        if not opposite:
            return add(tensor(rep_a[gen], rep_b[kinv]), tensor(ia, rep_b[gen]))
        return add(tensor(rep_a[kinv], rep_b[gen]), tensor(rep_a[gen], ib))
    raise ValueError(f"unknown generator {gen!r}")


def qcommutator(x: FockOp, y: FockOp, p=1) -> FockOp:
    """``[x, y]_p = x y - p y x``."""
    return add(compose(x, y), compose(y, x), -as_scalar(p))


def _relations(rep: Rep) -> list[tuple[str, FockOp]]:
    q = rep.q
    out = []
    out.append(("k0 k1 = k1 k0", qcommutator(rep["k0"], rep["k1"])))
    for letter, same in (("e", q * q), ("f", 1 / (q * q))):
        if letter == "e" and rep.side == "minus" or letter == "f" and rep.side == "plus":
            continue
        for i in (0, 1):
            for j in (0, 1):
                x = rep[f"{letter}{j}"]
                factor = same if i == j else 1 / same
                out.append((f"k{i} {letter}{j} = {factor} {letter}{j} k{i}",
                            add(compose(rep[f"k{i}"], x), compose(x, rep[f"k{i}"]), -factor)))
        for i in (0, 1):
            xi, xj = rep[f"{letter}{i}"], rep[f"{letter}{1 - i}"]
            inner = qcommutator(xi, xj, q * q)
            serre = qcommutator(xi, qcommutator(xi, inner, 1), 1 / (q * q))
            out.append((f"Serre {letter}{i}{letter}{1 - i}", serre))
    if rep.side == "full":
        for i in (0, 1):
            for j in (0, 1):
                comm = qcommutator(rep[f"e{i}"], rep[f"f{j}"])
                if i == j:
                    rhs = scale(add(rep[f"k{i}"], rep[f"k{i}inv"], -1), 1 / (q - 1 / q))
                    comm = add(comm, rhs, -1)
                out.append((f"[e{i}, f{j}]", comm))
    return out


def check_serre(rep: Rep) -> Report:
    """Check the defining relations of the relevant half (or whole) algebra.

    Cartan conjugation, the cubic q-Serre relations and, for the two full
    representations, the cross relations between ``e`` and ``f``.
    """
    report = Report(suite=f"relations:{rep.name}", anchor="defining relations")
    for name, op in _relations(rep):
        report.record(name, is_zero_on_window(op))
    return report


def degree_operator(rep: Rep, base) -> FockOp:
    """``base^D``, with ``D`` the Fock index (or 0/1 on C^2)."""
    base = as_scalar(base)
    return diagonal(rep.space, lambda b: base ** (b[0] if b else 0))


def general_grading_identity(rep: Rep, s0: int, s1: int, zz) -> Report:
    """Compare the ``(s0, s1)``-graded shift at ``z = Z^2`` with a conjugated
    principal shift ``Ad(Z^{(s0-s1)D}) o pi_{Z^{s0+s1}}``."""
    zz = as_scalar(zz)
    z = zz * zz
    report = Report(suite=f"grading:{rep.name}:{s0},{s1}", anchor="grading identity")
    lhs = graded(rep, z**s0, z**s1)
    principal = grading_shift(rep, zz ** (s0 + s1))
    conj = degree_operator(rep, zz ** (s0 - s1))
    conj_inv = degree_operator(rep, zz ** (s1 - s0))
    for key in rep.keys:
        rhs = compose(conj, compose(principal[key], conj_inv))
        report.record(key, agree_on_window(lhs[key], rhs))
    return report


def tables_equal(a: Rep, b: Rep) -> Report:
    report = Report(suite=f"table:{a.name}={b.name}", anchor="twisted tables")
    if set(a.table) != set(b.table):
        report.record("generator sets", False)
        return report
    for key in sorted(a.table):
        report.record(key, agree_on_window(a[key], b[key]))
    return report


def weight_check(rep: Rep) -> Report:
    """``k0 k1`` must act as a scalar (the level is zero)."""
    report = Report(suite=f"weights:{rep.name}", anchor="weight decomposition")
    prod = compose(rep["k0"], rep["k1"])
    report.record("k0 k1 = 1", agree_on_window(prod, identity(rep.space)))
    return report
