"""Registry of identity suites and the runner that evaluates them.

Each suite is a named group of exact comparisons. A suite either compares
operators column by column on their common exactness window, or compares
block matrices of block-preserving operators on ``W (x) W`` for every total
degree ``m <= m_max``. Passing means exact equality; there is no tolerance
anywhere in this module.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactq import (Admissibility, ParamPoint, check_admissible, format_scalar,
                     mat_identity, mat_mul, q_pochhammer, qexp_big_nilpotent, qexp_nilpotent,
                     sample_params)
from .fock import (FockOp, FockSpace, Witness, add, agree_on_window, block_basis,
                   compose, diagonal, embed, flip_legs, identity, invert, is_zero_on_window,
                   make_generator, restrict_to_block, scale, truncation_agrees, two_matrix)
from .linalg import mat_inverse, rank
from .operators import (L_REPS, barraise1_lower2, block_matrix, blockwise, build_fusion, build_K,
                        build_L, build_O, build_R, diag_block, k_pi_matrix, lower1_raise2,
                        qexp_block, raise1_lower2)
from .report import Report
from .reps import (REP_NAMES, build_rep, check_serre, coaction, general_grading_identity,
                   grading_shift, psi_twist, qcommutator, tables_equal, weight_check)
from . import solvers


@dataclass(frozen=True)
class SuiteSpec:
    """One registered suite.

    ``arena`` is ``"window"``, ``"blocks"`` or ``"scalar"``; ``spectral``
    names the spectral values the suite consumes; ``min_n`` is the smallest
    truncation at which its windows are nonempty. Block suites check the
    blocks ``m <= min(m_max, N - block_margin)``; the bound actually used is
    reported as ``max_block``.
    """

    id: str
    anchor: str
    objects: tuple[str, ...]
    arena: str
    spectral: tuple[str, ...]
    check: Callable[["Context"], None] = field(repr=False, compare=False)
    min_n: int = 4
    block_margin: int = 0


@dataclass
class Context:
    params: ParamPoint
    n: int
    m_max: int
    report: Report
    options: dict

    @property
    def q(self) -> Fraction:
        return self.params.q

    @property
    def p(self) -> Fraction:
        return self.params.p

    def s(self, name: str) -> Fraction:
        return self.params.s(name)

    def record(self, name: str, cmp, witness: Witness | None = None) -> bool:
        return self.report.record(name, cmp, witness)


# -- comparison helpers -----------------------------------------------

def _first_diff(mx, my):
    for jc in range(len(mx[0]) if mx else 0):
        if any(mx[i][jc] != my[i][jc] for i in range(len(mx))):
            return jc
    return None


def _col(mat, basis, jc) -> dict:
    return {basis[i]: mat[i][jc] for i in range(len(basis)) if mat[i][jc]}


def _block_fail(ctx: Context, name: str, m: int, basis, mx, my, jc) -> bool:
    ctx.report.details.setdefault("witness_block", m)
    return ctx.record(f"{name} [block {m}]", False,
                      Witness(basis[jc], _col(mx, basis, jc), _col(my, basis, jc)))


def compare_blocks(ctx: Context, name: str, x: FockOp, y: FockOp, top: int) -> bool:
    """Compare two block-preserving operators on every block ``m <= top``."""
    for m in range(top + 1):
        mx, my = restrict_to_block(x, m), restrict_to_block(y, m)
        jc = _first_diff(mx, my)
        if jc is not None:
            return _block_fail(ctx, name, m, block_basis(x.dom, m), mx, my, jc)
    _note_block(ctx, top)
    return ctx.record(f"{name} [blocks <= {top}]", True)


def compare_dense_blocks(ctx: Context, name: str, lhs: Callable[[int], list], rhs: Callable[[int], list],
                         top: int) -> bool:
    """Compare block matrices produced directly by ``lhs(m)`` and ``rhs(m)``."""
    ww = FockSpace(top, ("W", "W"))
    for m in range(top + 1):
        mx, my = lhs(m), rhs(m)
        jc = _first_diff(mx, my)
        if jc is not None:
            return _block_fail(ctx, name, m, block_basis(ww, m), mx, my, jc)
    _note_block(ctx, top)
    return ctx.record(f"{name} [blocks <= {top}]", True)


def _note_block(ctx: Context, top: int) -> None:
    ctx.report.details["max_block"] = max(ctx.report.details.get("max_block", 0), top)


def block_top(ctx: Context, margin: int = 0) -> int:
    return min(ctx.m_max, ctx.n - margin)


def _power(x: FockOp, k: int) -> FockOp:
    out = identity(x.dom)
    for _ in range(k):
        out = compose(x, out)
    return out


def _chain(*ops: FockOp) -> FockOp:
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = compose(op, out)
    return out


# -- q-series ---------------------------------------------------------

def _mat_add(a, b, c=1):
    return [[x + c * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def _nilpotent(dim: int, values: Sequence[Fraction]) -> list[list[Fraction]]:
    # strictly upper triangular with entries built from the sampled values
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            m[i][j] = values[(i + j) % len(values)] ** (j - i) + i - j
    return m


def _lowering(dim: int) -> list[list[Fraction]]:
    return [[Fraction(int(i + 1 == j)) for j in range(dim)] for i in range(dim)]


def _suite_qseries(ctx: Context) -> None:
    p = ctx.p
    values = [ctx.s(k) for k in ("z", "y", "w", "x")]
    for x in values:
        for n in range(7):
            forms = [
                q_pochhammer(x, p, -n),
                1 / q_pochhammer(p**-n * x, p, n),
                1 / q_pochhammer(x / p, 1 / p, n),
                (-x) ** -n * p ** (n * (n + 1) // 2) / q_pochhammer(p / x, p, n),
            ]
            ctx.record(f"negative-index Pochhammer forms n={n}", len(set(forms)) == 1)
    for dim in range(1, 9):
        m = _nilpotent(dim, values)
        e = qexp_nilpotent(p, m)
        ctx.record(f"functional relation dim {dim}",
                   qexp_nilpotent(p, _mat_scale(m, p)) == mat_mul(_mat_add(mat_identity(dim), m, -1), e))
        ctx.record(f"inverse via p^-1 dim {dim}",
                   mat_mul(e, qexp_nilpotent(1 / p, _mat_scale(m, 1 / p))) == mat_identity(dim))
        ctx.record(f"inverse via E dim {dim}",
                   mat_mul(e, qexp_big_nilpotent(p, _mat_scale(m, -1))) == mat_identity(dim))

        # x = alpha a, y = beta p^{-D} a on W truncated to dimension dim
        alpha, beta = values[0], values[1]
        low = _lowering(dim)
        x = _mat_scale(low, alpha)
        pd = [[p ** -i if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]
        y = _mat_scale(mat_mul(pd, low), beta)
        ctx.record(f"y x = p x y dim {dim}", mat_mul(y, x) == _mat_scale(mat_mul(x, y), p))
        ex, ey = qexp_nilpotent(p, x), qexp_nilpotent(p, y)
        one = mat_identity(dim)
        ctx.record(f"sum formula dim {dim}", mat_mul(ex, ey) == qexp_nilpotent(p, _mat_add(x, y)))
        lhs = mat_mul(ey, ex)
        xy = mat_mul(x, y)
        forms = [
            mat_mul(qexp_nilpotent(p, mat_mul(x, _mat_add(one, y, -1))), ey),
            mat_mul(ex, mat_mul(qexp_nilpotent(p, _mat_scale(xy, -1)), ey)),
            mat_mul(ex, qexp_nilpotent(p, mat_mul(_mat_add(one, x, -1), y))),
        ]
        for k, f in enumerate(forms):
            ctx.record(f"reordering form {k + 1} dim {dim}", lhs == f)


# -- oscillator -------------------------------------------------------

class _Osc:
    """Oscillator generators on ``W`` or ``W (x) W`` at one truncation."""

    def __init__(self, n: int, q: Fraction, legs: int):
        self.space = FockSpace(n, ("W",) * legs)
        self.q, self.p = q, q * q

    def a(self, i=0):
        return make_generator("a", i, self.space)

    def ad(self, i=0):
        return make_generator("adag", i, self.space, self.q)

    def ab(self, i=0):
        return make_generator("abardag", i, self.space, self.q)

    def d(self, f, i=0):
        return make_generator("diag", i, self.space, f=f)

    def pd(self, shift=0, sign=1, i=0):
        p = self.p
        return self.d(lambda j: p ** (sign * j + shift), i)

    def one(self):
        return identity(self.space)


def _suite_oscillator(ctx: Context) -> None:
    q, p, n = ctx.q, ctx.p, ctx.n
    y, z = ctx.s("y"), ctx.s("z")
    o = _Osc(n, q, 1)
    a, ad, ab, one = o.a(), o.ad(), o.ab(), o.one()

    def f(j):
        return q_pochhammer(z, p, j) * y**j

    ctx.record("a a^dag = 1 - p^(D+1)", agree_on_window(compose(a, ad), add(one, o.pd(1), -1)))
    ctx.record("a^dag a = 1 - p^D", agree_on_window(compose(ad, a), add(one, o.pd(), -1)))
    ctx.record("a f(D) = f(D+1) a", agree_on_window(compose(a, o.d(f)), compose(o.d(lambda j: f(j + 1)), a)))
    ctx.record("f(D) a^dag = a^dag f(D+1)",
               agree_on_window(compose(o.d(f), ad), compose(ad, o.d(lambda j: f(j + 1)))))
    ctx.record("abar^dag = -q^(-2D) a^dag", agree_on_window(ab, scale(compose(o.pd(sign=-1), ad), -1)))
    for k in range(5):
        c = 1 - p ** (k + 1)
        lhs = qcommutator(_power(a, k + 1), ad)
        ctx.record(f"[a^{k + 1}, a^dag] ladder", agree_on_window(lhs, scale(compose(o.pd(), _power(a, k)), c)))
        lhs = qcommutator(_power(ab, k + 1), a, p ** (k + 1))
        ctx.record(f"[abar^dag^{k + 1}, a] ladder", agree_on_window(lhs, scale(_power(ab, k), c)))

    t = _Osc(n, q, 2)
    a1, a2, ad1, ab1, ab2 = t.a(0), t.a(1), t.ad(0), t.ab(0), t.ab(1)
    e_low = blockwise(n, lambda m: qexp_block(p, m, lower1_raise2(q, y)))
    e_up = blockwise(n, lambda m: qexp_block(p, m, raise1_lower2(q, y)))
    fsum = diagonal(t.space, lambda b: f(b[0] + b[1]))
    for name, x in (("f(D1+D2)", fsum), ("a_1", a1), ("abar^dag_2", ab2)):
        ctx.record(f"[E, {name}] = 0", is_zero_on_window(qcommutator(e_low, x)))
    ctx.record("[E, a^dag_1]", agree_on_window(qcommutator(e_low, ad1),
                                               scale(_chain(t.pd(i=0), ab2, e_low), y)))
    pd1_inv = t.pd(sign=-1, i=0)
    ctx.record("[E, p^-D1 a_2]", agree_on_window(qcommutator(e_low, compose(pd1_inv, a2)),
                                                 scale(_chain(e_low, a1, pd1_inv), y)))
    ctx.record("[abar^dag_2, e(y a^dag_1 a_2)]",
               agree_on_window(qcommutator(ab2, e_up), scale(_chain(e_up, ad1, t.pd(-1, -1, 1)), y)))
    rhs = add(compose(e_low, t.pd(-1, -1, 0)), compose(t.pd(-1, -1, 1), e_low), -1)
    ctx.record("[abar^dag_1 a_2, E]", agree_on_window(qcommutator(compose(ab1, a2), e_low), scale(rhs, y)))

    # products with finite Pochhammer factors, block by block
    top = block_top(ctx)

    def e_pp(m):
        return qexp_block(p, m, lower1_raise2(q, p))

    def poch1(m):
        return diag_block(m, lambda j1, j2: q_pochhammer(y, p, j1))

    def shifted(m):
        return block_matrix(m, lambda j1, j2: lower1_raise2(q, -y * p**j1)(j1, j2))

    compare_dense_blocks(ctx, "e(p a1 abar2) (y;p)_D1",
                         lambda m: mat_mul(e_pp(m), poch1(m)),
                         lambda m: mat_mul(poch1(m), mat_mul(qexp_nilpotent(p, shifted(m)), e_pp(m))),
                         top)

    def inv_poch(leg):
        return lambda m: diag_block(m, lambda j1, j2: 1 / q_pochhammer(p ** (1 - (j1, j2)[leg]) * y, p, (j1, j2)[leg]))

    def e_bar(m):
        return qexp_block(p, m, barraise1_lower2(q, p * y))

    compare_dense_blocks(ctx, "e(p a1 abar2) (p^(1-D1) y;p)^-1 e(p y abar1 a2)",
                         lambda m: mat_mul(e_pp(m), mat_mul(inv_poch(0)(m), e_bar(m))),
                         lambda m: mat_mul(e_bar(m), mat_mul(inv_poch(1)(m), e_pp(m))),
                         top)


# -- window soundness -------------------------------------------------

def _word_alphabet(params: ParamPoint):
    q, p = params.q, params.p
    z, y = params.s("z"), params.s("y")
    ww = lambda n: FockSpace(n, ("W", "W"))
    wc = lambda n: FockSpace(n, ("W", "C2"))
    pair = {
        "a1": lambda n: make_generator("a", 0, ww(n)),
        "a2": lambda n: make_generator("a", 1, ww(n)),
        "adag1": lambda n: make_generator("adag", 0, ww(n), q),
        "adag2": lambda n: make_generator("adag", 1, ww(n), q),
        "abardag1": lambda n: make_generator("abardag", 0, ww(n), q),
        "abardag2": lambda n: make_generator("abardag", 1, ww(n), q),
        "pD1": lambda n: make_generator("diag", 0, ww(n), f=lambda j: p**j),
        "f(D1,D2)": lambda n: diagonal(ww(n), lambda b: y ** b[0] - z ** (2 * b[1])),
        "E": lambda n: blockwise(n, lambda m: qexp_block(p, m, lower1_raise2(q, y))),
        "E^-1": lambda n: invert(blockwise(n, lambda m: qexp_block(p, m, raise1_lower2(q, z)))),
        "R": lambda n: build_R("rho_rhobar", params, z, n),
    }
    mixed = {
        "L_rho": lambda n: build_L("rho", params, z, n),
        "L_rhobar": lambda n: build_L("rhobar", params, y, n),
        "Ltilde_upsilon": lambda n: build_L("upsilon", params, z, n, "tilde"),
        "K_rho": lambda n: embed(build_K("rho", params, y, n), wc(n), (0,)),
        "K_Pi": lambda n: embed(build_K("Pi", params, z, n), wc(n), (1,)),
        "adag": lambda n: make_generator("adag", 0, wc(n), q),
        "a": lambda n: make_generator("a", 0, wc(n)),
    }
    return pair, mixed


def random_words(params: ParamPoint, count: int = 50, max_len: int = 6) -> list[tuple[str, ...]]:
    """Deterministic random operator words; even entries act on ``W (x) W``,
    odd entries on ``W (x) C2``."""
    pair, mixed = _word_alphabet(params)
    rng = random.Random("words:" + json.dumps(params.to_dict(), sort_keys=True))
    words = []
    for k in range(count):
        alphabet = sorted(pair if k % 2 == 0 else mixed)
        words.append(tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_len))))
    return words


def word_builder(params: ParamPoint, word: Sequence[str]) -> Callable[[int], FockOp]:
    pair, mixed = _word_alphabet(params)
    table = pair if word[0] in pair else mixed
    return lambda n: _chain(*(table[w](n) for w in word))


def _suite_window(ctx: Context) -> None:
    count = ctx.options.get("words", 50)
    extra = ctx.options.get("extra", 4)
    for word in random_words(ctx.params, count):
        ctx.record(" ".join(word), truncation_agrees(word_builder(ctx.params, word), ctx.n, extra))


# -- representations --------------------------------------------------

def _suite_reps(ctx: Context) -> None:
    zz = ctx.s("z")
    reps = {name: build_rep(name, ctx.params, ctx.n) for name in REP_NAMES}
    for name, rep in reps.items():
        ctx.report.merge(check_serre(rep), f"{name}: ")
        ctx.report.merge(weight_check(rep), f"{name}: ")
        for s0, s1 in ((0, 1), (1, 0), (1, 1)):
            ctx.report.merge(general_grading_identity(rep, s0, s1, zz), f"{name}: ")
    for src, dst in (("rho", "rho_minus"), ("rhobar", "rhobar_minus"), ("phi", "phi_minus"),
                     ("Pi", "Pi"), ("upsilon", "upsilon")):
        ctx.report.merge(tables_equal(psi_twist(reps[src]), reps[dst]), f"{src} twisted: ")


# -- intertwiner and bulk factorisation -------------------------------

def _suite_O(ctx: Context) -> None:
    prm, n, u, z = ctx.params, ctx.n, ctx.params.u, ctx.s("z")
    a = grading_shift(build_rep("rho", prm, n), z / u)
    b = grading_shift(build_rep("rhobar", prm, n), u * z)
    c = grading_shift(build_rep("upsilon", prm, n), z)
    d = grading_shift(build_rep("phi", prm, n), z)
    o = build_O(prm, n)
    for g in ("e0", "e1", "k0", "k1"):
        ctx.record(g, agree_on_window(compose(o, coaction(a, b, g)), compose(coaction(c, d, g), o)))


def _suite_O_minus(ctx: Context) -> None:
    prm, n, u, z = ctx.params, ctx.n, ctx.params.u, ctx.s("z")
    a = grading_shift(build_rep("rhobar_minus", prm, n), z / u)
    b = grading_shift(build_rep("rho_minus", prm, n), u * z)
    c = grading_shift(build_rep("phi_minus", prm, n), z)
    d = grading_shift(build_rep("upsilon", prm, n), z)
    o21 = build_O(prm, n, "O21")
    for g in ("f0", "f1", "k0", "k1"):
        ctx.record(g, agree_on_window(compose(o21, coaction(a, b, g)), compose(coaction(c, d, g), o21)))


def _suite_bulk(ctx: Context) -> None:
    prm, n, u, z = ctx.params, ctx.n, ctx.params.u, ctx.s("z")
    s3 = FockSpace(n, ("W", "W", "C2"))
    o12 = embed(build_O(prm, n), s3, (0, 1))

    def l(name, x, legs):
        return embed(build_L(name, prm, x, n), s3, legs)
    lhs = _chain(o12, l("rho", z / u, (0, 2)), l("rhobar", u * z, (1, 2)))
    rhs = _chain(l("upsilon", z, (0, 2)), l("phi", z, (1, 2)), o12)
    ctx.record("O_12 L_13 L_23", agree_on_window(lhs, rhs))


def _suite_bulk_minus(ctx: Context) -> None:
    prm, n, u, z = ctx.params, ctx.n, ctx.params.u, ctx.s("z")
    s3 = FockSpace(n, ("C2", "W", "W"))
    o32 = embed(build_O(prm, n), s3, (2, 1))

    def l(name, x, legs):
        return embed(build_L(name, prm, x, n, "minus"), s3, legs)
    lhs = _chain(o32, l("rho", z / u, (0, 2)), l("rhobar", u * z, (0, 1)))
    rhs = _chain(l("upsilon", z, (0, 2)), l("phi", z, (0, 1)), o32)
    ctx.record("O_32 L_13 L_12", agree_on_window(lhs, rhs))


# -- R- and K-operator defining equations -----------------------------

def _suite_R_upsilon_phi(ctx: Context) -> None:
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    x = build_R("upsilon_phi", prm, z, n)
    a = grading_shift(build_rep("upsilon", prm, n), z)
    b = build_rep("phi_minus", prm, n)
    for g in ("f0", "f1", "k0", "k1"):
        ctx.record(g, agree_on_window(compose(x, coaction(a, b, g)), compose(coaction(a, b, g, True), x)))


def _suite_R_rho_rhobar(ctx: Context) -> None:
    prm, n, z, z2 = ctx.params, ctx.n, ctx.s("z"), ctx.s("w")
    s3 = FockSpace(n, ("W", "W", "C2"))
    x12 = embed(build_R("rho_rhobar", prm, z, n), s3, (0, 1))
    l13 = embed(build_L("rho", prm, z * z2, n), s3, (0, 2))
    m32 = embed(invert(build_L("rhobar", prm, 1 / z2, n, "minus")), s3, (2, 1))
    ctx.record("X_12 L_13 M_32", agree_on_window(_chain(x12, l13, m32), _chain(m32, l13, x12)))


def _coideal(rep, q, xi):
    return [
        add(rep["e0"], compose(rep["k0"], rep["f1"]), -1 / (q * xi)),
        add(rep["e1"], compose(rep["k1"], rep["f0"]), -xi / q),
        compose(rep["k0"], rep["k1inv"]),
    ]


def _suite_K_intertwining(ctx: Context) -> None:
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    q, xi = prm.q, prm.xi
    for name in ("upsilon", "Pi"):
        rep = build_rep(name, prm, n)
        k = build_K(name, prm, z, n)
        src = _coideal(grading_shift(rep, z), q, xi)
        dst = _coideal(grading_shift(rep, 1 / z), q, xi)
        for label, s, t in zip(("e0 - k0 f1", "e1 - k1 f0", "k0 k1^-1"), src, dst):
            ctx.record(f"{name}: {label}", agree_on_window(compose(k, s), compose(t, k)))


def _re_right(name):
    def check(ctx: Context) -> None:
        prm, n, y, z = ctx.params, ctx.n, ctx.s("y"), ctx.s("z")
        wc = FockSpace(n, ("W", "C2"))
        k = embed(build_K(name, prm, y, n), wc, (0,))
        kpi = embed(build_K("Pi", prm, z, n), wc, (1,))
        l1, l2 = build_L(name, prm, y / z, n), build_L(name, prm, y * z, n)
        ctx.record("right reflection", agree_on_window(_chain(l1, k, l2, kpi), _chain(kpi, l2, k, l1)))
    return check


def _re_left(name):
    def check(ctx: Context) -> None:
        prm, n, y, z = ctx.params, ctx.n, ctx.s("y"), ctx.s("z")
        wc = FockSpace(n, ("W", "C2"))
        k = embed(build_K(name, prm, y, n, "left"), wc, (0,))
        kpi = embed(build_K("Pi", prm, z, n, "left"), wc, (1,))
        l1, lt = build_L(name, prm, y / z, n), build_L(name, prm, y * z, n, "tilde")
        ctx.record("left reflection", agree_on_window(_chain(k, lt, kpi, l1), _chain(l1, kpi, lt, k)))
    return check


# -- normalisations and links -----------------------------------------

def _suite_normalisations(ctx: Context) -> None:
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    q = prm.q
    w0, ww0 = (0,), (0, 0)
    for name in L_REPS:
        for side in ("right", "left"):
            k = build_K(name, prm, z, n, side)
            ctx.record(f"K_{name} {side} fixes w0", k.column(w0) == {w0: 1})
        # left operator is the inverse of the right one at qz with xi -> 1/xitilde
        swapped = prm.with_values(xi=1 / prm.xitilde)
        link = invert(build_K(name, swapped, q * z, n))
        ctx.record(f"K_{name} left link", agree_on_window(build_K(name, prm, z, n, "left"), link))
    xt = prm.xitilde
    pref = (1 - q * q * z * z / xt) * (1 - q * q * xt * z * z)
    kpi_inv = mat_inverse(k_pi_matrix(prm.with_values(xi=1 / xt), q * z))
    two = FockSpace(n, ("C2",))
    ctx.record("K_Pi left link", agree_on_window(build_K("Pi", prm, z, n, "left"),
                                                 scale(two_matrix(two, 0, kpi_inv), pref)))
    cartan = {"upsilon_phi": ("upsilon", "phi_minus"), "rho_rhobar": ("rho", "rhobar_minus")}
    for pair in ("upsilon_phi", "rho_rhobar"):
        r = build_R(pair, prm, z, n)
        ctx.record(f"R_{pair} fixes w0 (x) w0", r.column(ww0) == {ww0: 1})
        ctx.record(f"R_{pair} block preserving", r.is_block_preserving)
        a, b = (build_rep(nm, prm, n) for nm in cartan[pair])
        ctx.record(f"R_{pair} commutes with k1 (x) k1", is_zero_on_window(qcommutator(r, coaction(a, b, "k1"))))
        prod = compose(build_R(pair, prm, z, n, tilde=True), build_R(pair, prm, q * q * z, n))
        ctx.record(f"R_{pair} tilde link", agree_on_window(prod, identity(r.dom)))
    for name in L_REPS:
        l = build_L(name, prm, z, n)
        prod = compose(build_L(name, prm, z, n, "tilde"), build_L(name, prm, q * q * z, n))
        ctx.record(f"L_{name} tilde link", agree_on_window(prod, identity(l.dom)))
        ctx.record(f"L_{name} minus is flip", agree_on_window(build_L(name, prm, z, n, "minus"), flip_legs(l)))
    o = build_O(prm, n)
    ctx.record("O fixes w0 (x) w0", o.column(ww0) == {ww0: 1})
    ctx.record("O block preserving", o.is_block_preserving)
    ctx.record("O21 is flip of O", agree_on_window(build_O(prm, n, "O21"), flip_legs(o)))
    ctx.record("O O^-1 = 1", agree_on_window(compose(o, build_O(prm, n, "O_inverse")), identity(o.dom)))


# -- boundary factorisation -------------------------------------------

def _boundary_sides(ctx: Context, side: str):
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    u = prm.u
    rhs_prm = prm
    if ctx.options.get("tamper"):
        key = "xi" if side == "right" else "xitilde"
        rhs_prm = prm.with_values(**{key: getattr(prm, key) + 1})
    ww = FockSpace(n, ("W", "W"))

    def k(name, x, leg, point):
        return embed(build_K(name, point, x, n, side), ww, (leg,))
    z2 = z * z
    if side == "right":
        o = build_O(prm, n)
        lhs = [k("upsilon", z, 0, prm), build_R("upsilon_phi", prm, z2, n), k("phi", z, 1, prm), o]
        rhs = [o, k("rho", z / u, 0, rhs_prm), build_R("rho_rhobar", rhs_prm, z2, n), k("rhobar", u * z, 1, rhs_prm)]
    else:
        oi = build_O(prm, n, "O_inverse")
        lhs = [k("rhobar", u * z, 1, prm), build_R("rho_rhobar", prm, z2, n, tilde=True), k("rho", z / u, 0, prm), oi]
        rhs = [oi, k("phi", z, 1, rhs_prm), build_R("upsilon_phi", rhs_prm, z2, n, tilde=True), k("upsilon", z, 0, rhs_prm)]
    return lhs, rhs


def _boundary(side: str):
    def check(ctx: Context) -> None:
        lhs_f, rhs_f = _boundary_sides(ctx, side)
        lhs, rhs = _chain(*lhs_f), _chain(*rhs_f)
        ww0 = (0, 0)
        ctx.record("left side fixes w0 (x) w0", lhs.column(ww0) == {ww0: 1})
        ctx.record("right side fixes w0 (x) w0", rhs.column(ww0) == {ww0: 1})
        top = block_top(ctx)
        compare_blocks(ctx, "factorisation", lhs, rhs, top)
        # block products from the factors agree with the window products
        for label, factors, full in (("left", lhs_f, lhs), ("right", rhs_f, rhs)):
            ok = True
            for m in range(top + 1):
                prod = restrict_to_block(factors[-1], m)
                for f in reversed(factors[:-1]):
                    prod = mat_mul(restrict_to_block(f, m), prod)
                if prod != restrict_to_block(full, m):
                    ok = False
                    break
            ctx.record(f"{label} side block/window consistency", ok)
    return check


def _suite_reduced(ctx: Context) -> None:
    prm, z = ctx.params, ctx.s("z")
    q, p, u, xi = prm.q, prm.p, prm.u, prm.xi
    g = p / (u * u * xi)
    z2 = z * z

    def e_pp(m):
        return qexp_block(p, m, lower1_raise2(q, p))

    def e_bar(m):
        return qexp_block(p, m, barraise1_lower2(q, p * z2 / g))

    def lhs(m):
        d = diag_block(m, lambda j1, j2: q_pochhammer(g * z2, p, j1) / q_pochhammer(p ** (1 - j1) * z2 / g, p, j1))
        e = e_pp(m)
        return mat_mul(e, mat_mul(d, mat_mul(e_bar(m), mat_inverse(e))))

    def rhs(m):
        d1 = diag_block(m, lambda j1, j2: q_pochhammer(g * z2, p, j1))
        shifted = block_matrix(m, lambda j1, j2: lower1_raise2(q, -g * z2 * p**j1)(j1, j2))
        d2 = diag_block(m, lambda j1, j2: 1 / q_pochhammer(p ** (1 - j2) * z2 / g, p, j2))
        return mat_mul(d1, mat_mul(qexp_nilpotent(p, shifted), mat_mul(e_bar(m), d2)))

    compare_dense_blocks(ctx, "reduced identity", lhs, rhs, block_top(ctx))


# -- fusion -----------------------------------------------------------

def _suite_fusion_ses(ctx: Context) -> None:
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    q, r = prm.q, prm.r
    iota, tau = build_fusion("iota", prm, n), build_fusion("tau", prm, n)
    ctx.record("tau iota = 0", is_zero_on_window(compose(tau, iota)))
    src = grading_shift(build_rep("rho_r", prm.with_values(r=q * r), n), q * z)
    mid_a = grading_shift(build_rep("rho_r", prm, n), z)
    two = grading_shift(build_rep("Pi", prm, n), z)
    dst = grading_shift(build_rep("rho_r", prm.with_values(r=r / q), n), z / q)
    for g in ("e0", "e1", "k0", "k1"):
        mid = coaction(mid_a, two, g)
        ctx.record(f"iota intertwines {g}", agree_on_window(compose(iota, src[g]), compose(mid, iota)))
        ctx.record(f"tau intertwines {g}", agree_on_window(compose(tau, mid), compose(dst[g], tau)))
    # exactness in the middle, charge sector by charge sector
    ok = True
    for c in range(n):
        sector = [(c, 0)] + ([(c - 1, 1)] if c else [])
        t_rows = [{k: tau.entry((c,), b) for k, b in enumerate(sector) if tau.entry((c,), b)}]
        kernel = len(sector) - rank(t_rows)
        image = 0
        if c:
            col = iota.column((c - 1,))
            image = rank([{k: col[b] for k, b in enumerate(sector) if b in col}])
        if kernel != image:
            ok = False
            ctx.report.details.setdefault("exactness_sector", c)
            break
    ctx.record("image of iota = kernel of tau", ok)


def _suite_fusion_k(ctx: Context) -> None:
    prm, n, z, aux = ctx.params, ctx.n, ctx.s("z"), ctx.s("w")
    fo = solvers.solve_fusion_objects(prm, z, aux, n)
    ctx.report.details["dimensions"] = fo.dimensions
    ctx.record("solution spaces one-dimensional", all(d == 1 for d in fo.dimensions.values()))
    wc = FockSpace(n, ("W", "C2"))
    iota, tau = build_fusion("iota", prm, n), build_fusion("tau", prm, n)
    k1 = embed(fo.K, wc, (0,))
    kpi = embed(build_K("Pi", prm, z, n), wc, (1,))
    scalars = {}
    for label, lhs, rhs, probe in (
            ("K L K_Pi iota = c iota K(qr, qz)", _chain(k1, fo.L, kpi, iota), compose(iota, fo.K_up), (0,)),
            ("tau K L K_Pi = c K(r/q, z/q) tau", _chain(tau, k1, fo.L, kpi), compose(fo.K_down, tau), (0, 0))):
        a, b = lhs.column(probe), rhs.column(probe)
        if not b:
            ctx.record(label, False, Witness(probe, a, b))
            continue
        key = min(b)
        c = a.get(key, Fraction(0)) / b[key]
        scalars[label] = format_scalar(c)
        ctx.record(label, agree_on_window(lhs, scale(rhs, c)) if c else False)
    ctx.report.details["scalars"] = scalars


# -- solver oracles ---------------------------------------------------

def _suite_oracle_K_RE(ctx: Context) -> None:
    prm, n, y, z = ctx.params, ctx.n, ctx.s("y"), ctx.s("z")
    dims = {}
    for name in L_REPS:
        sol = solvers.solve_K_from_RE(name, prm, y, z, n)
        dims[name] = sol.dimension
        ctx.record(f"{name}: dimension 1", sol.dimension == 1)
        if sol.dimension == 1:
            ctx.record(f"{name}: closed form", agree_on_window(sol.basis[0], build_K(name, prm, y, n)))
    ctx.report.details["dimensions"] = dims


def _suite_oracle_K_intertwining(ctx: Context) -> None:
    prm, n, z = ctx.params, ctx.n, ctx.s("z")
    sol = solvers.solve_K_from_intertwining(prm, z, n)
    ctx.report.details["dimensions"] = {"upsilon": sol.dimension}
    ctx.record("dimension 1", sol.dimension == 1)
    if sol.dimension == 1:
        ctx.record("closed form", agree_on_window(sol.basis[0], build_K("upsilon", prm, z, n)))


def _oracle_R(pair: str):
    def check(ctx: Context) -> None:
        prm, n, z = ctx.params, ctx.n, ctx.s("z")
        top = block_top(ctx, 3)
        extra = (ctx.s("w"),) if pair == "rho_rhobar" else ()
        sol = solvers.solve_R_from_linear(pair, prm, z, n, top, extra)
        ctx.report.details["dimensions"] = {pair: sol.dimension}
        ctx.report.details["unknowns"] = sol.unknowns
        ctx.record("dimension 1", sol.dimension == 1)
        if sol.dimension == 1:
            compare_blocks(ctx, "closed form", sol.basis[0], build_R(pair, prm, z, n), top)
    return check


# -- registry ---------------------------------------------------------

def _registry() -> dict[str, SuiteSpec]:
    specs = [
        SuiteSpec("qseries", "finite Pochhammer inversion, q-exponential functional, inverse and product formulas",
                  ("q_pochhammer", "qexp_nilpotent"), "scalar", ("z", "y", "w", "x"), _suite_qseries, min_n=0),
        SuiteSpec("oscillator", "oscillator relations, ladder commutators and q-exponential commutation rules",
                  ("make_generator", "qexp_block"), "window", ("z", "y"), _suite_oscillator),
        SuiteSpec("window-soundness", "random operator words agree between truncations N and N+4",
                  ("FockOp",), "window", ("z", "y"), _suite_window),
        SuiteSpec("rep-relations", "defining relations, grading identity, twisted tables and weights",
                  REP_NAMES, "window", ("z",), _suite_reps),
        SuiteSpec("O-intertwining", "O intertwines rho (x) rhobar with upsilon (x) phi",
                  ("O", "rho", "rhobar", "upsilon", "phi"), "window", ("z",), _suite_O),
        SuiteSpec("O-minus", "O21 intertwines the negative-half tensor products",
                  ("O21", "rho_minus", "rhobar_minus", "upsilon", "phi_minus"), "window", ("z",), _suite_O_minus),
        SuiteSpec("bulk-factorization", "O_12 L_rho L_rhobar = L_upsilon L_phi O_12",
                  ("O", "L"), "window", ("z",), _suite_bulk),
        SuiteSpec("bulk-factorization-minus", "leg-flipped bulk factorisation on C2 (x) W (x) W",
                  ("O", "L minus"), "window", ("z",), _suite_bulk_minus),
        SuiteSpec("R-defining-upsilon-phi", "R_upsilon_phi intertwines the coproduct and its opposite",
                  ("R upsilon_phi", "upsilon", "phi_minus"), "window", ("z",), _suite_R_upsilon_phi),
        SuiteSpec("R-defining-rho-rhobar", "R_rho_rhobar solves its linear equation with L_rho and L_rhobar",
                  ("R rho_rhobar", "L"), "window", ("z", "w"), _suite_R_rho_rhobar),
        SuiteSpec("K-intertwining-upsilon", "K_upsilon and K_Pi intertwine the coideal generators",
                  ("K upsilon", "K Pi"), "window", ("z",), _suite_K_intertwining),
    ]
    for name in L_REPS:
        specs.append(SuiteSpec(f"RE-right-{name}", f"right reflection equation for {name}",
                               (f"L {name}", f"K {name}", "K Pi"), "window", ("y", "z"), _re_right(name)))
    for name in L_REPS:
        specs.append(SuiteSpec(f"RE-left-{name}", f"left reflection equation for {name}",
                               (f"L {name}", f"K {name} left", "K Pi left"), "window", ("y", "z"), _re_left(name)))
    specs += [
        SuiteSpec("normalizations", "anchor vectors, block preservation and tilde/left links",
                  ("K", "R", "L", "O"), "window", ("z",), _suite_normalisations),
        SuiteSpec("boundary-factorization-right", "right boundary factorisation through O",
                  ("K", "R", "O"), "blocks", ("z",), _boundary("right"), min_n=2),
        SuiteSpec("boundary-factorization-left", "left boundary factorisation through O^-1",
                  ("K left", "R tilde", "O inverse"), "blocks", ("z",), _boundary("left"), min_n=2),
        SuiteSpec("boundary-factorization-reduced", "reduced two-sided q-exponential identity",
                  ("qexp_block",), "blocks", ("z",), _suite_reduced, min_n=2),
        SuiteSpec("fusion-SES", "iota and tau intertwine and form an exact sequence",
                  ("iota", "tau", "rho_r", "Pi"), "window", ("z",), _suite_fusion_ses),
        SuiteSpec("fusion-K", "boundary fusion relations with solved L and K, scalars recorded",
                  ("fusion L", "fusion K", "iota", "tau"), "window", ("z", "w"), _suite_fusion_k, min_n=6),
        SuiteSpec("oracle-K-RE", "solved right reflection equations reproduce the closed K-operators",
                  ("solve_K_from_RE",), "window", ("y", "z"), _suite_oracle_K_RE),
        SuiteSpec("oracle-K-intertwining", "solved coideal intertwining reproduces K_upsilon",
                  ("solve_K_from_intertwining",), "window", ("z",), _suite_oracle_K_intertwining),
        SuiteSpec("oracle-R-upsilon-phi", "solved linear equation reproduces R_upsilon_phi",
                  ("solve_R_from_linear",), "blocks", ("z",), _oracle_R("upsilon_phi"), block_margin=3),
        SuiteSpec("oracle-R-rho-rhobar", "solved linear equation reproduces R_rho_rhobar",
                  ("solve_R_from_linear",), "blocks", ("z", "w"), _oracle_R("rho_rhobar"), block_margin=3),
    ]
    return {s.id: s for s in specs}


REGISTRY: dict[str, SuiteSpec] = _registry()
SUITE_IDS: tuple[str, ...] = tuple(REGISTRY)


def resolve_suites(names: Iterable[str] | None) -> list[str]:
    """Expand ``None`` or ``"all"`` to every suite; reject unknown ids."""
    if names is None:
        return list(SUITE_IDS)
    out = []
    for name in names:
        if name == "all":
            out.extend(s for s in SUITE_IDS if s not in out)
        elif name in REGISTRY:
            if name not in out:
                out.append(name)
        else:
            raise KeyError(f"unknown suite id {name!r}")
    return out


def run_suite(suite_id: str, params: ParamPoint, n: int, m_max: int, **options) -> Report:
    """Run one suite at one parameter point.

    Options: ``tamper=True`` perturbs ``xi`` (right) or ``xitilde`` (left) on
    the right-hand side of the boundary factorisation; ``words`` and
    ``extra`` control the window-soundness suite.

    Raises
    ------
    KeyError
        Unknown suite id.
    ValueError
        Truncation too small or a required spectral value is missing.
    InadmissibleError
        The point fails an admissibility certificate at truncation ``n``.
    """
    if suite_id not in REGISTRY:
        raise KeyError(f"unknown suite id {suite_id!r}")
    spec = REGISTRY[suite_id]
    if n < spec.min_n:
        raise ValueError(f"suite {suite_id} needs N >= {spec.min_n}")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    if spec.arena == "blocks" and n - spec.block_margin < 0:
        raise ValueError(f"suite {suite_id} needs N >= {spec.block_margin}")
    names = {k for k, _ in params.spectral}
    missing = [s for s in spec.spectral if s not in names]
    if missing:
        raise ValueError(f"suite {suite_id} needs spectral values {missing}")
    check_admissible(params, n)
    report = Report(suite=suite_id, anchor=spec.anchor, params=params, n=n, m_max=m_max)
    ctx = Context(params, n, m_max, report, dict(options))
    start = time.perf_counter()
    spec.check(ctx)
    report.seconds = time.perf_counter() - start
    return report


def trial_points(seed: int, trials: int, n: int, overrides: dict | None = None) -> list[ParamPoint]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    constraints = Admissibility(n_max=max(n, 12), fixed=dict(overrides or {}))
    return [sample_params(seed * 1009 + t, constraints) for t in range(trials)]


def run_all(seed: int, trials: int, n: int, m_max: int, suites: Iterable[str] | None = None,
            overrides: dict | None = None, **options) -> list[Report]:
    """Run the selected suites at ``trials`` sampled points.

    Reports come out ordered by suite (registry order) and then by trial.
    An exception inside one suite becomes an ``"error"`` report and does not
    affect the others.
    """
    ids = resolve_suites(suites)
    points = trial_points(seed, trials, n, overrides)
    reports = []
    for sid in ids:
        for point in points:
            try:
                reports.append(run_suite(sid, point, n, m_max, **options))
            except Exception as exc:  # isolate the failure to this suite
                rep = Report(suite=sid, anchor=REGISTRY[sid].anchor, params=point, n=n, m_max=m_max,
                             passed=False, status="error", error=f"{type(exc).__name__}: {exc}")
                reports.append(rep)
    return reports


def all_passed(reports: Iterable[Report]) -> bool:
    return all(r.passed for r in reports)


def to_json_lines(reports: Iterable[Report], timing: bool = False) -> str:
    return "".join(r.to_json(timing) + "\n" for r in reports)


def to_tsv(reports: Iterable[Report], timing: bool = False) -> str:
    """Summary table: suite, trials, passes, largest block, wall time.

    The wall-time column reads ``-`` unless ``timing`` is requested, so the
    default output is reproducible byte for byte.
    """
    rows: dict[str, dict] = {}
    for r in reports:
        row = rows.setdefault(r.suite, {"trials": 0, "passes": 0, "max_block": "-", "seconds": 0.0})
        row["trials"] += 1
        row["passes"] += int(r.passed)
        if "max_block" in r.details:
            prev = row["max_block"]
            row["max_block"] = r.details["max_block"] if prev == "-" else max(prev, r.details["max_block"])
        row["seconds"] += r.seconds
    lines = ["suite\ttrials\tpasses\tmax_block\tseconds"]
    for sid, row in rows.items():
        secs = f"{row['seconds']:.3f}" if timing else "-"
        lines.append(f"{sid}\t{row['trials']}\t{row['passes']}\t{row['max_block']}\t{secs}")
    return "\n".join(lines) + "\n"
