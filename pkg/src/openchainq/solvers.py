"""Independent oracles: operators recovered as solutions of linear equations.

Each solver writes the unknown operator as a combination of ansatz operators
(diagonal units, block matrix units, or charge-preserving matrix units),
imposes a linear operator equation on its exactness window and computes the
solution space by fraction-free elimination. Unknowns close to the
truncation are only weakly constrained, so solutions are projected onto a
trusted range of unknowns before the dimension is counted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exactq import ParamPoint, as_scalar
from .fock import (FockOp, FockSpace, add, compose, diagonal, embed, from_blocks,
                   invert)
from .linalg import echelon, nullspace
from .operators import build_K, build_L
from .reps import build_rep, coaction, grading_shift


class SolverError(RuntimeError):
    """The solution space does not have the expected dimension."""


@dataclass
class SolutionSet:
    """Solutions of a linear operator equation.

    ``basis`` lists solution operators restricted to the trusted unknowns;
    ``dimension`` is their number. ``unknowns`` and ``equations`` record the
    size of the linear system.
    """

    basis: list[FockOp]
    dimension: int
    unknowns: int
    equations: int
    details: dict = field(default_factory=dict)

    def unique(self) -> FockOp:
        if self.dimension != 1:
            raise SolverError(f"expected a one-dimensional solution space, got {self.dimension}")
        return self.basis[0]


Residual = Callable[[FockOp], FockOp]


def _equations(ansatz: Sequence[FockOp], residuals: Sequence[Residual]) -> list[dict]:
    rows: dict = {}
    for k, x in enumerate(ansatz):
        for e, res in enumerate(residuals):
            op = res(x)
            for b in op.window():
                for o, v in op.cols.get(b, {}).items():
                    rows.setdefault((e, b, o), {})[k] = v
    return list(rows.values())


def solve_linear(ansatz: Sequence[FockOp], residuals: Sequence[Residual],
                 trusted: Sequence[int], assemble: Callable[[dict[int, Fraction]], FockOp]) -> SolutionSet:
    """Solve ``residual(X) = 0`` for ``X`` in the span of ``ansatz``.

    ``trusted`` lists the ansatz indices whose coefficients are reported;
    ``assemble`` turns a coefficient map on trusted indices into an operator.
    """
    rows = _equations(ansatz, residuals)
    null = nullspace(rows, len(ansatz))
    trusted = list(trusted)
    pos = {k: i for i, k in enumerate(trusted)}
    projected = [{pos[k]: v[k] for k in trusted if v[k]} for v in null]
    piv = echelon(p for p in projected if p)
    basis = []
    for col in sorted(piv):
        row = piv[col]
        coeffs = {trusted[i]: Fraction(v) for i, v in row.items()}
        basis.append(assemble(coeffs))
    return SolutionSet(basis, len(piv), len(ansatz), len(rows),
                       {"raw_dimension": len(null)})


def normalise(x: FockOp, anchor: tuple) -> FockOp:
    """Scale ``x`` so that the ``anchor -> anchor`` coefficient equals 1."""
    c = x.entry(anchor, anchor)
    if not c:
        raise SolverError(f"anchor {anchor} has zero coefficient")
    return FockOp(x.dom, {b: {o: v / c for o, v in col.items()} for b, col in x.cols.items()},
                  cod=x.cod, **x.meta())


# -- diagonal ansatz on W ---------------------------------------------

def _diag_ansatz(n: int):
    w = FockSpace(n, ("W",))
    units = [diagonal(w, lambda b, k=k: int(b[0] == k)) for k in range(n + 1)]

    def assemble(trusted_top):
        def build(coeffs):
            return diagonal(w, lambda b: coeffs.get(b[0], 0)).with_meta(guard=(n - trusted_top,))
        return build
    return units, assemble


def solve_K_from_RE(name: str, params: ParamPoint, y, z, n: int, guard: int = 2,
                    l_builder: Callable | None = None) -> SolutionSet:
    """Diagonal solutions ``K`` of the right reflection equation
    ``L(y/z) K L(yz) K_Pi(z) = K_Pi(z) L(yz) K L(y/z)``.

    ``l_builder(x)`` overrides the L-operator (used for the fusion family).
    Solutions are normalised to fix ``w_0``.
    """
    y, z = as_scalar(y), as_scalar(z)
    wc = FockSpace(n, ("W", "C2"))
    if l_builder is None:
        l_builder = lambda x: build_L(name, params, x, n)
    l1, l2 = l_builder(y / z), l_builder(y * z)
    kpi = embed(build_K("Pi", params, z, n), wc, (1,))
    units, assemble = _diag_ansatz(n)

    def residual(x):
        k = embed(x, wc, (0,))
        return add(compose(l1, compose(k, compose(l2, kpi))),
                   compose(kpi, compose(l2, compose(k, l1))), -1)

    top = n - guard
    sol = solve_linear(units, [residual], range(top + 1), assemble(top))
    sol.basis = [normalise(b, (0,)) for b in sol.basis]
    return sol


def solve_K_from_intertwining(params: ParamPoint, z, n: int, guard: int = 2) -> SolutionSet:
    """Diagonal ``K`` with ``K upsilon_z(b) = upsilon_{1/z}(b) K`` for the
    coideal generators ``e0 - q^{-1} xi^{-1} k0 f1``, ``e1 - q^{-1} xi k1 f0``
    and ``k0 k1^{-1}``."""
    z = as_scalar(z)
    q, xi = params.q, params.xi
    ups = build_rep("upsilon", params, n)
    a, b = grading_shift(ups, z), grading_shift(ups, 1 / z)

    def coideal(rep):
        return [
            add(rep["e0"], compose(rep["k0"], rep["f1"]), -1 / (q * xi)),
            add(rep["e1"], compose(rep["k1"], rep["f0"]), -xi / q),
            compose(rep["k0"], rep["k1inv"]),
        ]

    pairs = list(zip(coideal(a), coideal(b)))
    residuals = [lambda x, s=s, t=t: add(compose(x, s), compose(t, x), -1) for s, t in pairs]
    units, assemble = _diag_ansatz(n)
    top = n - guard
    sol = solve_linear(units, residuals, range(top + 1), assemble(top))
    sol.basis = [normalise(bb, (0,)) for bb in sol.basis]
    return sol


# -- block ansatz on W (x) W ------------------------------------------

def _block_ansatz(n: int, top: int):
    ww = FockSpace(n, ("W", "W"))
    index = []
    for m in range(top + 1):
        size = m + 1
        for i in range(size):
            for j in range(size):
                index.append((m, i, j))

    def unit(m, i, j):
        blocks = {mm: [[0] * (mm + 1) for _ in range(mm + 1)] for mm in range(top + 1)}
        blocks[m][i][j] = 1
        return from_blocks(ww, blocks)

    units = [unit(*t) for t in index]

    def assemble(trusted_top):
        def build(coeffs):
            blocks = {m: [[Fraction(0)] * (m + 1) for _ in range(m + 1)] for m in range(trusted_top + 1)}
            for k, v in coeffs.items():
                m, i, j = index[k]
                blocks[m][i][j] = v
            return from_blocks(ww, blocks)
        return build
    trusted = lambda t: [k for k, (m, _, _) in enumerate(index) if m <= t]
    return units, assemble, trusted


def solve_R_from_linear(pair: str, params: ParamPoint, z, n: int, m_max: int,
                        extra_spectral: Sequence = (), margin: int = 3) -> SolutionSet:
    """Block-preserving solutions of the defining linear equation of an
    R-operator, normalised to fix ``w_0 (x) w_0``.

    ``upsilon_phi``: ``X (upsilon_z (x) phi^-)(Delta u) = (upsilon_z (x)
    phi^-)(Delta^op u) X`` for ``u`` in ``f0, f1, k0, k1``.

    ``rho_rhobar``: ``X_12 L_rho(z z2)_13 M_32 = M_32 L_rho(z z2)_13 X_12``
    with ``M`` the inverse of the leg-flipped ``L_rhobar(1/z2)``; every value
    of ``z2`` in ``extra_spectral`` contributes its equations.
    """
    z = as_scalar(z)
    top = m_max + margin
    if n < top:
        raise ValueError("truncation too small for the requested blocks")
    units, assemble, trusted = _block_ansatz(n, top)
    if pair == "upsilon_phi":
        a = grading_shift(build_rep("upsilon", params, n), z)
        b = build_rep("phi_minus", params, n)
        residuals = []
        for gen in ("f0", "f1", "k0", "k1"):
            s, t = coaction(a, b, gen), coaction(a, b, gen, opposite=True)
            residuals.append(lambda x, s=s, t=t: add(compose(x, s), compose(t, x), -1))
    elif pair == "rho_rhobar":
        if not extra_spectral:
            raise ValueError("rho_rhobar needs at least one auxiliary spectral value")
        s3 = FockSpace(n, ("W", "W", "C2"))
        residuals = []
        for z2 in extra_spectral:
            z2 = as_scalar(z2)
            l13 = embed(build_L("rho", params, z * z2, n), s3, (0, 2))
            m32 = embed(invert(build_L("rhobar", params, 1 / z2, n, "minus")), s3, (2, 1))
            lhs_tail, rhs_head = compose(l13, m32), compose(m32, l13)
            residuals.append(lambda x, lt=lhs_tail, rh=rhs_head:
                             add(compose(embed(x, s3, (0, 1)), lt), compose(rh, embed(x, s3, (0, 1))), -1))
    else:
        raise ValueError(f"unknown R pair {pair!r}")
    sol = solve_linear(units, residuals, trusted(m_max), assemble(m_max))
    sol.basis = [normalise(bb, (0, 0)) for bb in sol.basis]
    return sol


# -- fusion -----------------------------------------------------------

def _charge_ansatz(n: int):
    wc = FockSpace(n, ("W", "C2"))
    sectors: dict[int, list] = {}
    for b in wc.basis:
        if sum(b) <= n:
            sectors.setdefault(sum(b), []).append(b)
    index = [(c, o, i) for c in sorted(sectors) for o in sectors[c] for i in sectors[c]]
    units = [FockOp(wc, {i: {o: Fraction(1)}}, raising=(1,), guard=(0,), total_raising=1,
                    total_guard=1) for _, o, i in index]

    def assemble(top):
        def build(coeffs):
            cols: dict = {}
            for k, v in coeffs.items():
                _, o, i = index[k]
                cols.setdefault(i, {})[o] = v
            return FockOp(wc, cols, raising=(1,), guard=(0,), total_raising=1, total_guard=n - top + 1)
        return build
    trusted = lambda top: [k for k, (c, _, _) in enumerate(index) if c <= top]
    return units, assemble, trusted


def solve_L_fusion(params: ParamPoint, x, n: int, r=None, guard: int = 2) -> SolutionSet:
    """The L-operator of the fusion family at spectral value ``x``.

    Charge-preserving ``X`` on ``W (x) C2`` with ``X (rho_{r,x} (x) Pi)(Delta u)
    = (rho_{r,x} (x) Pi)(Delta^op u) X`` for ``u`` in ``e0, e1, k1``,
    normalised to fix ``w_0 (x) v+``.
    """
    r = params.r if r is None else as_scalar(r)
    pr = params.with_values(r=r)
    a = grading_shift(build_rep("rho_r", pr, n), x)
    b = build_rep("Pi", pr, n)
    residuals = []
    for gen in ("e0", "e1", "k1"):
        s, t = coaction(a, b, gen), coaction(a, b, gen, opposite=True)
        residuals.append(lambda xx, s=s, t=t: add(compose(xx, s), compose(t, xx), -1))
    units, assemble, trusted = _charge_ansatz(n)
    top = n - guard
    sol = solve_linear(units, residuals, trusted(top), assemble(top))
    sol.basis = [normalise(bb, (0, 0)) for bb in sol.basis]
    return sol


def solve_K_fusion(params: ParamPoint, y, aux, n: int, r=None) -> SolutionSet:
    """Diagonal reflection-equation solution for the fusion family at ``y``,
    using the auxiliary spectral value ``aux``."""
    cache: dict = {}

    def l_builder(x):
        if x not in cache:
            cache[x] = solve_L_fusion(params, x, n, r).unique()
        return cache[x]
    return solve_K_from_RE("rho_r", params, y, aux, n, guard=4, l_builder=l_builder)


@dataclass
class FusionObjects:
    """Solved fusion-family operators at one parameter point."""

    L: FockOp                  # at (r, z^2)
    K: FockOp                  # at (r, z)
    K_up: FockOp               # at (q r, q z)
    K_down: FockOp             # at (r / q, z / q)
    dimensions: dict


def solve_fusion_objects(params: ParamPoint, z, aux, n: int) -> FusionObjects:
    """Solve for the fusion L-operator and the three K-operators needed by
    the boundary fusion relations."""
    q, r = params.q, params.r
    z = as_scalar(z)
    lsol = solve_L_fusion(params, z * z, n, r)
    ks = {
        "K": solve_K_fusion(params, z, aux, n, r),
        "K_up": solve_K_fusion(params, q * z, aux, n, q * r),
        "K_down": solve_K_fusion(params, z / q, aux, n, r / q),
    }
    dims = {"L": lsol.dimension}
    dims.update({k: v.dimension for k, v in ks.items()})
    return FusionObjects(lsol.unique(), ks["K"].unique(), ks["K_up"].unique(),
                         ks["K_down"].unique(), dims)
