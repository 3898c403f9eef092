"""Sparse exact operators on truncated Fock spaces.

A :class:`FockSpace` is an ordered tensor product of legs. A ``"W"`` leg is
the Fock space truncated to ``w_0 .. w_N``; a ``"C2"`` leg is two-dimensional
with basis ``v+ = 0`` and ``v- = 1``. Basis vectors are tuples with one
index per leg.

Truncation makes raising operators wrong near the top, so every
:class:`FockOp` records where it is still exact. The *window* of an operator
is the set of input basis vectors ``j`` with

* ``j_i <= N - guard_i`` for every Fock leg ``i``, and
* ``sum(j) <= N - total_guard`` when ``total_guard`` is set.

On the window the truncated column equals the column of the untruncated
operator. ``raising_i`` bounds how far the output index on leg ``i`` can
exceed the input index (``None`` means it is only bounded through the total
degree) and ``total_raising`` bounds the growth of ``sum(j)``. Composition,
sums and tensor products propagate these bounds so that products of exact
pieces stay exact on the computed window.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .exactq import as_scalar, format_scalar
from .linalg import mat_inverse

Basis = tuple
Column = dict  # Basis -> Fraction


class EmptyWindowError(ValueError):
    """Two operators were compared on a window containing no basis vector."""


class BlockError(ValueError):
    """An operator does not preserve, or is not exact on, a graded block."""


@dataclass(frozen=True)
class FockSpace:
    n: int
    layout: tuple[str, ...] = ("W",)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("truncation must be nonnegative")
        for kind in self.layout:
            if kind not in ("W", "C2"):
                raise ValueError(f"unknown leg kind {kind!r}")

    @classmethod
    def of(cls, n: int, fock_legs: int = 1, two_legs: int = 0) -> "FockSpace":
        return cls(n, ("W",) * fock_legs + ("C2",) * two_legs)

    @cached_property
    def fock_positions(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.layout) if k == "W")

    @cached_property
    def two_positions(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.layout) if k == "C2")

    @property
    def fock_legs(self) -> int:
        return len(self.fock_positions)

    @property
    def two_legs(self) -> int:
        return len(self.two_positions)

    def leg_dim(self, i: int) -> int:
        return self.n + 1 if self.layout[i] == "W" else 2

    @cached_property
    def basis(self) -> tuple[Basis, ...]:
        return tuple(itertools.product(*(range(self.leg_dim(i)) for i in range(len(self.layout)))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, b: Basis) -> int:
        idx = 0
        for i, j in enumerate(b):
            idx = idx * self.leg_dim(i) + j
        return idx

    def contains(self, b: Basis) -> bool:
        return all(0 <= j < self.leg_dim(i) for i, j in enumerate(b))

    def degree(self, b: Basis) -> int:
        """Total Fock degree ``sum of j`` over the Fock legs."""
        return sum(b[i] for i in self.fock_positions)

    def charge(self, b: Basis) -> int:
        """Fock degree plus the number of ``v-`` factors."""
        return sum(b)

    def resized(self, n: int) -> "FockSpace":
        return FockSpace(n, self.layout)

    def __mul__(self, other: "FockSpace") -> "FockSpace":
        if self.n != other.n:
            raise ValueError("tensor factors must share the truncation")
        return FockSpace(self.n, self.layout + other.layout)


def _add_into(col: dict, other: Mapping, c=1) -> None:
    for k, v in other.items():
        nv = col.get(k, 0) + c * v
        if nv:
            col[k] = nv
        else:
            col.pop(k, None)


def _max_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class FockOp:
    """Sparse exact operator ``dom -> cod`` stored by columns.

    ``cols[b]`` maps output basis vectors to nonzero coefficients. Domain and
    codomain share the truncation and the number of Fock legs; their
    two-dimensional legs may differ.
    """

    __slots__ = ("dom", "cod", "cols", "raising", "guard", "total_raising", "total_guard")

    def __init__(self, dom: FockSpace, cols: Mapping, *, cod: FockSpace | None = None,
                 raising: Sequence | None = None, guard: Sequence | None = None,
                 total_raising: int | None = None, total_guard: int | None = None):
        cod = dom if cod is None else cod
        if cod.n != dom.n or cod.fock_legs != dom.fock_legs:
            raise ValueError("domain and codomain must share N and the Fock legs")
        nf = dom.fock_legs
        self.dom = dom
        self.cod = cod
        self.cols = {b: dict(c) for b, c in cols.items() if c}
        self.raising = tuple(raising) if raising is not None else (0,) * nf
        self.guard = tuple(guard) if guard is not None else (0,) * nf
        if len(self.raising) != nf or len(self.guard) != nf:
            raise ValueError("metadata length must equal the number of Fock legs")
        if total_raising is None:
            total_raising = sum(self.raising) if None not in self.raising else 0
        if nf == 1:
            # on one Fock leg the total-degree bounds are per-leg bounds
            if self.raising[0] is None:
                self.raising = (total_raising,)
            if total_guard is not None:
                self.guard = (max(self.guard[0], total_guard),)
                total_guard = None
        self.total_raising = total_raising
        self.total_guard = total_guard

    # -- basic access -------------------------------------------------

    @property
    def space(self) -> FockSpace:
        return self.dom

    @property
    def is_square(self) -> bool:
        return self.dom == self.cod

    def column(self, b: Basis) -> dict:
        return self.cols.get(b, {})

    def entry(self, out: Basis, inp: Basis) -> Fraction:
        return self.cols.get(inp, {}).get(out, Fraction(0))

    def apply(self, vec: Mapping) -> dict:
        out: dict = {}
        for b, c in vec.items():
            if c:
                _add_into(out, self.cols.get(b, {}), c)
        return out

    def in_window(self, b: Basis) -> bool:
        n = self.dom.n
        pos = self.dom.fock_positions
        for g, i in zip(self.guard, pos):
            if b[i] > n - g:
                return False
        if self.total_guard is not None and self.dom.degree(b) > n - self.total_guard:
            return False
        return True

    def window(self) -> list[Basis]:
        return [b for b in self.dom.basis if self.in_window(b)]

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    @property
    def is_block_preserving(self) -> bool:
        """Every stored entry preserves the total Fock degree."""
        deg_in, deg_out = self.dom.degree, self.cod.degree
        return all(deg_out(o) == deg_in(b) for b, c in self.cols.items() for o in c)

    @property
    def is_charge_preserving(self) -> bool:
        return all(sum(o) == sum(b) for b, c in self.cols.items() for o in c)

    def meta(self) -> dict:
        return dict(raising=self.raising, guard=self.guard,
                    total_raising=self.total_raising, total_guard=self.total_guard)

    def with_meta(self, **meta) -> "FockOp":
        m = self.meta()
        m.update(meta)
        return FockOp(self.dom, self.cols, cod=self.cod, **m)

    # -- algebra ------------------------------------------------------

    def __matmul__(self, other: "FockOp") -> "FockOp":
        return compose(self, other)

    def __add__(self, other: "FockOp") -> "FockOp":
        return add(self, other)

    def __sub__(self, other: "FockOp") -> "FockOp":
        return add(self, other, Fraction(-1))

    def __neg__(self) -> "FockOp":
        return scale(self, -1)

    def __mul__(self, c) -> "FockOp":
        return scale(self, c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "FockOp":
        return scale(self, 1 / as_scalar(c))

    def __repr__(self) -> str:
        return (f"FockOp(N={self.dom.n}, layout={''.join(k[0] for k in self.dom.layout)}, "
                f"nnz={self.nnz()}, guard={self.guard}, total_guard={self.total_guard})")


# -- constructors -----------------------------------------------------

def _leg_meta(space: FockSpace, leg: int, r: int, g: int):
    pos = space.fock_positions
    raising = tuple(r if p == leg else 0 for p in pos)
    guard = tuple(g if p == leg else 0 for p in pos)
    return raising, guard


def identity(space: FockSpace) -> FockOp:
    return FockOp(space, {b: {b: Fraction(1)} for b in space.basis})


def zero(space: FockSpace, cod: FockSpace | None = None) -> FockOp:
    return FockOp(space, {}, cod=cod)


def diagonal(space: FockSpace, f: Callable[[Basis], object]) -> FockOp:
    """Diagonal operator ``b -> f(b) b``."""
    cols = {}
    for b in space.basis:
        v = as_scalar(f(b))
        if v:
            cols[b] = {b: v}
    return FockOp(space, cols)


def make_generator(kind: str, leg: int, space: FockSpace, q=None,
                   f: Callable[[int], object] | None = None) -> FockOp:
    """Oscillator generator acting on one Fock leg, identity elsewhere.

    ``kind`` is one of ``"a"`` (``a w_{j+1} = w_j``, ``a w_0 = 0``),
    ``"adag"`` (``w_j -> (1 - q^{2(j+1)}) w_{j+1}``), ``"abardag"``
    (``w_j -> (1 - q^{-2(j+1)}) w_{j+1}``) or ``"diag"`` (``w_j -> f(j) w_j``).
    """
    if space.layout[leg] != "W":
        raise ValueError(f"leg {leg} is not a Fock leg")
    n = space.n
    cols: dict = {}
    if kind == "diag":
        if f is None:
            raise ValueError("diag generator needs a function")
        for b in space.basis:
            v = as_scalar(f(b[leg]))
            if v:
                cols[b] = {b: v}
        raising, guard = _leg_meta(space, leg, 0, 0)
        return FockOp(space, cols, raising=raising, guard=guard, total_raising=0)
    if kind == "a":
        for b in space.basis:
            j = b[leg]
            if j > 0:
                cols[b] = {b[:leg] + (j - 1,) + b[leg + 1:]: Fraction(1)}
        raising, guard = _leg_meta(space, leg, 0, 0)
        return FockOp(space, cols, raising=raising, guard=guard, total_raising=0)
    if kind in ("adag", "abardag"):
        if q is None:
            raise ValueError(f"{kind} needs q")
        p = as_scalar(q) ** 2
        if kind == "abardag":
            p = 1 / p
        for b in space.basis:
            j = b[leg]
            if j < n:
                cols[b] = {b[:leg] + (j + 1,) + b[leg + 1:]: 1 - p ** (j + 1)}
        raising, guard = _leg_meta(space, leg, 1, 1)
        return FockOp(space, cols, raising=raising, guard=guard, total_raising=1)
    raise ValueError(f"unknown generator kind {kind!r}")


def two_matrix(space: FockSpace, leg: int, m) -> FockOp:
    """A 2x2 matrix ``m[s][t]`` acting on a two-dimensional leg."""
    if space.layout[leg] != "C2":
        raise ValueError(f"leg {leg} is not two-dimensional")
    cols: dict = {}
    for b in space.basis:
        t = b[leg]
        col = {}
        for s in (0, 1):
            v = as_scalar(m[s][t])
            if v:
                col[b[:leg] + (s,) + b[leg + 1:]] = v
        if col:
            cols[b] = col
    return FockOp(space, cols)


def from_c2_blocks(entries: Mapping[tuple[int, int], FockOp], space: FockSpace) -> FockOp:
    """Assemble an operator on a ``W (x) C2`` style space from 2x2 entries.

    ``entries[(s, t)]`` acts on the single Fock leg and sends ``w (x) v_t`` to
    ``(entries[(s, t)] w) (x) v_s``. ``space`` must have exactly one Fock leg
    and one two-dimensional leg, in either order.
    """
    if space.fock_legs != 1 or space.two_legs != 1:
        raise ValueError("expected one Fock leg and one two-dimensional leg")
    wpos, cpos = space.fock_positions[0], space.two_positions[0]
    cols: dict = {}
    raising, guard, total_raising, total_guard = 0, 0, 0, None
    unbounded = False
    for (s, t), op in entries.items():
        if op.dom.layout != ("W",):
            raise ValueError("entries must act on a single Fock leg")
        if op.raising[0] is None:
            unbounded = True
        else:
            raising = max(raising, op.raising[0])
        guard = max(guard, op.guard[0])
        total_raising = max(total_raising, op.total_raising)
        total_guard = _max_opt(total_guard, op.total_guard)
        for (j,), col in op.cols.items():
            b = [0, 0]
            b[wpos], b[cpos] = j, t
            dst = cols.setdefault(tuple(b), {})
            for (jo,), v in col.items():
                o = [0, 0]
                o[wpos], o[cpos] = jo, s
                _add_into(dst, {tuple(o): v})
    return FockOp(space, cols, raising=(None if unbounded else raising,), guard=(guard,),
                  total_raising=total_raising, total_guard=total_guard)


def block_basis(space: FockSpace, m: int) -> list[Basis]:
    """Basis of the degree-``m`` block, ordered lexicographically.

    For two Fock legs this is ``w_j (x) w_{m-j}`` for ``j = 0 .. m``.
    """
    if space.two_legs:
        raise BlockError("graded blocks are defined on pure Fock spaces")
    nf = space.fock_legs
    out = [b for b in itertools.product(range(m + 1), repeat=nf) if sum(b) == m]
    return sorted(out)


def from_blocks(space: FockSpace, blocks: Mapping[int, Sequence[Sequence]]) -> FockOp:
    """Block-preserving operator from exact block matrices.

    ``blocks[m]`` is the matrix on :func:`block_basis` ``(space, m)``; blocks
    must be given for ``m = 0 .. M``. The result is exact for total degree at
    most ``min(M, N)``.
    """
    top = max(blocks)
    if sorted(blocks) != list(range(top + 1)):
        raise BlockError("blocks must be contiguous from degree 0")
    cols: dict = {}
    for m in range(min(top, space.n) + 1):
        basis = block_basis(space, m)
        mat = blocks[m]
        if len(mat) != len(basis):
            raise BlockError(f"block {m} has wrong size")
        for jc, b in enumerate(basis):
            col = {basis[jr]: as_scalar(mat[jr][jc]) for jr in range(len(basis)) if mat[jr][jc]}
            if col:
                cols[b] = col
    nf = space.fock_legs
    return FockOp(space, cols, raising=(None,) * nf, guard=(0,) * nf,
                  total_raising=0, total_guard=max(space.n - top, 0))


def restrict_to_block(x: FockOp, m: int) -> list[list[Fraction]]:
    """Matrix of a block-preserving operator on the degree-``m`` block.

    Raises :class:`BlockError` when the block leaves the exactness window or
    when some column of the block leaves the block.
    """
    if not x.is_square:
        raise BlockError("restriction needs a square operator")
    basis = block_basis(x.dom, m)
    if m > x.dom.n:
        raise BlockError(f"block {m} exceeds truncation {x.dom.n}")
    pos = {b: i for i, b in enumerate(basis)}
    mat = [[Fraction(0)] * len(basis) for _ in basis]
    for jc, b in enumerate(basis):
        if not x.in_window(b):
            raise BlockError(f"block {m} not inside the exactness window")
        for o, v in x.cols.get(b, {}).items():
            if o not in pos:
                raise BlockError(f"operator does not preserve block {m}")
            mat[pos[o]][jc] = v
    return mat


# -- operations -------------------------------------------------------

def compose(a: FockOp, b: FockOp) -> FockOp:
    """The product ``a b`` (apply ``b`` first) with window propagation."""
    if a.dom != b.cod:
        raise ValueError("incompatible spaces for composition")
    cols: dict = {}
    acols = a.cols
    for inp, col in b.cols.items():
        out: dict = {}
        for mid, c in col.items():
            acol = acols.get(mid)
            if acol:
                for o, v in acol.items():
                    nv = out.get(o, 0) + c * v
                    if nv:
                        out[o] = nv
                    else:
                        del out[o]
        if out:
            cols[inp] = out
    guard, raising = [], []
    total_guard = b.total_guard
    if a.total_guard is not None:
        total_guard = _max_opt(total_guard, a.total_guard + b.total_raising)
    for ga, gb, ra, rb in zip(a.guard, b.guard, a.raising, b.raising):
        if rb is None:
            guard.append(gb)
            if ga:
                total_guard = _max_opt(total_guard, ga + b.total_raising)
        else:
            guard.append(max(gb, ga + rb))
        raising.append(None if ra is None or rb is None else ra + rb)
    return FockOp(b.dom, cols, cod=a.cod, raising=raising, guard=guard,
                  total_raising=a.total_raising + b.total_raising, total_guard=total_guard)


def add(a: FockOp, b: FockOp, c=1) -> FockOp:
    """``a + c b`` with componentwise-maximal metadata."""
    if a.dom != b.dom or a.cod != b.cod:
        raise ValueError("incompatible spaces for addition")
    c = as_scalar(c)
    cols = {k: dict(v) for k, v in a.cols.items()}
    for inp, col in b.cols.items():
        dst = cols.setdefault(inp, {})
        _add_into(dst, col, c)
    raising = tuple(None if x is None or y is None else max(x, y) for x, y in zip(a.raising, b.raising))
    guard = tuple(max(x, y) for x, y in zip(a.guard, b.guard))
    return FockOp(a.dom, cols, cod=a.cod, raising=raising, guard=guard,
                  total_raising=max(a.total_raising, b.total_raising),
                  total_guard=_max_opt(a.total_guard, b.total_guard))


def scale(a: FockOp, c) -> FockOp:
    c = as_scalar(c)
    cols = {} if not c else {k: {o: c * v for o, v in col.items()} for k, col in a.cols.items()}
    return FockOp(a.dom, cols, cod=a.cod, **a.meta())


def linear_combination(terms: Iterable[tuple[object, FockOp]]) -> FockOp:
    result = None
    for c, op in terms:
        result = scale(op, c) if result is None else add(result, op, c)
    if result is None:
        raise ValueError("empty linear combination")
    return result


def tensor(a: FockOp, b: FockOp) -> FockOp:
    """``a (x) b`` on the concatenated layouts."""
    if a.total_guard is not None and b.dom.fock_legs:
        raise ValueError("a total-degree window cannot be tensored with further Fock legs")
    if b.total_guard is not None and a.dom.fock_legs:
        raise ValueError("a total-degree window cannot be tensored with further Fock legs")
    cols: dict = {}
    for ia, ca in a.cols.items():
        for ib, cb in b.cols.items():
            cols[ia + ib] = {oa + ob: va * vb for oa, va in ca.items() for ob, vb in cb.items()}
    return FockOp(a.dom * b.dom, cols, cod=a.cod * b.cod,
                  raising=a.raising + b.raising, guard=a.guard + b.guard,
                  total_raising=a.total_raising + b.total_raising,
                  total_guard=_max_opt(a.total_guard, b.total_guard))


def embed(op: FockOp, space: FockSpace, legs: Sequence[int]) -> FockOp:
    """Place a square operator on the legs ``legs`` of ``space``.

    Leg ``i`` of ``op`` goes to position ``legs[i]``; all other legs carry the
    identity.
    """
    if not op.is_square:
        raise ValueError("only square operators can be embedded")
    legs = tuple(legs)
    if len(legs) != len(op.dom.layout) or len(set(legs)) != len(legs):
        raise ValueError("bad leg assignment")
    for i, t in enumerate(legs):
        if space.layout[t] != op.dom.layout[i] or space.n != op.dom.n:
            raise ValueError("leg kinds or truncation do not match")
    if op.total_guard is not None and sum(op.dom.layout[i] == "W" for i in range(len(legs))) != space.fock_legs:
        raise ValueError("a total-degree window must cover every Fock leg")
    cols: dict = {}
    for b in space.basis:
        sub = tuple(b[t] for t in legs)
        col = op.cols.get(sub)
        if not col:
            continue
        out = {}
        for o, v in col.items():
            nb = list(b)
            for i, t in enumerate(legs):
                nb[t] = o[i]
            out[tuple(nb)] = v
        cols[b] = out
    raising = [0] * space.fock_legs
    guard = [0] * space.fock_legs
    target_fock = space.fock_positions
    src_fock = op.dom.fock_positions
    for k, i in enumerate(src_fock):
        slot = target_fock.index(legs[i])
        raising[slot] = op.raising[k]
        guard[slot] = op.guard[k]
    return FockOp(space, cols, raising=raising, guard=guard,
                  total_raising=op.total_raising, total_guard=op.total_guard)


def permute_legs(op: FockOp, perm: Sequence[int]) -> FockOp:
    """Move leg ``i`` of a square operator to position ``perm[i]``."""
    layout = [None] * len(perm)
    for i, t in enumerate(perm):
        layout[t] = op.dom.layout[i]
    return embed(op, FockSpace(op.dom.n, tuple(layout)), perm)


def flip_legs(op: FockOp) -> FockOp:
    """Reverse the order of the tensor legs (the flip for two legs)."""
    n = len(op.dom.layout)
    return permute_legs(op, tuple(range(n - 1, -1, -1)))


def invert(op: FockOp) -> FockOp:
    """Exact inverse of a charge-preserving square operator.

    The charge of a basis vector is its Fock degree plus its number of ``v-``
    factors. Sectors of fixed charge ``c <= N`` are complete in the
    truncation, so the inverse is computed sector by sector on every complete
    sector that lies inside the window of ``op``.
    """
    if not op.is_square or not op.is_charge_preserving:
        raise ValueError("inversion needs a square charge-preserving operator")
    space = op.dom
    sectors: dict[int, list[Basis]] = {}
    for b in space.basis:
        sectors.setdefault(space.charge(b), []).append(b)
    cols: dict = {}
    top = -1
    for c in range(space.n + 1):
        basis = sectors.get(c, [])
        if not all(op.in_window(b) for b in basis):
            break
        pos = {b: i for i, b in enumerate(basis)}
        mat = [[Fraction(0)] * len(basis) for _ in basis]
        for jc, b in enumerate(basis):
            for o, v in op.cols.get(b, {}).items():
                mat[pos[o]][jc] = v
        inv = mat_inverse(mat)
        for jc, b in enumerate(basis):
            col = {basis[jr]: inv[jr][jc] for jr in range(len(basis)) if inv[jr][jc]}
            if col:
                cols[b] = col
        top = c
    if top < 0:
        raise ValueError("no complete sector inside the window")
    nf = space.fock_legs
    extra = space.two_legs
    raising = (extra,) * nf if nf == 1 else (None,) * nf
    return FockOp(space, cols, raising=raising, guard=(0,) * nf,
                  total_raising=extra, total_guard=space.n - top + extra)


# -- comparison -------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """A basis vector on which two operators differ, with both images."""

    basis: Basis
    left: dict
    right: dict

    def to_dict(self) -> dict:
        def ser(col):
            return {",".join(map(str, k)): format_scalar(v) for k, v in sorted(col.items())}
        return {"basis": list(self.basis), "left": ser(self.left), "right": ser(self.right)}


@dataclass(frozen=True)
class Comparison:
    equal: bool
    witness: Witness | None
    checked: int

    def __bool__(self) -> bool:
        return self.equal


def common_window(x: FockOp, y: FockOp) -> list[Basis]:
    return [b for b in x.dom.basis if x.in_window(b) and y.in_window(b)]


def agree_on_window(x: FockOp, y: FockOp, basis: Iterable[Basis] | None = None) -> Comparison:
    """Compare two operators column by column on their common window.

    The witness is the lexicographically smallest differing basis vector.
    Raises :class:`EmptyWindowError` when there is nothing to compare.
    """
    if x.dom != y.dom or x.cod != y.cod:
        raise ValueError("operators act on different spaces")
    window = common_window(x, y) if basis is None else [b for b in basis if x.in_window(b) and y.in_window(b)]
    if not window:
        raise EmptyWindowError("common exactness window is empty")
    for b in sorted(window):
        cx, cy = x.cols.get(b, {}), y.cols.get(b, {})
        if cx != cy:
            return Comparison(False, Witness(b, cx, cy), len(window))
    return Comparison(True, None, len(window))


def is_zero_on_window(x: FockOp) -> Comparison:
    return agree_on_window(x, zero(x.dom, x.cod).with_meta(**x.meta()))


def truncation_agrees(build: Callable[[int], FockOp], n: int, extra: int = 4) -> Comparison:
    """Check that an operator built at truncation ``n`` matches ``n + extra``.

    Every column in the window of the small truncation must coincide exactly
    with the corresponding column of the larger truncation.
    """
    small, big = build(n), build(n + extra)
    window = small.window()
    if not window:
        raise EmptyWindowError("window is empty")
    for b in sorted(window):
        cs, cb = small.cols.get(b, {}), big.cols.get(b, {})
        if cs != cb:
            return Comparison(False, Witness(b, cs, cb), len(window))
    return Comparison(True, None, len(window))


# -- serialisation ----------------------------------------------------

def dump(op: FockOp) -> str:
    """Text form: header ``N L legs2 layout`` then ``out in value`` rows.

    Indices are flat mixed-radix indices of the basis tuples; values are
    written as ``num/den``.
    """
    if not op.is_square:
        raise ValueError("only square operators are dumped")
    s = op.dom
    layout = "".join("W" if k == "W" else "C" for k in s.layout)
    lines = [f"{s.n} {s.fock_legs} {s.two_legs} {layout}"]
    rows = []
    for b, col in op.cols.items():
        for o, v in col.items():
            rows.append((s.index(o), s.index(b), v))
    for o, i, v in sorted(rows):
        lines.append(f"{o} {i} {format_scalar(v)}")
    return "\n".join(lines) + "\n"


def load(text: str) -> FockOp:
    """Inverse of :func:`dump`; the result carries trivial window metadata."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    n, nf, n2 = int(head[0]), int(head[1]), int(head[2])
    if len(head) > 3:
        layout = tuple("W" if ch == "W" else "C2" for ch in head[3])
    else:
        layout = ("W",) * nf + ("C2",) * n2
    space = FockSpace(n, layout)
    basis = space.basis
    cols: dict = {}
    for ln in lines[1:]:
        o, i, v = ln.split()
        cols.setdefault(basis[int(i)], {})[basis[int(o)]] = as_scalar(v)
    return FockOp(space, cols)
