"""Exact verification of boundary factorisation identities for q-oscillator
representations of quantum affine sl2.

Modules: :mod:`exactq` (scalars, q-functions, parameter sampling),
:mod:`fock` (truncated Fock operators with exactness windows), :mod:`reps`
(representations), :mod:`operators` (closed-form L, K, R, O and fusion maps),
:mod:`solvers` (linear-equation oracles), :mod:`verify` (suite registry) and
:mod:`cli`.
"""

__version__ = "0.1.0"
