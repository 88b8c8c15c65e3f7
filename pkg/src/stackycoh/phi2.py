"""Constructive check that ``Phi_2^{p,q}: H^p(G, H^q(J)) -> H^{p+2}(G, H^{q-1}(J))``
vanishes for a complex ``J`` of finite abelian groups with trivial action.

For each generator of the group cocycles ``G^p -> H^q(J)`` the map is
built step by step: lift values to cycles of ``J^q``, apply the group
coboundary (which lands in boundaries), divide by ``d: J^{q-1} -> J^q``,
apply the group coboundary again and project to ``H^{q-1}(J)``.  The
result is a cocycle whose class is tested for being zero.

Cochains are normalised bar cochains, so every cochain group is a finite
direct sum of copies of the coefficient group.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .gcoh import _check_budget, bar_coboundary, bar_differential_columns, bar_index, bar_tuples
from .groups import FiniteGroup
from .zlin import (
    AbelianGroup,
    AbelianHom,
    IntegerMatrix,
    IntegerSolver,
    PresentedGroup,
    ZlinError,
)


class ComplexError(ValueError):
    """Malformed cochain complex."""


@dataclass
class CochainComplexSpec:
    """``J^0 -> J^1 -> ... -> J^n`` of canonical finite abelian groups.

    ``differentials[k]`` is a homomorphism between the standard
    presentations of ``terms[k]`` and ``terms[k+1]``.
    """

    terms: list[AbelianGroup]
    differentials: list[AbelianHom]

    def __post_init__(self):
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise ComplexError("need exactly one differential between consecutive terms")
        for k, d in enumerate(self.differentials):
            if d.domain.group != self.terms[k] or d.codomain.group != self.terms[k + 1]:
                raise ComplexError(f"differential {k} has the wrong domain or codomain")
        for k in range(len(self.differentials) - 1):
            if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                raise ComplexError(f"d{k + 1} o d{k} is not zero")

    def presentation(self, k: int) -> PresentedGroup:
        if k < 0 or k >= len(self.terms):
            return PresentedGroup.free(0)
        if k < len(self.differentials):
            return self.differentials[k].domain
        if k:
            return self.differentials[k - 1].codomain
        return self.terms[0].presentation()

    def differential(self, k: int) -> AbelianHom:
        """``d^k: J^k -> J^{k+1}``, zero outside the stored range."""
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return AbelianHom.zero(self.presentation(k), self.presentation(k + 1))

    @classmethod
    def with_zero_differentials(cls, terms: Sequence[AbelianGroup]) -> CochainComplexSpec:
        pres = [t.presentation() for t in terms]
        diffs = [AbelianHom.zero(pres[k], pres[k + 1]) for k in range(len(terms) - 1)]
        return cls(list(terms), diffs)


class _Homology:
    """``H^q(J)`` presented on a basis of the cycle group."""

    def __init__(self, spec: CochainComplexSpec, q: int):
        self.ambient = spec.presentation(q)
        cyc_grp, inc = spec.differential(q).kernel()
        self.cycles = inc.matrix  # columns are cycles in J^q generators
        prev = spec.differential(q - 1).matrix if q >= 1 else \
            IntegerMatrix.zeros(self.ambient.ngens, 0)
        # cycles modulo boundaries, as a quotient of the cycle presentation
        stacked = self.cycles.hstack(self.ambient.relations)
        self._solver = IntegerSolver(stacked)
        rels = [self._in_cycles(col) for col in prev.columns()]
        rel_mat = cyc_grp.relations.hstack(IntegerMatrix.from_columns(rels, self.cycles.ncols))
        self.presented = PresentedGroup(self.cycles.ncols, rel_mat)
        self.group = self.presented.group

    def _in_cycles(self, x: Sequence[int]) -> tuple[int, ...]:
        sol = self._solver.solve(x)
        if sol is None:
            raise ZlinError("element is not a cycle")
        return sol[:self.cycles.ncols]

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of the cycle ``x``."""
        return self.presented.coords(self._in_cycles(x))

    def lift(self, c: Sequence[int]) -> tuple[int, ...]:
        """A cycle in ``J^q`` representing canonical coordinates ``c``."""
        return self.cycles @ self.presented.lift(c)


def _cochain_module(group: FiniteGroup, r: int, coeff: AbelianGroup) -> PresentedGroup:
    """``C^r(G, A)`` as a presented group, coordinates ordered tuple-major."""
    n = len(bar_tuples(group, r))
    orders = coeff.generator_orders
    k = len(orders)
    rels = []
    for t in range(n):
        for i, o in enumerate(orders):
            if o:
                col = [0] * (n * k)
                col[t * k + i] = o
                rels.append(col)
    return PresentedGroup(n * k, IntegerMatrix.from_columns(rels, n * k))


def _coboundary_matrix(group: FiniteGroup, r: int, k: int) -> IntegerMatrix:
    """``d_G (x) I_k`` on normalised cochains with ``k`` coordinates."""
    nrows, cols = bar_differential_columns(group, r)
    ncols = len(cols)
    rows = [[0] * (ncols * k) for _ in range(nrows * k)]
    for j, c in enumerate(cols):
        for i, v in c.items():
            for a in range(k):
                rows[i * k + a][j * k + a] = v
    return IntegerMatrix(rows, ncols * k)


class CoboundaryTest:
    """Membership of normalised ``r``-cochains in ``B^r(G, A)``."""

    def __init__(self, group: FiniteGroup, r: int, coeff: AbelianGroup):
        if r < 1:
            raise ValueError("coboundaries live in degree >= 1")
        self.group, self.r, self.coeff = group, r, coeff
        k = coeff.ngens
        top = _cochain_module(group, r, coeff)
        self._solver = IntegerSolver(_coboundary_matrix(group, r - 1, k).hstack(top.relations))
        self._index = bar_index(group, r)
        self._size = len(bar_tuples(group, r)) * k

    def vector(self, cochain: dict[tuple[int, ...], Sequence[int]]) -> list[int]:
        k = self.coeff.ngens
        vec = [0] * self._size
        for t, c in cochain.items():
            base = self._index[t] * k
            for a, x in enumerate(c):
                vec[base + a] = x
        return vec

    def __call__(self, cochain: dict[tuple[int, ...], Sequence[int]]) -> bool:
        return self._solver.solve(self.vector(cochain)) is not None


@dataclass
class GeneratorVerdict:
    cocycle: dict[tuple[int, ...], tuple[int, ...]]
    image: dict[tuple[int, ...], tuple[int, ...]]
    zero: bool


@dataclass
class Phi2Report:
    """Outcome of one vanishing check."""

    group: str
    p: int
    q: int
    source: AbelianGroup  # H^q(J)
    target: AbelianGroup  # H^{q-1}(J)
    matrix: list[list[int]]  # image cochain coordinates, one column per generator
    generators: list[GeneratorVerdict] = field(default_factory=list)

    @property
    def zero(self) -> bool:
        return all(g.zero for g in self.generators)

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "p": self.p,
            "q": self.q,
            "source": str(self.source),
            "target": str(self.target),
            "generators": len(self.generators),
            "verdicts": [g.zero for g in self.generators],
            "zero": self.zero,
        }


def _jitter(rng: random.Random | None, gens: IntegerMatrix, dim: int) -> tuple[int, ...]:
    """Random integer combination of the columns of ``gens`` (zero without ``rng``)."""
    if rng is None or gens.ncols == 0:
        return (0,) * dim
    return gens @ [rng.randint(-3, 3) for _ in range(gens.ncols)]


def phi2_vanishing_check(group: FiniteGroup, j: CochainComplexSpec, p: int, q: int,
                         rng: random.Random | None = None) -> Phi2Report:
    """Build ``Phi_2^{p,q}`` on generators of the cocycles and test each image.

    With ``rng`` every choice in the construction (the lift to cycles and the
    preimage under ``d``) is perturbed by a random element of the ambiguity,
    so the image cochain changes but its class must not.

    Raises :class:`~stackycoh.gcoh.BudgetExceeded` when ``|G|^(p+2)`` is over
    the oracle budget.
    """
    if p < 0 or q < 1:
        raise ValueError("need p >= 0 and q >= 1")
    _check_budget(group, p + 2, f"Phi_2 check over {group}")
    top = _Homology(j, q)
    low = _Homology(j, q - 1)
    M, M1 = top.group, low.group
    k = M.ngens
    dq1 = j.differential(q - 1)
    jq = j.presentation(q)
    jq1 = j.presentation(q - 1)
    divide = IntegerSolver(dq1.matrix.hstack(jq.relations))

    # generators of the group cocycles G^p -> M
    cp = _cochain_module(group, p, M)
    cp1 = _cochain_module(group, p + 1, M)
    dG = AbelianHom(cp, cp1, _coboundary_matrix(group, p, k))
    _, inc = dG.kernel()
    coboundary_test = CoboundaryTest(group, p + 2, M1)

    tuples_p = bar_tuples(group, p)
    report = Phi2Report(str(group), p, q, M, M1, [])
    columns = []
    for col in inc.matrix.columns():
        f = {}
        for t_i, t in enumerate(tuples_p):
            c = M.presentation().reduce_canonical(col[t_i * k:(t_i + 1) * k])
            if any(c):
                f[t] = tuple(c)
        ambiguity = dq1.matrix.hstack(jq.relations)
        lifted = {}
        for t, c in f.items():
            jit = _jitter(rng, ambiguity, jq.ngens)
            lifted[t] = tuple(a + b for a, b in zip(top.lift(c), jit))
        dg_lift = bar_coboundary(group, lifted, p, jq.ngens)
        nu = {}
        for t, val in dg_lift.items():
            sol = divide.solve(val)
            if sol is None:
                raise ArithmeticError("coboundary of the lift is not a boundary in J")
            jit = _jitter(rng, low.cycles.hstack(jq1.relations), jq1.ngens)
            x = tuple(a + b for a, b in zip(sol[:dq1.matrix.ncols], jit))
            if any(x):
                nu[t] = x
        dg_nu = bar_coboundary(group, nu, p + 1, jq1.ngens)
        image = {t: low.project(v) for t, v in dg_nu.items()}
        image = {t: c for t, c in image.items() if any(c)}
        columns.append(coboundary_test.vector(image))
        zero = coboundary_test(image)
        report.generators.append(GeneratorVerdict(f, image, zero))
    report.matrix = [list(row) for row in zip(*columns)] if columns else []
    return report


# ---------------------------------------------------------------------------
# random small complexes


SMALL_GROUPS = [(2,), (3,), (4,), (5,), (6,), (7,), (8,), (2, 2), (2, 4), (2, 2, 2), ()]
# families sharing a prime, so that random maps are rarely forced to be zero
_FAMILIES = [
    [(2,), (4,), (8,), (2, 2), (2, 4), (2, 2, 2), (6,)],
    [(3,), (6,), ()],
    SMALL_GROUPS,
]


def random_hom(rng: random.Random, a: AbelianGroup, b: AbelianGroup) -> list[list[int]]:
    """Random matrix of a well-defined map between canonical finite groups."""
    cols = []
    for oa in a.generator_orders:
        col = []
        for ob in b.generator_orders:
            step = ob // math.gcd(oa, ob)
            col.append(step * rng.randrange(ob // step) if ob > 1 else 0)
        cols.append(col)
    return [list(r) for r in zip(*cols)] if cols else [[] for _ in b.generator_orders]


def random_complex(rng: random.Random, length: int = 3) -> CochainComplexSpec:
    """Random ``J^0 -> ... -> J^{length-1}`` with terms of order at most 8."""
    family = rng.choice(_FAMILIES)
    terms = [AbelianGroup.from_cyclic_orders(rng.choice(family)) for _ in range(length)]
    pres = [t.presentation() for t in terms]
    diffs: list[AbelianHom] = []
    for k in range(length - 1):
        if k == 0:
            mat = random_hom(rng, terms[0], terms[1])
            diffs.append(AbelianHom(pres[0], pres[1], IntegerMatrix(mat, pres[0].ngens)))
            continue
        # factor through the cokernel of the previous map so that d o d = 0
        coker, _ = diffs[-1].cokernel()
        phi = random_hom(rng, coker.group, terms[k + 1])
        phi_m = IntegerMatrix(phi, coker.group.ngens)
        cols = []
        for e in range(pres[k].ngens):
            unit = [int(i == e) for i in range(pres[k].ngens)]
            cols.append(phi_m @ coker.coords(unit))
        mat = IntegerMatrix.from_columns(cols, pres[k + 1].ngens)
        diffs.append(AbelianHom(pres[k], pres[k + 1], mat))
    return CochainComplexSpec(terms, diffs)
