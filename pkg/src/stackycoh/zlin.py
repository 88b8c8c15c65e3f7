"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works over the integers with Python's unbounded ``int``;
there is no fixed-width arithmetic anywhere.  Matrices act on column
vectors: a presentation with ``n`` generators and relation matrix ``R``
(shape ``n x k``) describes ``Z^n / colspan(R)``, and a homomorphism is an
``m x n`` matrix sending generator ``j`` of the domain to column ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


class ZlinError(ValueError):
    """Dimension mismatches and ill-defined maps."""


class ExactnessError(ArithmeticError):
    """Raised when a sequence that must be exact is not."""


# ---------------------------------------------------------------------------
# matrices


class IntegerMatrix:
    """Immutable dense integer matrix that remembers its shape when empty."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ZlinError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ZlinError(f"ragged row of length {len(r)}, expected {ncols}")
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntegerMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None,
                 ncols: int | None = None) -> IntegerMatrix:
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        out = [[0] * ncols for _ in range(nrows)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls(out, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntegerMatrix:
        for c in columns:
            if len(c) != nrows:
                raise ZlinError(f"column of length {len(c)}, expected {nrows}")
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> IntegerMatrix:
        return IntegerMatrix(self.columns(), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.ncols != other.nrows:
                raise ZlinError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return IntegerMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ZlinError(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise ZlinError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntegerMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def __neg__(self) -> IntegerMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        return self + (-other)

    def scale(self, c: int) -> IntegerMatrix:
        return IntegerMatrix([[c * a for a in r] for r in self.rows], self.ncols)

    def hstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.nrows != other.nrows:
            raise ZlinError("hstack needs equal row counts")
        return IntegerMatrix([a + b for a, b in zip(self.rows, other.rows)],
                             self.ncols + other.ncols)

    def vstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.ncols:
            raise ZlinError("vstack needs equal column counts")
        return IntegerMatrix(self.rows + other.rows, self.ncols)

    def select_rows(self, idx: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix([self.rows[i] for i in idx], self.ncols)

    def select_columns(self, idx: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ZlinError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.shape == other.shape \
            and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"IntegerMatrix({self.to_lists()!r}, ncols={self.ncols})"


# ---------------------------------------------------------------------------
# Smith normal form


class SmithForm(NamedTuple):
    u: IntegerMatrix
    d: IntegerMatrix
    v: IntegerMatrix


@dataclass
class _SNFState:
    """Diagonal plus sparse transforms: rows of ``u``, columns of ``u^-1``
    and columns of ``v``, each a dict from index to nonzero entry."""

    diag: list[int]
    u: list[dict[int, int]] | None
    uinv: list[dict[int, int]] | None
    v: list[dict[int, int]] | None


def _unit_dicts(n):
    return [{i: 1} for i in range(n)]


def _axpy(y: dict[int, int], q: int, x: dict[int, int]) -> None:
    """``y -= q * x`` in place on sparse vectors."""
    for k, val in x.items():
        nv = y.get(k, 0) - q * val
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def _sparse_dot(row: dict[int, int], x: Sequence[int]) -> int:
    return sum(val * x[k] for k, val in row.items())


def _snf_core(a: list[list[int]], nrows: int, ncols: int, track_u=False, track_v=False) -> _SNFState:
    """Diagonalise ``a`` in place with unimodular row and column operations.

    Row operations are recorded in ``u`` (and ``uinv``), column operations in
    ``v``, so that ``u @ A @ v`` equals the returned diagonal.
    """
    u = _unit_dicts(nrows) if track_u else None
    uinv = _unit_dicts(nrows) if track_u else None  # columns
    v = _unit_dicts(ncols) if track_v else None  # columns

    def row_sub(i, t, q):  # row_i -= q * row_t
        ri, rt = a[i], a[t]
        for j in range(ncols):
            if rt[j]:
                ri[j] -= q * rt[j]
        if u is not None:
            _axpy(u[i], q, u[t])
            _axpy(uinv[t], -q, uinv[i])  # col_t += q * col_i

    def col_sub(j, t, q):  # col_j -= q * col_t
        for row in a:
            if row[t]:
                row[j] -= q * row[t]
        if v is not None:
            _axpy(v[j], q, v[t])

    def row_swap(i, t):
        a[i], a[t] = a[t], a[i]
        if u is not None:
            u[i], u[t] = u[t], u[i]
            uinv[i], uinv[t] = uinv[t], uinv[i]

    def col_swap(j, t):
        for row in a:
            row[j], row[t] = row[t], row[j]
        if v is not None:
            v[j], v[t] = v[t], v[j]

    def row_neg(t):
        a[t] = [-x for x in a[t]]
        if u is not None:
            u[t] = {k: -x for k, x in u[t].items()}
            uinv[t] = {k: -x for k, x in uinv[t].items()}

    diag = []
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // p)
                    if a[i][t]:
                        moved = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
                    if a[t][j]:
                        moved = True
            if moved:
                # a nonzero remainder is smaller than the pivot; bring it in
                best = None
                for i in range(t, nrows):
                    x = a[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t, ncols):
                    x = a[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                _, i, j = best
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)  # row_t += row_bad
        if a[t][t] < 0:
            row_neg(t)
        diag.append(a[t][t])
        t += 1
    return _SNFState(diag, u, uinv, v)


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """Return unimodular ``u``, ``v`` and diagonal ``d`` with ``u @ m @ v == d``.

    The diagonal is nonnegative and each entry divides the next.

    >>> smith_normal_form(IntegerMatrix([[2, 4], [6, 8]])).d
    IntegerMatrix([[2, 0], [0, 4]], ncols=2)
    """
    st = _snf_core(m.to_lists(), m.nrows, m.ncols, track_u=True, track_v=True)
    u = [[row.get(j, 0) for j in range(m.nrows)] for row in st.u]
    v = [[col.get(i, 0) for col in st.v] for i in range(m.ncols)]
    return SmithForm(
        IntegerMatrix(u, m.nrows),
        IntegerMatrix.diagonal(st.diag, m.nrows, m.ncols),
        IntegerMatrix(v, m.ncols),
    )


def elementary_divisors(m: IntegerMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    return _snf_core(m.to_lists(), m.nrows, m.ncols).diag


def integer_kernel(m: IntegerMatrix) -> IntegerMatrix:
    """Columns forming a basis of ``{x in Z^n : m x = 0}``."""
    st = _snf_core(m.to_lists(), m.nrows, m.ncols, track_v=True)
    cols = [[col.get(i, 0) for i in range(m.ncols)] for col in st.v[len(st.diag):]]
    return IntegerMatrix.from_columns(cols, m.ncols)


class IntegerSolver:
    """Repeated solving of ``m x = b`` over the integers with one Smith form."""

    def __init__(self, m: IntegerMatrix):
        self.m = m
        self._st = _snf_core(m.to_lists(), m.nrows, m.ncols, track_u=True, track_v=True)

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """Some integer ``x`` with ``m x = b``, or ``None`` if there is none."""
        b = tuple(b)
        m, st = self.m, self._st
        if len(b) != m.nrows:
            raise ZlinError("right-hand side has the wrong length")
        ub = [_sparse_dot(row, b) for row in st.u]
        y = [0] * m.ncols
        for i, dval in enumerate(st.diag):
            if ub[i] % dval:
                return None
            y[i] = ub[i] // dval
        if any(ub[i] for i in range(len(st.diag), m.nrows)):
            return None
        x = [0] * m.ncols
        for j in range(len(st.diag)):
            if y[j]:
                for i, val in st.v[j].items():
                    x[i] += val * y[j]
        return tuple(x)


def solve_integer(m: IntegerMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer ``x`` with ``m x = b``, or ``None`` if there is none."""
    return IntegerSolver(m).solve(b)


# ---------------------------------------------------------------------------
# canonical abelian groups


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``.

    Two instances are isomorphic exactly when they compare equal.
    """

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ZlinError("negative free rank")
        fs = self.invariant_factors
        for d in fs:
            if d < 2:
                raise ZlinError(f"invariant factor {d} is not >= 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ZlinError(f"invariant factors {fs} do not form a divisibility chain")

    @classmethod
    def trivial(cls) -> AbelianGroup:
        return cls()

    @classmethod
    def free(cls, n: int) -> AbelianGroup:
        return cls(n, ())

    @classmethod
    def cyclic(cls, d: int) -> AbelianGroup:
        """``Z/d``; ``d = 0`` gives ``Z`` and ``d = 1`` the trivial group."""
        return cls.from_cyclic_orders([d])

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> AbelianGroup:
        """Canonical form of a direct sum of cyclic groups (0 meaning ``Z``)."""
        orders = [abs(int(d)) for d in orders]
        free = sum(1 for d in orders if d == 0)
        finite = [d for d in orders if d > 1]
        if not finite:
            return cls(free, ())
        diag = elementary_divisors(IntegerMatrix.diagonal(finite))
        return cls(free, tuple(d for d in diag if d > 1))

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int | None:
        return math.prod(self.invariant_factors) if self.is_finite else None

    @property
    def exponent(self) -> int | None:
        if not self.is_finite:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def generator_orders(self) -> tuple[int, ...]:
        """Orders of the canonical generators, free first (0 = infinite)."""
        return (0,) * self.free_rank + self.invariant_factors

    def __add__(self, other: AbelianGroup) -> AbelianGroup:
        if not isinstance(other, AbelianGroup):
            return NotImplemented
        return AbelianGroup.from_cyclic_orders(self.generator_orders + other.generator_orders)

    def __mul__(self, n: int) -> AbelianGroup:
        """Direct sum of ``n`` copies."""
        return AbelianGroup.from_cyclic_orders(self.generator_orders * n)

    __rmul__ = __mul__

    def torsion(self) -> AbelianGroup:
        return AbelianGroup(0, self.invariant_factors)

    def n_torsion(self, n: int) -> AbelianGroup:
        """The subgroup ``A[n]``; for ``n = 0`` the whole group."""
        if n == 0:
            return self
        return AbelianGroup.from_cyclic_orders([math.gcd(d, n) for d in self.invariant_factors])

    def mod(self, n: int) -> AbelianGroup:
        """The quotient ``A / nA``."""
        if n == 0:
            return self
        return AbelianGroup.from_cyclic_orders(
            [n] * self.free_rank + [math.gcd(d, n) for d in self.invariant_factors])

    def tensor(self, other: AbelianGroup) -> AbelianGroup:
        orders = []
        for a in self.generator_orders:
            for b in other.generator_orders:
                orders.append(math.gcd(a, b))
        return AbelianGroup.from_cyclic_orders(orders)

    def tor(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup.from_cyclic_orders(
            [math.gcd(a, b) for a in self.invariant_factors for b in other.invariant_factors])

    def presentation(self) -> PresentedGroup:
        return PresentedGroup.standard(self)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> AbelianGroup:
        """Inverse of ``str``; also accepts ``Z``, ``Z^0`` and ``Z/1``."""
        text = text.strip()
        if text in ("0", ""):
            return cls()
        orders = []
        for tok in text.split("+"):
            tok = tok.strip().replace(" ", "")
            if tok == "Z":
                orders.append(0)
            elif tok.startswith("Z^"):
                orders += [0] * int(tok[2:])
            elif tok.startswith("Z/"):
                orders.append(int(tok[2:]))
            else:
                raise ValueError(f"cannot parse group summand {tok!r}")
        return cls.from_cyclic_orders(orders)


# ---------------------------------------------------------------------------
# presented groups and homomorphisms


class PresentedGroup:
    """``Z^ngens / colspan(relations)`` with canonical coordinates.

    ``coords`` maps a generator-coordinate vector to its canonical
    coordinates (free part first, torsion entries reduced), and ``lift``
    goes back.  Both come from one Smith form of the relation matrix.
    """

    def __init__(self, ngens: int, relations: IntegerMatrix | Sequence[Sequence[int]] = ()):
        if not isinstance(relations, IntegerMatrix):
            relations = IntegerMatrix.from_columns([tuple(r) for r in relations], ngens)
        if relations.nrows != ngens:
            raise ZlinError(f"relations have {relations.nrows} rows, expected {ngens}")
        self.ngens = ngens
        self.relations = relations

    @classmethod
    def standard(cls, group: AbelianGroup) -> PresentedGroup:
        orders = group.generator_orders
        rels = [tuple(d * int(i == j) for i in range(len(orders)))
                for j, d in enumerate(orders) if d]
        return cls(len(orders), IntegerMatrix.from_columns(rels, len(orders)))

    @classmethod
    def free(cls, n: int) -> PresentedGroup:
        return cls(n, IntegerMatrix.zeros(n, 0))

    @cached_property
    def _snf(self) -> _SNFState:
        r = self.relations
        return _snf_core(r.to_lists(), r.nrows, r.ncols, track_u=True)

    @cached_property
    def _layout(self) -> tuple[list[int], list[int], list[int]]:
        diag = self._snf.diag
        free_idx = list(range(len(diag), self.ngens))
        tors_idx = [i for i, d in enumerate(diag) if d > 1]
        orders = [0] * len(free_idx) + [diag[i] for i in tors_idx]
        return free_idx + tors_idx, orders, diag

    @cached_property
    def group(self) -> AbelianGroup:
        _, orders, _ = self._layout
        return AbelianGroup(sum(1 for o in orders if o == 0), tuple(o for o in orders if o))

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ngens:
            raise ZlinError(f"vector of length {len(x)} in a group with {self.ngens} generators")
        idx, orders, _ = self._layout
        u = self._snf.u
        out = []
        for i, o in zip(idx, orders):
            y = _sparse_dot(u[i], x)
            out.append(y % o if o else y)
        return tuple(out)

    def lift(self, c: Sequence[int]) -> tuple[int, ...]:
        idx, _, _ = self._layout
        uinv = self._snf.uinv
        out = [0] * self.ngens
        for i, ci in zip(idx, c):
            if ci:
                for k, val in uinv[i].items():
                    out[k] += val * ci
        return tuple(out)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.coords(x))

    def reduce_canonical(self, c: Sequence[int]) -> tuple[int, ...]:
        return tuple(ci % o if o else ci for ci, o in zip(c, self.group.generator_orders))

    def __repr__(self):
        return f"PresentedGroup({self.ngens}, {self.relations.to_lists()!r}) ~ {self.group}"


class AbelianHom:
    """Homomorphism of presented groups given on generators.

    Well-definedness (relations of the domain land in the relation
    lattice of the codomain) is checked on construction.
    """

    def __init__(self, domain: PresentedGroup, codomain: PresentedGroup,
                 matrix: IntegerMatrix | Sequence[Sequence[int]], check: bool = True):
        if not isinstance(matrix, IntegerMatrix):
            matrix = IntegerMatrix(matrix, domain.ngens)
        if matrix.shape != (codomain.ngens, domain.ngens):
            raise ZlinError(f"matrix shape {matrix.shape} does not match "
                            f"{codomain.ngens} x {domain.ngens}")
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        if check:
            for rel in domain.relations.columns():
                if not codomain.is_zero(matrix @ rel):
                    raise ZlinError("matrix does not respect the domain relations")

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.matrix @ x

    def __matmul__(self, other: AbelianHom) -> AbelianHom:
        """Composition ``self o other``."""
        if other.codomain is not self.domain and other.codomain.ngens != self.domain.ngens:
            raise ZlinError("maps are not composable")
        return AbelianHom(other.domain, self.codomain, self.matrix @ other.matrix, check=False)

    def scale(self, n: int) -> AbelianHom:
        return AbelianHom(self.domain, self.codomain, self.matrix.scale(n), check=False)

    @classmethod
    def identity(cls, g: PresentedGroup) -> AbelianHom:
        return cls(g, g, IntegerMatrix.identity(g.ngens), check=False)

    @classmethod
    def zero(cls, a: PresentedGroup, b: PresentedGroup) -> AbelianHom:
        return cls(a, b, IntegerMatrix.zeros(b.ngens, a.ngens), check=False)

    @classmethod
    def between_canonical(cls, a: AbelianGroup, b: AbelianGroup,
                          matrix: Sequence[Sequence[int]]) -> AbelianHom:
        return cls(a.presentation(), b.presentation(), IntegerMatrix(matrix, a.ngens))

    def canonical_matrix(self) -> IntegerMatrix:
        """Matrix on the canonical generators of domain and codomain, reduced."""
        cols = []
        for j in range(self.domain.group.ngens):
            e = [int(i == j) for i in range(self.domain.group.ngens)]
            cols.append(self.codomain.coords(self.matrix @ self.domain.lift(e)))
        return IntegerMatrix.from_columns(cols, self.codomain.group.ngens)

    def equals(self, other: AbelianHom) -> bool:
        """Equality as maps (agreement on every generator modulo relations)."""
        diff = self.matrix - other.matrix
        return all(self.codomain.is_zero(c) for c in diff.columns())

    def is_zero(self) -> bool:
        return all(self.codomain.is_zero(c) for c in self.matrix.columns())

    # subobjects -----------------------------------------------------------

    def kernel(self) -> tuple[PresentedGroup, AbelianHom]:
        """Kernel as a presented group with its inclusion into the domain."""
        stacked = self.matrix.hstack(self.codomain.relations)
        k = integer_kernel(stacked)
        gens = k.select_rows(range(self.domain.ngens))
        return submodule(self.domain, gens)

    def image(self) -> tuple[PresentedGroup, AbelianHom]:
        return submodule(self.codomain, self.matrix)

    def cokernel(self) -> tuple[PresentedGroup, AbelianHom]:
        c = PresentedGroup(self.codomain.ngens, self.codomain.relations.hstack(self.matrix))
        return c, AbelianHom(self.codomain, c, IntegerMatrix.identity(self.codomain.ngens),
                             check=False)

    def __repr__(self):
        return f"AbelianHom({self.domain.group} -> {self.codomain.group}, {self.matrix.to_lists()})"


def submodule(ambient: PresentedGroup, gens: IntegerMatrix) -> tuple[PresentedGroup, AbelianHom]:
    """Subgroup of ``ambient`` generated by the columns of ``gens``."""
    s = gens.ncols
    k = integer_kernel(gens.hstack(ambient.relations))
    sub = PresentedGroup(s, k.select_rows(range(s)))
    return sub, AbelianHom(sub, ambient, gens, check=False)


def express_in(gens: IntegerMatrix, ambient: PresentedGroup,
               x: Sequence[int]) -> tuple[int, ...] | None:
    """Coefficients ``c`` with ``gens c = x`` modulo the ambient relations."""
    sol = solve_integer(gens.hstack(ambient.relations), x)
    return None if sol is None else sol[:gens.ncols]


def contained_in(a: IntegerMatrix, b: IntegerMatrix, ambient: PresentedGroup) -> bool:
    """Whether span(a) lies in span(b) inside ``ambient``."""
    return all(express_in(b, ambient, col) is not None for col in a.columns())


class HomAnalysis(NamedTuple):
    kernel: AbelianGroup
    image: AbelianGroup
    cokernel: AbelianGroup


def hom_analyze(f: AbelianHom) -> HomAnalysis:
    """Canonical kernel, image and cokernel of ``f``."""
    return HomAnalysis(f.kernel()[0].group, f.image()[0].group, f.cokernel()[0].group)


def group_from_presentation(generators: int, relations: IntegerMatrix) -> AbelianGroup:
    """Canonical form of ``Z^generators`` modulo the rows of ``relations``."""
    if relations.ncols != generators:
        raise ZlinError(f"relation matrix has {relations.ncols} columns, "
                        f"expected {generators}")
    return PresentedGroup(generators, relations.T).group


# ---------------------------------------------------------------------------
# the kernel-cokernel sequence of a composite


@dataclass
class SixTermSequence:
    """``0 -> ker g -> ker hg -> ker h -> coker g -> coker hg -> coker h -> 0``."""

    groups: list[PresentedGroup]
    maps: list[AbelianHom]
    labels: tuple[str, ...] = ("ker g", "ker hg", "ker h", "coker g", "coker hg", "coker h")

    @property
    def canonical(self) -> list[AbelianGroup]:
        return [g.group for g in self.groups]

    def joints(self) -> list[tuple[str, bool]]:
        """Exactness verdict at every position, including both ends."""
        out = [(f"0 -> {self.labels[0]}", self.maps[0].kernel()[0].group.is_trivial)]
        for i in range(1, 5):
            incoming, outgoing = self.maps[i - 1], self.maps[i]
            mid = self.groups[i]
            im = incoming.image()[1].matrix
            ker = outgoing.kernel()[1].matrix
            ok = contained_in(im, ker, mid) and contained_in(ker, im, mid)
            out.append((self.labels[i], ok))
        out.append((f"{self.labels[5]} -> 0", self.maps[4].cokernel()[0].group.is_trivial))
        return out

    @property
    def exact(self) -> bool:
        return all(ok for _, ok in self.joints())

    def as_dict(self) -> dict:
        return {
            "groups": {lab: str(g) for lab, g in zip(self.labels, self.canonical)},
            "joints": {lab: ok for lab, ok in self.joints()},
        }


def kernel_cokernel_sequence(g: AbelianHom, h: AbelianHom) -> SixTermSequence:
    """The six-term exact sequence attached to ``h o g``; exactness is verified."""
    if g.codomain.ngens != h.domain.ngens or \
            g.codomain.relations.columns() != h.domain.relations.columns():
        raise ZlinError("codomain of g is not the domain of h")
    A, B, C = g.domain, g.codomain, h.codomain
    hg = h @ g
    kg_grp, kg = g.kernel()
    khg_grp, khg = hg.kernel()
    kh_grp, kh = h.kernel()
    cg_grp, _ = g.cokernel()
    chg_grp, _ = hg.cokernel()
    ch_grp, _ = h.cokernel()

    def factor(src: IntegerMatrix, target_gens: IntegerMatrix, amb: PresentedGroup) -> IntegerMatrix:
        cols = []
        for col in src.columns():
            c = express_in(target_gens, amb, col)
            if c is None:
                raise ExactnessError("element does not factor through the expected subgroup")
            cols.append(c)
        return IntegerMatrix.from_columns(cols, target_gens.ncols)

    m1 = factor(kg.matrix, khg.matrix, A)
    m2 = factor(g.matrix @ khg.matrix, kh.matrix, B)
    maps = [
        AbelianHom(kg_grp, khg_grp, m1),
        AbelianHom(khg_grp, kh_grp, m2),
        AbelianHom(kh_grp, cg_grp, kh.matrix),
        AbelianHom(cg_grp, chg_grp, h.matrix),
        AbelianHom(chg_grp, ch_grp, IntegerMatrix.identity(C.ngens)),
    ]
    seq = SixTermSequence([kg_grp, khg_grp, kh_grp, cg_grp, chg_grp, ch_grp], maps)
    bad = [lab for lab, ok in seq.joints() if not ok]
    if bad:
        raise ExactnessError(f"kernel-cokernel sequence not exact at {bad}")
    return seq


# ---------------------------------------------------------------------------
# symbolic summands and extensions


@dataclass(frozen=True)
class SymbolicGroup:
    """A group with no finite description, e.g. the units of a field.

    ``divisible`` records whether the group is known to be divisible, which
    makes every extension with it as subgroup split.
    """

    label: str
    divisible: bool = True

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class MixedGroup:
    """Direct sum of symbolic summands and a finitely generated part."""

    symbolic: tuple[SymbolicGroup, ...]
    discrete: AbelianGroup = AbelianGroup()

    @property
    def order(self) -> None:
        return None

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def divisible(self) -> bool:
        return self.discrete.is_trivial and all(s.divisible for s in self.symbolic)

    def __str__(self):
        parts = [str(s) for s in self.symbolic]
        if not self.discrete.is_trivial:
            parts.append(str(self.discrete))
        return " + ".join(parts) if parts else "0"


GroupValue = AbelianGroup | SymbolicGroup | MixedGroup


def direct_sum(*pieces: GroupValue) -> GroupValue:
    symbolic: list[SymbolicGroup] = []
    discrete = AbelianGroup()
    for p in pieces:
        if isinstance(p, AbelianGroup):
            discrete = discrete + p
        elif isinstance(p, SymbolicGroup):
            symbolic.append(p)
        else:
            symbolic += p.symbolic
            discrete = discrete + p.discrete
    if not symbolic:
        return discrete
    return MixedGroup(tuple(symbolic), discrete)


def _order(p: GroupValue) -> int | None:
    return p.order if isinstance(p, AbelianGroup) else None


def _is_trivial(p: GroupValue) -> bool:
    return isinstance(p, AbelianGroup) and p.is_trivial


def _is_divisible(p: GroupValue) -> bool:
    if isinstance(p, SymbolicGroup):
        return p.divisible
    if isinstance(p, MixedGroup):
        return p.divisible
    return p.is_trivial


@dataclass(frozen=True)
class ExtensionResult:
    """Outcome of trying to identify the middle of ``0 -> sub -> ? -> quot -> 0``.

    When ``resolved`` the middle group is ``group``; otherwise only the
    graded pieces in ``filtration`` (bottom first) are known.
    """

    resolved: bool
    group: GroupValue | None
    filtration: tuple[GroupValue, ...]
    order: int | None
    reason: str = ""

    def __str__(self):
        if self.resolved:
            return str(self.group)
        return "ext[" + ", ".join(str(p) for p in self.filtration) + "]"


def _piece_order(pieces) -> int | None:
    orders = [_order(p) for p in pieces]
    if any(o is None for o in orders):
        return None
    return math.prod(orders)


def resolve_extension(sub: GroupValue, quot: GroupValue,
                      certified_split: str | None = None) -> ExtensionResult:
    """Middle term of an extension, only when splitting is certified.

    Certified splittings: the quotient is free, the subgroup is divisible,
    the orders are finite and coprime, one side is trivial, or the caller
    passes ``certified_split`` naming a retraction it has established.
    Otherwise the two pieces come back as an unresolved filtration.
    """
    pieces = (sub, quot)
    order = _piece_order(pieces)
    reason = None
    if _is_trivial(sub) or _is_trivial(quot):
        reason = "one piece is trivial"
    elif isinstance(quot, AbelianGroup) and not quot.invariant_factors:
        reason = "quotient is free"
    elif _is_divisible(sub):
        reason = "subgroup is divisible"
    elif _order(sub) is not None and _order(quot) is not None \
            and math.gcd(_order(sub), _order(quot)) == 1:
        reason = "coprime orders"
    elif certified_split:
        reason = certified_split
    if reason is None:
        return ExtensionResult(False, None, pieces, order, "no splitting criterion applies")
    return ExtensionResult(True, direct_sum(sub, quot), pieces, order, reason)


def resolve_filtration(pieces: Sequence[GroupValue],
                       certified: dict[int, str] | None = None) -> ExtensionResult:
    """Fold a bottom-first filtration with :func:`resolve_extension`.

    ``certified[i]`` certifies splitting of the extension of the first ``i``
    pieces by piece ``i``.
    """
    certified = certified or {}
    pieces = tuple(pieces)
    if not pieces:
        return ExtensionResult(True, AbelianGroup(), (), 1, "empty")
    acc: GroupValue = pieces[0]
    reasons = []
    for i in range(1, len(pieces)):
        res = resolve_extension(acc, pieces[i], certified.get(i))
        if not res.resolved:
            return ExtensionResult(False, None, pieces, _piece_order(pieces),
                                   f"extension at step {i} not certified")
        reasons.append(res.reason)
        acc = res.group
    return ExtensionResult(True, acc, pieces, _piece_order(pieces), "; ".join(reasons))


# ---------------------------------------------------------------------------
# large sparse cokernels


class SparseCokernel:
    """Cokernel ``Z^nrows / span(columns)`` for large sparse relation sets.

    Unit pivots are eliminated first, each one removing a generator by
    substitution; whatever survives is finished with a dense Smith form.
    With ``track`` the substitutions are kept so that torsion coordinates
    of arbitrary vectors, and representatives of torsion generators, can be
    computed afterwards.
    """

    def __init__(self, nrows: int, columns: Iterable[dict[int, int]], track: bool = True):
        self.nrows = nrows
        cols: dict[int, dict[int, int]] = {}
        row_index: dict[int, set[int]] = {}
        for j, c in enumerate(columns):
            c = {i: v for i, v in c.items() if v}
            if not c:
                continue
            cols[j] = c
            for i in c:
                row_index.setdefault(i, set()).add(j)
        self._subs: list[tuple[int, int, dict[int, int]]] | None = [] if track else None
        eliminated: set[int] = set()
        unit_rank = 0
        progress = True
        while progress:
            progress = False
            for j in sorted(cols, key=lambda j: len(cols[j])):
                c = cols.get(j)
                if c is None:
                    continue
                best = None
                for i, val in c.items():
                    if val == 1 or val == -1:
                        cost = len(row_index[i])
                        if best is None or cost < best[0]:
                            best = (cost, i)
                if best is None:
                    continue
                i = best[1]
                u = c[i]
                rest = {k: v for k, v in c.items() if k != i}
                for k in c:
                    row_index[k].discard(j)
                del cols[j]
                for jj in list(row_index[i]):
                    cc = cols[jj]
                    coef = cc.pop(i) * u
                    for k, v in rest.items():
                        nv = cc.get(k, 0) - coef * v
                        if nv:
                            cc[k] = nv
                            row_index[k].add(jj)
                        elif k in cc:
                            del cc[k]
                            row_index[k].discard(jj)
                    if not cc:
                        del cols[jj]
                del row_index[i]
                eliminated.add(i)
                if self._subs is not None:
                    self._subs.append((i, u, rest))
                unit_rank += 1
                progress = True
        dense_rows = sorted({i for c in cols.values() for i in c})
        pos = {i: n for n, i in enumerate(dense_rows)}
        dense_cols = list(cols.values())
        mat = [[0] * len(dense_cols) for _ in dense_rows]
        for jn, c in enumerate(dense_cols):
            for i, v in c.items():
                mat[pos[i]][jn] = v
        st = _snf_core(mat, len(dense_rows), len(dense_cols), track_u=track)
        self._dense_rows = dense_rows
        self._dense_pos = pos
        self._dense = st
        self.rank = unit_rank + len(st.diag)
        self.torsion = tuple(d for d in st.diag if d > 1)
        self._torsion_idx = [n for n, d in enumerate(st.diag) if d > 1]
        self.free_rank = nrows - self.rank
        self.group = AbelianGroup(self.free_rank, self.torsion)

    def _reduce(self, x: dict[int, int]) -> dict[int, int]:
        if self._subs is None:
            raise ZlinError("cokernel was built without tracking")
        x = {i: v for i, v in x.items() if v}
        for i, u, rest in self._subs:
            xi = x.pop(i, 0)
            if xi:
                f = xi * u
                for k, v in rest.items():
                    nv = x.get(k, 0) - f * v
                    if nv:
                        x[k] = nv
                    else:
                        x.pop(k, None)
        return x

    def torsion_coords(self, x: dict[int, int] | Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the image of ``x`` on the torsion generators."""
        if not isinstance(x, dict):
            x = {i: v for i, v in enumerate(x) if v}
        x = self._reduce(x)
        u = self._dense.u
        pos = self._dense_pos
        dense_x = {pos[i]: v for i, v in x.items() if i in pos}
        out = []
        for n, d in zip(self._torsion_idx, self.torsion):
            row = u[n]
            y = sum(row.get(p, 0) * v for p, v in dense_x.items())
            out.append(y % d)
        return tuple(out)

    def torsion_lift(self, k: int) -> dict[int, int]:
        """A vector representing the ``k``-th torsion generator."""
        if self._subs is None:
            raise ZlinError("cokernel was built without tracking")
        n = self._torsion_idx[k]
        col = self._dense.uinv[n]
        return {self._dense_rows[p]: val for p, val in col.items()}
