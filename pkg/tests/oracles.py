"""Independent reference computations used only by the tests.

The oracle builds the unnormalised inhomogeneous bar complex (all tuples,
identity included) and reads invariant factors off sympy, so it shares no
code with the package's normalised complex or its Smith-form routines.
"""

import itertools
import math
from functools import lru_cache

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from stackycoh.zlin import AbelianGroup


def _differential_rows(group, r):
    els = range(group.order)
    idx = {t: i for i, t in enumerate(itertools.product(els, repeat=r))}
    rows = []
    for t in itertools.product(els, repeat=r + 1):
        row = [0] * len(idx)
        row[idx[t[1:]]] += 1
        for i in range(r):
            row[idx[t[:i] + (group.mul[t[i]][t[i + 1]],) + t[i + 2:]]] += (-1) ** (i + 1)
        row[idx[t[:r]]] += (-1) ** (r + 1)
        rows.append(row)
    return rows


@lru_cache(maxsize=None)
def differential_divisors(group, r):
    """Nonzero invariant factors of ``d_r: C^r -> C^{r+1}``."""
    rows = _differential_rows(group, r)
    # sympy is far faster on the wide transpose than on the tall matrix
    cols = [list(c) for c in zip(*rows)]
    dm = DomainMatrix([[ZZ(x) for x in c] for c in cols], (len(cols), len(rows)), ZZ)
    return tuple(int(x) for x in invariant_factors(dm) if x)


def integral(group, r):
    """``H^r(G, Z)``."""
    n_r = group.order ** r
    here = differential_divisors(group, r)
    before = differential_divisors(group, r - 1) if r >= 1 else ()
    torsion = [e for e in before if e > 1]
    return AbelianGroup.from_cyclic_orders([0] * (n_r - len(here) - len(before)) + torsion)


def mod_order(group, r, m):
    """``|H^r(G, Z/m)|`` counted directly on the complex reduced mod ``m``."""
    n_r = group.order ** r
    here = differential_divisors(group, r)
    before = differential_divisors(group, r - 1) if r >= 1 else ()
    kernel = m ** (n_r - len(here)) * math.prod(math.gcd(e, m) for e in here)
    image = math.prod(m // math.gcd(e, m) for e in before)
    assert kernel % image == 0
    return kernel // image


def with_coefficients(group, r, coeff: AbelianGroup):
    """``H^r(G, A)`` from the oracle's integral groups by universal coefficients."""
    return integral(group, r).tensor(coeff) + integral(group, r + 1).torsion().tor(coeff)
