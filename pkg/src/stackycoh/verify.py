"""Self-verification suites behind ``stackycoh verify``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import descriptor as D
from .gcoh import bar_cohomology, cyclic_cohomology, transfer_identity_holds
from .groups import FiniteGroup
from .phi2 import phi2_vanishing_check, random_complex
from .stackcurve import (
    cohomology,
    cohomology_cyclic_tower,
    cohomology_trivial_gerbe,
    cohomology_twisted_nodal,
    h2_abelian_crosscheck,
    h2_via_beta_factorization,
    picard_orbicurve,
)
from .zlin import AbelianGroup, IntegerMatrix, smith_normal_form

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"
SUITES = ("zlin", "gcoh", "stackcurve", "crosschecks")


@dataclass
class Check:
    suite: str
    name: str
    status: str
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "status": self.status,
                "detail": self.detail}


def _run(suite: str, name: str, fn: Callable[[], tuple[str, str]]) -> Check:
    t0 = time.perf_counter()
    try:
        status, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, status, detail, time.perf_counter() - t0)


def _ok(cond: bool, detail: str) -> tuple[str, str]:
    return (PASS if cond else FAIL), detail


# ---------------------------------------------------------------------------


def _snf_certificates(n: int = 100, seed: int = 0) -> tuple[str, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = IntegerMatrix([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)], cols)
        u, d, v = smith_normal_form(m)
        diag = [d[i, i] for i in range(min(rows, cols))]
        nz = [x for x in diag if x]
        chain = all(b % a == 0 for a, b in zip(nz, nz[1:])) and all(x >= 0 for x in diag)
        if u @ m @ v != d or abs(u.det()) != 1 or abs(v.det()) != 1 or not chain:
            bad += 1
    return _ok(bad == 0, f"{n - bad}/{n} certificates re-multiply")


def _parse_roundtrip() -> tuple[str, str]:
    samples = [AbelianGroup(), AbelianGroup(1, (2, 6)), AbelianGroup(3, ()), AbelianGroup(0, (4,))]
    ok = all(AbelianGroup.parse(str(g)) == g for g in samples)
    return _ok(ok, "render/parse round trip")


def zlin_checks() -> list[Check]:
    return [_run("zlin", "snf_certificates", _snf_certificates),
            _run("zlin", "render_parse_roundtrip", _parse_roundtrip)]


def _cyclic_vs_oracle() -> tuple[str, str]:
    bad = []
    n = 0
    for d in range(2, 7):
        g = FiniteGroup.cyclic(d)
        for m in range(0, 7):
            coeff = AbelianGroup.free(1) if m == 0 else AbelianGroup.cyclic(m)
            for r in range(5):
                n += 1
                if cyclic_cohomology(d, coeff, r) != bar_cohomology(g, coeff, r):
                    bad.append((d, str(coeff), r))
    return _ok(not bad, f"{n - len(bad)}/{n} agree" + (f"; mismatches {bad}" if bad else ""))


def _dihedral_h2() -> tuple[str, str]:
    vals = {f"D{2 * m}": bar_cohomology(FiniteGroup.dihedral(m), AbelianGroup.free(1), 2)
            for m in (3, 5)}
    return _ok(all(v == AbelianGroup.cyclic(2) for v in vals.values()),
               ", ".join(f"{k}: {v}" for k, v in vals.items()))


def _transfer_identity() -> tuple[str, str]:
    cases = [(FiniteGroup.cyclic(4), [2]), (FiniteGroup.cyclic(6), [2]),
             (FiniteGroup.abelian([2, 2]), [1]), (FiniteGroup.abelian([3, 3]), [1])]
    bad = [(str(g), r) for g, h in cases for r in (2, 3) if not transfer_identity_holds(g, h, r)]
    return _ok(not bad, "cor o res = index" + (f"; fails at {bad}" if bad else ""))


def _phi2(n: int = 50, seed: int = 0) -> tuple[str, str]:
    rng = random.Random(seed)
    nonzero = 0
    for _ in range(n):
        j = random_complex(rng)
        g = FiniteGroup.cyclic(rng.choice([2, 3, 4]))
        p, q = rng.choice([(0, 1), (1, 1), (0, 2)])
        rep = phi2_vanishing_check(g, j, p, q, rng=rng)
        if not rep.zero:
            nonzero += 1
    return _ok(nonzero == 0, f"{n - nonzero}/{n} constructed maps vanish")


def gcoh_checks() -> list[Check]:
    return [_run("gcoh", "cyclic_closed_form_vs_bar", _cyclic_vs_oracle),
            _run("gcoh", "dihedral_h2", _dihedral_h2),
            _run("gcoh", "transfer_identity", _transfer_identity),
            _run("gcoh", "phi2_vanishing", _phi2)]


def _orbicurve_table() -> tuple[str, str]:
    desc = D.orbicurve([2, 3])
    got = [cohomology(desc, r).render() for r in range(6)]
    pic = picard_orbicurve(desc)
    want = ["k*", "Z^1", "0", "Z/6", "0", "Z/6"]
    return _ok(got == want and pic.quotient_check and pic.coarse_quotient == AbelianGroup(0, (6,)),
               " | ".join(got))


def _nodal_table() -> tuple[str, str]:
    desc = D.twisted_nodal([0], 1, nodes=[3], smooth=[2])
    got = [cohomology_twisted_nodal(desc, r).render() for r in (2, 3, 4)]
    return _ok(got == ["0", "Z/6", "0"], " | ".join(got))


def _projective_gerbe_table() -> tuple[str, str]:
    bad = []
    for g, d in ((0, 2), (1, 2), (1, 3)):
        desc = D.product_gerbe([], [d], genus=g)
        for r in range(2, 6):
            v = cohomology_trivial_gerbe(desc, r)
            want = AbelianGroup.cyclic(d) * (2 * g) if r % 2 == 0 else AbelianGroup.cyclic(d) * 2
            if not v.resolved or v.group != want:
                bad.append((g, d, r, v.render()))
    return _ok(not bad, "even (Z/d)^2g, odd Z/d + Z/d" + (f"; fails {bad}" if bad else ""))


def _tower_h1_not_split() -> tuple[str, str]:
    bad = []
    for p in (2, 3):
        v = cohomology_cyclic_tower(D.cyclic_tower([p], p), 1)
        if v.resolved or v.order != p * p:
            bad.append(p)
    return _ok(not bad, "H^1 of the tower stays a filtration of order p^2")


def _beta_six_term() -> tuple[str, str]:
    vals = []
    ok = True
    for m in (3, 5):
        v = h2_via_beta_factorization(D.dihedral_quotient(m))
        vals.append(v.render())
        ok = ok and v.audit["exact"] and v.group == AbelianGroup.cyclic(m)
    return _ok(ok, "D6, D10: " + ", ".join(vals))


def stackcurve_checks() -> list[Check]:
    return [_run("stackcurve", "orbicurve_table", _orbicurve_table),
            _run("stackcurve", "twisted_nodal_table", _nodal_table),
            _run("stackcurve", "projective_product_gerbe_table", _projective_gerbe_table),
            _run("stackcurve", "tower_h1_not_split", _tower_h1_not_split),
            _run("stackcurve", "beta_factorization_exact", _beta_six_term)]


def _crosscheck(desc: D.CurveDescriptor, expect_direct: str | None,
                expect_product: str | None) -> tuple[str, str]:
    rep = h2_abelian_crosscheck(desc)
    detail = (f"direct {rep['direct']['value']}, product gerbe {rep['product_gerbe']['value']}, "
              f"{rep['status']}")
    if not rep["exact"]:
        return FAIL, detail + "; order laws or exactness violated"
    if expect_direct is not None and (rep["direct"]["value"] != expect_direct
                                      or rep["product_gerbe"]["value"] != expect_product):
        return FAIL, detail
    if any(n.startswith("flagged") for n in rep["notes"]):
        return FLAGGED, detail + "; " + "; ".join(rep["notes"])
    return PASS, detail


def crosscheck_checks() -> list[Check]:
    out = []
    for m in (3, 5):
        out.append(_run("crosschecks", f"dihedral_D{2 * m}",
                        lambda m=m: _crosscheck(D.dihedral_quotient(m), f"Z/{m}", "0")))
    for p in (2, 3):
        out.append(_run("crosschecks", f"cyclic_tower_p{p}",
                        lambda p=p: _crosscheck(D.cyclic_tower([p], p), None, None)))
    out.append(_run("crosschecks", "trivial_generic_stabilizer",
                    lambda: _crosscheck(D.orbicurve([2, 3], coarse=D.AFFINE_LINE), "0", "0")))
    out.append(_run("crosschecks", "product_gerbe_itself",
                    lambda: _crosscheck(D.product_gerbe([3], [3], coarse=D.AFFINE_LINE),
                                        "Z/3", "Z/3")))
    return out


_SUITES = {"zlin": zlin_checks, "gcoh": gcoh_checks, "stackcurve": stackcurve_checks,
           "crosschecks": crosscheck_checks}


def run_suite(name: str) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        checks += _SUITES[n]()
    return sorted(checks, key=lambda c: (c.suite, c.name))


def failed(checks: list[Check]) -> bool:
    """Failures outside the crosschecks suite."""
    return any(c.status == FAIL and c.suite != "crosschecks" for c in checks)
