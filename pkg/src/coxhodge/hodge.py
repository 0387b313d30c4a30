"""Hard Lefschetz and Hodge-Riemann verification for graded modules with a
Poincare-type pairing.

For an ample weight lambda (every coroot pairing strictly positive, decided
by the exact sign oracle) and a module with top degree 2l, the checks are:
multiplication by lambda^(l-i) is a bijection M^i -> M^(2l-i) (exact rank),
and the Lefschetz form (f, g) = <f, lambda^(l-i) g> restricted to the
primitive subspace P^i = ker lambda^(l-i+1) is (-1)^(i/2)-definite (exact
inertia).  The full-form signature is reported alongside for diagnostics;
only the primitive restriction carries the sign law.

The dihedral closed forms reproduce the rank-2 hand computation: the 2x2
multiplication matrix H^2i -> H^2i+2 in the Schubert basis with formal
coroot pairings a1, a2, whose determinant is
[i][i+1](a1^2 + a2^2) + [2][i][i+1] a1 a2.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bsmod import GradedModule
from .coxeter import CoxeterSystem
from .errors import InternalInvariantError, InvalidInputError
from .linalg import Mat, inertia, mat_mul, nullspace, rank, solve
from .polyring import Polynomial
from .scalars import FieldContext, FieldElement, qnum


class AmpleWeight:
    """A linear form in the simple-root basis with cached coroot pairings."""

    def __init__(self, system: CoxeterSystem, coords):
        self.system = system
        self.coords = tuple(
            c if isinstance(c, FieldElement) else system.ctx.scalar(c)
            for c in coords)
        if len(self.coords) != system.rank:
            raise InvalidInputError("weight coordinate count differs from rank")
        self.pairings = tuple(system.coroot_pairings(self.coords))

    @staticmethod
    def rho(system: CoxeterSystem) -> "AmpleWeight":
        """The weight pairing to 1 with every simple coroot (needs the Cartan
        pairing nondegenerate, true for finite systems)."""
        ctx = system.ctx
        ones = Mat(system.rank, 1, [[ctx.one] for _ in range(system.rank)])
        sol = solve(system.cartan, ones, ctx.zero)
        if sol is None or rank(system.cartan) != system.rank:
            raise InvalidInputError("rho undefined: degenerate Cartan pairing")
        return AmpleWeight(system, [sol.rows[i][0] for i in range(system.rank)])

    @property
    def ample(self) -> bool:
        return all(p.sign() > 0 for p in self.pairings)

    def __repr__(self):
        return f"AmpleWeight({[str(c) for c in self.coords]})"


def signature(gram: Mat, ctx: FieldContext):
    """Sylvester inertia (positive, negative, zero) of a symmetric matrix."""
    return inertia(gram, lambda x: x.sign(), ctx.one, ctx.zero)


def hard_lefschetz(module: GradedModule, weight: AmpleWeight, ell: int):
    """Per-even-degree exact ranks of lambda^(l-i): M^i -> M^(2l-i)."""
    if module.dims and (module.bottom_degree < 0 or module.top_degree > 2 * ell):
        raise InvalidInputError("module degrees exceed the stated top degree")
    out = []
    for i in range(0, ell + 1, 2):
        dim_i = module.dim(i)
        dim_top = module.dim(2 * ell - i)
        power = module.linear_power(weight.coords, i, ell - i)
        r = rank(power)
        out.append({"i": i, "dim": dim_i, "rank": r,
                    "hl": dim_i == dim_top == r})
    return out


def primitive_subspace(module: GradedModule, weight: AmpleWeight, i: int,
                       ell: int) -> Mat:
    """Column basis of P^i = ker(lambda^(l-i+1): M^i -> M^(2l-i+2))."""
    ctx = module.ctx
    power = module.linear_power(weight.coords, i, ell - i + 1)
    vecs = nullspace(power, ctx.one, ctx.zero)
    if not vecs:
        return Mat.zeros(module.dim(i), 0, ctx.zero)
    return Mat.from_rows([[v[r] for v in vecs] for r in range(module.dim(i))])


def lefschetz_form(module: GradedModule, weight: AmpleWeight, i: int,
                   ell: int) -> Mat:
    """(f, g) = <f, lambda^(l-i) g> on M^i; symmetry is asserted exactly."""
    ctx = module.ctx
    gram = module.pairing_matrix(i)
    power = module.linear_power(weight.coords, i, ell - i)
    form = mat_mul(gram, power, ctx.zero)
    for r in range(form.nrows):
        for c in range(r + 1, form.ncols):
            if form.rows[r][c] != form.rows[c][r]:
                raise InternalInvariantError("Lefschetz form is not symmetric")
    return form


def hodge_riemann(module: GradedModule, weight: AmpleWeight, ell: int):
    """Per-even-degree signatures and the (-1)^(i/2)-definiteness verdicts on
    the primitive subspaces."""
    ctx = module.ctx
    out = []
    for i in range(0, ell + 1, 2):
        form = lefschetz_form(module, weight, i, ell)
        full_sig = signature(form, ctx)
        prim = primitive_subspace(module, weight, i, ell)
        restricted = mat_mul(mat_mul(prim.transpose(), form, ctx.zero), prim,
                             ctx.zero)
        prim_sig = signature(restricted, ctx)
        want_positive = (i % 4 == 0)
        hr = prim_sig == ((prim.ncols, 0, 0) if want_positive
                          else (0, prim.ncols, 0))
        out.append({"i": i, "prim_dim": prim.ncols, "signature": full_sig,
                    "prim_signature": prim_sig, "hr": hr})
    return out


@dataclass
class LefschetzReport:
    """Serializable per-module verdict record."""

    group: str
    word: tuple
    summand: str
    lam: tuple
    ample: bool
    degrees: list
    verdict: str
    millis: int

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "word": [s + 1 for s in self.word],
            "summand": self.summand,
            "lambda": [str(c) for c in self.lam],
            "ample": self.ample,
            "degrees": [
                {"i": d["i"], "dim": d["dim"], "rank": d["rank"], "hl": d["hl"],
                 "prim_dim": d["prim_dim"], "signature": list(d["signature"]),
                 "hr": d["hr"]}
                for d in self.degrees
            ],
            "verdict": self.verdict,
            "millis": self.millis,
        }


def run_check(module: GradedModule, weight: AmpleWeight, *, group: str,
              word, summand: str) -> LefschetzReport:
    """Full HL + HR verification of a paired module with top degree 2l."""
    if module.pairing is None or module.top is None:
        raise InvalidInputError("Lefschetz checks need a paired module")
    if module.top % 2:
        raise InternalInvariantError("odd top degree")
    started = time.monotonic()
    ell = module.top // 2
    hl = hard_lefschetz(module, weight, ell)
    hr = hodge_riemann(module, weight, ell)
    degrees = []
    for a, b in zip(hl, hr):
        if a["i"] != b["i"]:
            raise InternalInvariantError("degree bookkeeping mismatch")
        rec = dict(a)
        rec.update({k: b[k] for k in ("prim_dim", "signature", "hr")})
        degrees.append(rec)
    verdict = "pass" if all(d["hl"] and d["hr"] for d in degrees) else "fail"
    millis = int((time.monotonic() - started) * 1000)
    return LefschetzReport(group=group, word=tuple(word), summand=summand,
                           lam=weight.coords, ample=weight.ample,
                           degrees=degrees, verdict=verdict, millis=millis)


# ---------------------------------------------------------------------------
# dihedral closed forms (rank 2, coinvariant algebra)

def dihedral_closed_forms(m: int, i: int, ctx: FieldContext):
    """The 2x2 Chevalley-step matrix of multiplication H^2i -> H^2i+2 for the
    dihedral coinvariant algebra, with entries linear in the formal coroot
    pairings a1, a2, together with its determinant.

    Source basis (Y_{s1 b}, Y_{s2 a}), target basis (Y_a, Y_b) where a, b are
    the two elements one step shorter; valid for 1 <= i < m - 1.
    """
    if m < 2:
        raise InvalidInputError("dihedral order must be at least 2")
    if not 1 <= i < m - 1:
        raise InvalidInputError("degree step out of range")

    def q(n):
        return qnum(n, m, ctx)

    a1 = Polynomial.variable(ctx, 2, 0)
    a2 = Polynomial.variable(ctx, 2, 1)
    top_left = a1 * q(i) + a2 * q(i + 1)
    bottom_right = a1 * q(i + 1) + a2 * q(i)
    matrix = [[top_left, a2], [a1, bottom_right]]
    determinant = top_left * bottom_right - a1 * a2
    return matrix, determinant


def dihedral_determinant_identity(m: int, i: int, ctx: FieldContext) -> bool:
    """det = [i][i+1](a1^2 + a2^2) + [2][i][i+1] a1 a2, exactly."""
    _, determinant = dihedral_closed_forms(m, i, ctx)
    a1 = Polynomial.variable(ctx, 2, 0)
    a2 = Polynomial.variable(ctx, 2, 1)
    coeff = qnum(i, m, ctx) * qnum(i + 1, m, ctx)
    expected = (a1 * a1 + a2 * a2) * coeff + a1 * a2 * (qnum(2, m, ctx) * coeff)
    return determinant == expected


def dihedral_middle_lefschetz_form(m: int, ctx: FieldContext):
    """For odd m = 2k+1: the Lefschetz form on H^(m-1) in the basis dual to
    the multiplication target, [[a1, [k+1]a1 + [k]a2], [[k]a1 + [k+1]a2, a2]]."""
    if m < 3 or m % 2 == 0:
        raise InvalidInputError("closed middle form needs odd m >= 3")
    k = (m - 1) // 2
    step, _ = dihedral_closed_forms(m, k, ctx)
    # rows of the step matrix give coefficients on (Y_a, Y_b); pairing-duality
    # swaps to the (Y_{s1 b}, Y_{s2 a}) side: B[u][v] = coefficient of the
    # dual partner of u in lambda * v
    return [[step[1][0], step[1][1]], [step[0][0], step[0][1]]]
