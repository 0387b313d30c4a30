"""Bott-Samelson modules, their intersection forms, and Krull-Schmidt
decomposition into indecomposable Soergel modules.

A GradedModule is a finite even-graded vector space with commuting degree-+2
action matrices, one per simple root.  Bott-Samelson modules are built on the
2^m monomial basis alpha^eps_1 x ... x alpha^eps_m x 1; the action of a
linear polynomial is normalised slot by slot using the even/odd splitting
p = (p + s(p))/2 + (d_s(p)/2) alpha_s, which is exact in characteristic 0.

Decomposition works through the degree-0 endomorphism algebra.  Its radical
comes from the trace form of the regular representation (Dickson, valid in
characteristic 0); when the semisimple quotient is larger than the scalars, a
splitting endomorphism is hunted down a deterministic schedule and the module
is cut along the primary decomposition of its minimal polynomial *over Q*.
Primary components of a Q-coefficient polynomial in a degree-0 endomorphism
are automatically graded submodules over the coefficient field, and a module
that is indecomposable over the field admits no such splitting, so the cut
never severs an indecomposable.  Rational polynomial factorisation is the one
step delegated to sympy.

Soergel modules D_w are extracted iteratively: for a reduced word s w',
R (x)_{R^s} D_w' is a summand of BS(s w') containing the degree-0 line, and
by Krull-Schmidt its unique summand with nonzero degree 0 is D_{s w'}.  Each
induction step doubles the dimension and carries the intersection form along
in closed form, so the full 2^m module is never decomposed directly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .coxeter import CoxeterSystem, GroupElement, is_reduced
from .errors import (
    InternalInvariantError,
    InvalidInputError,
    NotReducedError,
)
from .linalg import Mat, inverse, mat_mul, nullspace, rank, solve
from .polyring import Polynomial, ring_of, schubert_calculus
from .scalars import FieldElement

_HALF = Fraction(1, 2)


class GradedModule:
    """Even-graded module over R presented by basis dimensions and the
    degree-+2 action matrix of each simple root."""

    def __init__(self, system: CoxeterSystem, dims: dict, actions=None,
                 action_builder=None, labels=None, pairing=None, top=None,
                 word=None):
        self.system = system
        self.ctx = system.ctx
        self.dims = {d: n for d, n in dims.items() if n}
        for d in self.dims:
            if d % 2:
                raise InternalInvariantError("graded modules live in even degrees")
        self._actions = dict(actions or {})
        self._action_builder = action_builder
        self.labels = labels
        self.pairing = pairing
        self.top = top
        self.word = word

    # -- shape --------------------------------------------------------------

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def degrees(self):
        return sorted(self.dims)

    @property
    def bottom_degree(self):
        return min(self.dims) if self.dims else 0

    @property
    def top_degree(self):
        return max(self.dims) if self.dims else 0

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def graded_dims(self):
        return {d: self.dims[d] for d in self.degrees}

    def poincare(self):
        """Coefficient list of the Poincare polynomial in q, degree-indexed."""
        top = self.top_degree
        return [self.dim(d) for d in range(0, top + 1)]

    # -- actions ------------------------------------------------------------

    def action(self, s: int, d: int) -> Mat:
        key = (s, d)
        mat = self._actions.get(key)
        if mat is None:
            if self._action_builder is not None:
                mat = self._action_builder(s, d)
            else:
                mat = Mat.zeros(self.dim(d + 2), self.dim(d), self.ctx.zero)
            self._actions[key] = mat
        return mat

    def act_linear(self, coords, d: int) -> Mat:
        """Action matrix of the linear form sum coords[s] * alpha_s."""
        out = Mat.zeros(self.dim(d + 2), self.dim(d), self.ctx.zero)
        for s, c in enumerate(coords):
            if c:
                out = out + self.action(s, d).scaled(c)
        return out

    def linear_power(self, coords, d: int, k: int) -> Mat:
        """Composite action of the k-th power of a linear form, degree d to d+2k."""
        if k == 0:
            return Mat.identity(self.dim(d), self.ctx.one, self.ctx.zero)
        out = self.act_linear(coords, d)
        for i in range(1, k):
            out = self.act_linear(coords, d + 2 * i) @ out
        return out

    def pairing_matrix(self, d: int) -> Mat:
        if self.pairing is None or self.top is None:
            raise InvalidInputError("module carries no pairing")
        mat = self.pairing.get(d)
        if mat is None:
            other = self.pairing.get(self.top - d)
            if other is None:
                mat = Mat.zeros(self.dim(d), self.dim(self.top - d), self.ctx.zero)
            else:
                mat = other.transpose()
            self.pairing[d] = mat
        return mat

    def shifted(self, delta: int) -> "GradedModule":
        """The same module with all degrees moved by delta."""
        dims = {d + delta: n for d, n in self.dims.items()}
        actions = {(s, d + delta): m for (s, d), m in self._actions.items()}
        labels = None
        if self.labels is not None:
            labels = {d + delta: v for d, v in self.labels.items()}
        pairing = None
        if self.pairing is not None:
            pairing = {d + delta: m for d, m in self.pairing.items()}
        shifted = GradedModule(self.system, dims, actions=actions, labels=labels,
                               pairing=pairing,
                               top=None if self.top is None else self.top + delta,
                               word=self.word)
        if self._action_builder is not None:
            shifted._action_builder = lambda s, d: self._action_builder(s, d - delta)
        return shifted

    def materialise_actions(self):
        for d in self.degrees:
            for s in range(self.system.rank):
                self.action(s, d)
        return self

    def __repr__(self):
        dims = ",".join(f"{d}:{n}" for d, n in sorted(self.dims.items()))
        return f"GradedModule({dims})"


class GradedMap:
    """A degree-0 linear map between graded modules, one block per degree."""

    __slots__ = ("domain", "codomain", "blocks")

    def __init__(self, domain: GradedModule, codomain: GradedModule, blocks: dict):
        self.domain = domain
        self.codomain = codomain
        self.blocks = {d: m for d, m in blocks.items()
                       if m.nrows and m.ncols and not m.is_zero()}

    def block(self, d: int) -> Mat:
        mat = self.blocks.get(d)
        if mat is None:
            mat = Mat.zeros(self.codomain.dim(d), self.domain.dim(d),
                            self.domain.ctx.zero)
        return mat

    @staticmethod
    def identity(module: GradedModule) -> "GradedMap":
        one, zero = module.ctx.one, module.ctx.zero
        return GradedMap(module, module,
                         {d: Mat.identity(module.dim(d), one, zero)
                          for d in module.degrees})

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        zero = other.domain.ctx.zero
        blocks = {}
        for d in other.domain.degrees:
            blocks[d] = mat_mul(self.block(d), other.block(d), zero)
        return GradedMap(other.domain, self.codomain, blocks)

    def __add__(self, other):
        return GradedMap(self.domain, self.codomain,
                         {d: self.block(d) + other.block(d)
                          for d in set(self.blocks) | set(other.blocks)})

    def __sub__(self, other):
        return GradedMap(self.domain, self.codomain,
                         {d: self.block(d) - other.block(d)
                          for d in set(self.blocks) | set(other.blocks)})

    def scaled(self, f) -> "GradedMap":
        return GradedMap(self.domain, self.codomain,
                         {d: m.scaled(f) for d, m in self.blocks.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def flat(self):
        """All entries in a fixed order, for linear-dependence computations."""
        out = []
        for d in self.domain.degrees:
            b = self.block(d)
            for row in b.rows:
                out.extend(row)
        return out

    def is_invertible(self) -> bool:
        for d in set(self.domain.degrees) | set(self.codomain.degrees):
            if self.domain.dim(d) != self.codomain.dim(d):
                return False
            if rank(self.block(d)) != self.domain.dim(d):
                return False
        return True

    def intertwines(self) -> bool:
        """Exact check that the map commutes with every simple-root action."""
        M, N = self.domain, self.codomain
        zero = M.ctx.zero
        for d in M.degrees:
            for s in range(M.system.rank):
                if mat_mul(self.block(d + 2), M.action(s, d), zero) != \
                        mat_mul(N.action(s, d), self.block(d), zero):
                    return False
        return True


# ---------------------------------------------------------------------------
# Bott-Samelson construction

def _expand_slots(system: CoxeterSystem, word, carry: Polynomial, slots):
    """Normalise carry x slot_1 x ... x slot_m x 1 to the monomial basis.

    Returns a map from epsilon tuples to coefficients.  Each slot polynomial
    is split as p = a + b alpha_s with a, b s-invariant; a is pushed right, b
    stays with alpha_s in the slot; over the final R -> R/R^+ only constant
    terms survive.
    """
    ring = ring_of(system)

    def rec(i: int, carry: Polynomial):
        if not carry:
            return {}
        if i == len(word):
            c0 = carry.constant_term()
            return {(): c0} if c0 else {}
        s = word[i]
        p = carry * slots[i]
        sp = ring.act_gen(s, p)
        a = (p + sp) * _HALF
        b = ring.demazure(s, p) * _HALF
        out = {}
        for eps, c in rec(i + 1, a).items():
            key = (0,) + eps
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        for eps, c in rec(i + 1, b).items():
            key = (1,) + eps
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        return {k: v for k, v in out.items() if v}

    return rec(0, carry)


def bs_module(system: CoxeterSystem, word) -> GradedModule:
    """The Bott-Samelson module of a word (not necessarily reduced), on the
    2^m basis of tensor monomials; graded dimension (1+q^2)^m."""
    word = tuple(word)
    for s in word:
        if not 0 <= s < system.rank:
            raise InvalidInputError(f"generator index {s} out of range")
    m = len(word)
    labels: dict = {}
    for bits in range(1 << m):
        eps = tuple((bits >> i) & 1 for i in range(m))
        labels.setdefault(2 * sum(eps), []).append(eps)
    for d in labels:
        labels[d].sort()
    index = {d: {eps: i for i, eps in enumerate(v)} for d, v in labels.items()}
    dims = {d: len(v) for d, v in labels.items()}
    ring = ring_of(system)

    def builder(s: int, d: int) -> Mat:
        rows_out = dims.get(d + 2, 0)
        cols = labels.get(d, [])
        mat = Mat.zeros(rows_out, len(cols), system.ctx.zero)
        if not rows_out:
            return mat
        carry = ring.vars[s]
        for j, eps in enumerate(cols):
            slots = [ring.vars[word[i]] if eps[i] else ring.constant(1)
                     for i in range(m)]
            for out_eps, coeff in _expand_slots(system, word, carry, slots).items():
                if sum(out_eps) * 2 != d + 2:
                    raise InternalInvariantError("inhomogeneous tensor normalisation")
                mat.rows[index[d + 2][out_eps]][j] = coeff
        return mat

    return GradedModule(system, dims, action_builder=builder, labels=labels,
                        top=2 * m, word=word)


def intersection_form(module: GradedModule) -> dict:
    """Graded pairing <f, g> = coefficient of the top tensor monomial in the
    termwise product; on monomials this is 1 exactly when the exponent
    tuples are complementary.  Attached to the module and returned."""
    if module.labels is None or module.word is None:
        raise InvalidInputError("intersection form requires a Bott-Samelson module")
    m = len(module.word)
    one, zero = module.ctx.one, module.ctx.zero
    pairing = {}
    for d in module.degrees:
        rows = module.labels.get(d, [])
        cols = module.labels.get(2 * m - d, [])
        mat = Mat.zeros(len(rows), len(cols), zero)
        for i, eps in enumerate(rows):
            for j, delta in enumerate(cols):
                if all(a + b == 1 for a, b in zip(eps, delta)):
                    mat.rows[i][j] = one
        pairing[d] = mat
    module.pairing = pairing
    module.top = 2 * m
    return pairing


def intersection_form_by_products(module: GradedModule) -> dict:
    """Independent route to the same pairing: full termwise products pushed
    through the slot normalisation.  Quadratic cost; used as a cross-check."""
    if module.labels is None or module.word is None:
        raise InvalidInputError("intersection form requires a Bott-Samelson module")
    system, word = module.system, module.word
    ring = ring_of(system)
    m = len(word)
    top_eps = (1,) * m
    out = {}
    for d in module.degrees:
        rows = module.labels.get(d, [])
        cols = module.labels.get(2 * m - d, [])
        mat = Mat.zeros(len(rows), len(cols), module.ctx.zero)
        for i, eps in enumerate(rows):
            for j, delta in enumerate(cols):
                slots = [ring.vars[word[k]] ** (eps[k] + delta[k]) for k in range(m)]
                expansion = _expand_slots(system, word, ring.constant(1), slots)
                mat.rows[i][j] = expansion.get(top_eps, module.ctx.zero)
        out[d] = mat
    return out


def induce(system: CoxeterSystem, s: int, module: GradedModule) -> GradedModule:
    """R (x)_{R^s} module: dimensions double, the new basis being 1 (x) v and
    alpha_s (x) v; action and pairing come out in closed form from the
    even/odd splitting of alpha_t and alpha_t alpha_s."""
    ctx = system.ctx
    dims = {}
    for d, n in module.dims.items():
        dims[d] = dims.get(d, 0) + n
        dims[d + 2] = dims.get(d + 2, 0) + n
    out_dims = {d: n for d, n in dims.items() if n}

    half_c = [system.cartan.rows[s][t] * _HALF for t in range(system.rank)]
    actions = {}
    for d in sorted(out_dims):
        rows_n = out_dims.get(d + 2, 0)
        m_lo = module.dim(d)       # vectors 1 (x) v, deg v = d
        m_hi = module.dim(d - 2)   # vectors alpha_s (x) v, deg v = d - 2
        for t in range(system.rank):
            mat = Mat.zeros(rows_n, m_lo + m_hi, ctx.zero)
            # target block sizes at degree d + 2
            n_lo = module.dim(d + 2)
            n_hi = module.dim(d)
            L_lo = module.action(t, d) - module.action(s, d).scaled(half_c[t]) \
                if m_lo and n_lo else None
            if m_lo:
                if n_lo:
                    for i in range(n_lo):
                        for j in range(m_lo):
                            mat.rows[i][j] = L_lo.rows[i][j]
                # b = <alpha_t, alpha_s^vee>/2 times identity into the hi block
                if half_c[t] and n_hi:
                    for j in range(m_lo):
                        mat.rows[n_lo + j][j] = half_c[t]
            if m_hi:
                if n_lo and half_c[t]:
                    sq = mat_mul(module.action(s, d), module.action(s, d - 2),
                                 ctx.zero).scaled(half_c[t])
                    for i in range(n_lo):
                        for j in range(m_hi):
                            mat.rows[i][m_lo + j] = sq.rows[i][j]
                if n_hi:
                    L_hi = module.action(t, d - 2) - module.action(s, d - 2).scaled(half_c[t])
                    for i in range(n_hi):
                        for j in range(m_hi):
                            mat.rows[n_lo + i][m_lo + j] = L_hi.rows[i][j]
            actions[(t, d)] = mat

    induced = GradedModule(system, out_dims, actions=actions)
    if module.pairing is not None and module.top is not None:
        top = module.top + 2
        pairing = {}
        for d in sorted(out_dims):
            m_lo, m_hi = module.dim(d), module.dim(d - 2)
            n_lo, n_hi = module.dim(top - d), module.dim(top - d - 2)
            mat = Mat.zeros(m_lo + m_hi, n_lo + n_hi, ctx.zero)
            if m_lo and n_hi:
                g = module.pairing_matrix(d)   # pairs d with module.top - d = top - d - 2
                for i in range(m_lo):
                    for j in range(n_hi):
                        mat.rows[i][n_lo + j] = g.rows[i][j]
            if m_hi and n_lo:
                g = module.pairing_matrix(d - 2)
                for i in range(m_hi):
                    for j in range(n_lo):
                        mat.rows[m_lo + i][j] = g.rows[i][j]
            pairing[d] = mat
        induced.pairing = pairing
        induced.top = top
    return induced


# ---------------------------------------------------------------------------
# degree-0 homomorphisms

def hom0_space(M: GradedModule, N: GradedModule) -> list:
    """Basis of the degree-0 maps intertwining all simple-root actions.

    Solved degree by degree: T_d is forced on the image of the actions from
    degree d-2 and free on a complement, with consistency constraints folded
    back into the running parameter space.
    """
    ctx = M.ctx
    one, zero = ctx.one, ctx.zero
    gens = range(M.system.rank)
    if not M.dims:
        return []
    # one step past the top: a codomain reaching higher still constrains the
    # top block through T_{top+2} A = A T_top with T_{top+2} empty
    degrees = list(range(M.bottom_degree, M.top_degree + 4, 2))
    reps: dict = {}
    nparams = 0

    def reparametrise(Z):
        nonlocal nparams
        new = {}
        for d, mats in reps.items():
            combined = []
            for col in Z:
                acc = Mat.zeros(N.dim(d), M.dim(d), zero)
                for j, f in enumerate(col):
                    if f:
                        acc = acc + mats[j].scaled(f)
                combined.append(acc)
            new[d] = combined
        reps.clear()
        reps.update(new)
        nparams = len(Z)

    for d in degrees:
        m_d, n_d = M.dim(d), N.dim(d)
        m_prev = M.dim(d - 2)
        if m_prev == 0:
            reps[d] = [Mat.zeros(n_d, m_d, zero) for _ in range(nparams)]
            fresh = []
            for i in range(n_d):
                for j in range(m_d):
                    mat = Mat.zeros(n_d, m_d, zero)
                    mat.rows[i][j] = one
                    fresh.append(mat)
            for e in reps:
                if e != d:
                    reps[e].extend(Mat.zeros(N.dim(e), M.dim(e), zero)
                                   for _ in fresh)
            reps[d].extend(fresh)
            nparams += len(fresh)
            continue
        U = Mat.hstack([M.action(s, d - 2) for s in gens], m_d)
        Vs = [Mat.hstack([mat_mul(N.action(s, d - 2), reps[d - 2][j], zero)
                          for s in gens], n_d)
              for j in range(nparams)]
        kappas = nullspace(U, one, zero)
        constraint_rows = []
        for kappa in kappas:
            per_param = []
            for j in range(nparams):
                col = [sum_row(Vs[j].rows[i], kappa, zero) for i in range(n_d)]
                per_param.append(col)
            for i in range(n_d):
                row = [per_param[j][i] for j in range(nparams)]
                if any(row):
                    constraint_rows.append(row)
        if constraint_rows:
            Z = nullspace(Mat.from_rows(constraint_rows), one, zero)
            reparametrise(Z)
            Vs = [Mat.hstack([mat_mul(N.action(s, d - 2), reps[d - 2][j], zero)
                              for s in gens], n_d)
                  for j in range(nparams)]
        UT = U.transpose()
        solved = []
        for j in range(nparams):
            X = solve(UT, Vs[j].transpose(), zero)
            if X is None:
                raise InternalInvariantError("hom solver inconsistency after constraints")
            solved.append(X.transpose())
        reps[d] = solved
        fresh = []
        for v in nullspace(UT, one, zero):
            for i in range(n_d):
                mat = Mat.zeros(n_d, m_d, zero)
                mat.rows[i] = list(v)
                fresh.append(mat)
        if fresh:
            for e in reps:
                if e != d:
                    reps[e].extend(Mat.zeros(N.dim(e), M.dim(e), zero)
                                   for _ in fresh)
            reps[d].extend(fresh)
            nparams += len(fresh)

    out = []
    for j in range(nparams):
        blocks = {d: reps[d][j] for d in reps}
        out.append(GradedMap(M, N, blocks))
    return out


def sum_row(row, vec, zero):
    acc = zero
    for a, b in zip(row, vec):
        if a and b:
            acc = acc + a * b
    return acc


def end0_basis(module: GradedModule) -> list:
    """Basis of the degree-0 endomorphism algebra (contains the identity)."""
    return hom0_space(module, module)


def _span_solver(maps):
    """One-time echelon factorisation of the maps' flat vectors; returns a
    function giving coordinates of a target map in their span (or None)."""
    ctx = maps[0].domain.ctx
    pivots = []
    for j, m in enumerate(maps):
        v = m.flat()
        combo = [ctx.zero] * len(maps)
        combo[j] = ctx.one
        for idx, row, pc in pivots:
            f = v[idx]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
                combo = [a - f * b for a, b in zip(combo, pc)]
        nz = next((i for i, a in enumerate(v) if a), None)
        if nz is None:
            raise InternalInvariantError("dependent endomorphism basis")
        inv = v[nz].inverse()
        pivots.append((nz, [a * inv for a in v], [a * inv for a in combo]))

    def coords(target: GradedMap):
        v = target.flat()
        out = [ctx.zero] * len(maps)
        for idx, row, pc in pivots:
            f = v[idx]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
                out = [a + f * b for a, b in zip(out, pc)]
        if any(v):
            return None
        return out

    return coords


def _radical_dimension(maps) -> int:
    """dim of the Jacobson radical via the trace form of the regular
    representation (Dickson's criterion, characteristic 0)."""
    n = len(maps)
    ctx = maps[0].domain.ctx
    coords_of = _span_solver(maps)
    # structure constants: maps[a] o maps[b] = sum_c coeffs[c] maps[c]
    left = []
    for a in range(n):
        rows = []
        for b in range(n):
            coords = coords_of(maps[a].compose(maps[b]))
            if coords is None:
                raise InternalInvariantError("endomorphism algebra not closed")
            rows.append(coords)
        left.append(rows)  # left[a][b][c]
    trace_of = [sum((left[c][e][e] for e in range(n)), ctx.zero)
                for c in range(n)]
    gram = Mat.zeros(n, n, ctx.zero)
    for a in range(n):
        for b in range(a, n):
            # trace of left-multiplication by maps[a] o maps[b]
            tr = ctx.zero
            for c, f in enumerate(left[a][b]):
                if f:
                    tr = tr + f * trace_of[c]
            gram.rows[a][b] = tr
            gram.rows[b][a] = tr
    return n - rank(gram)


def _operator_minpoly_q(op: GradedMap):
    """Minimal polynomial over Q of a degree-0 endomorphism, ascending
    Fraction coefficients.  The operator is Q-linear on the module seen as a
    rational vector space (field coordinates flattened out)."""
    powers = [GradedMap.identity(op.domain)]

    def q_flat(m: GradedMap):
        out = []
        for x in m.flat():
            out.extend(x.coeffs)
        return out

    basis_rows = []   # rref-style accumulated rows: (vector, combo)
    k = 0
    while True:
        v = q_flat(powers[-1])
        combo = [Fraction(0)] * (k + 1)
        combo[k] = Fraction(1)
        for (pivot_idx, pivot_row, pivot_combo) in basis_rows:
            f = v[pivot_idx]
            if f:
                v = [a - f * b for a, b in zip(v, pivot_row)]
                combo = [a - f * b for a, b in
                         zip(combo + [Fraction(0)] * (len(pivot_combo) - len(combo)),
                             pivot_combo + [Fraction(0)] * (len(combo) - len(pivot_combo)))]
        nz = next((i for i, a in enumerate(v) if a), None)
        if nz is None:
            return tuple(combo)
        inv = 1 / v[nz]
        v = [a * inv for a in v]
        combo = [a * inv for a in combo]
        basis_rows.append((nz, v, combo))
        powers.append(op.compose(powers[-1]))
        k += 1
        if k > len(q_flat(powers[0])) + 1:
            raise InternalInvariantError("minimal polynomial search did not terminate")


def _factor_rational_poly(coeffs):
    """Irreducible monic factors (poly ascending Fractions, multiplicity)
    over Q, via sympy."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c) * x ** i for i, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, x).factor_list()
    out = []
    for poly, mult in factors:
        monic = poly.monic()
        cs = [Fraction(str(v)) for v in reversed(monic.all_coeffs())]
        out.append((tuple(cs), int(mult)))
    return out


def _apply_poly_to_map(coeffs, op: GradedMap) -> GradedMap:
    """Horner evaluation of a polynomial (rational or field coefficients,
    ascending) at an endomorphism."""
    module = op.domain
    acc = GradedMap(module, module, {})
    ident = GradedMap.identity(module)
    for c in reversed(coeffs):
        acc = op.compose(acc)
        if c:
            scalar = c if isinstance(c, FieldElement) else module.ctx.scalar(c)
            acc = acc + ident.scaled(scalar)
    return acc


def _kernel_basis_per_degree(op: GradedMap) -> dict:
    ctx = op.domain.ctx
    out = {}
    for d in op.domain.degrees:
        vecs = nullspace(op.block(d), ctx.one, ctx.zero)
        out[d] = Mat.from_rows([[v[i] for v in vecs]
                                for i in range(op.domain.dim(d))]) \
            if vecs else Mat.zeros(op.domain.dim(d), 0, ctx.zero)
    return out


def _submodule_from_basis(M: GradedModule, basis: dict):
    """Build a module on the given per-degree column bases of a stable
    subspace: restricted actions plus the inclusion map."""
    ctx = M.ctx
    dims = {d: b.ncols for d, b in basis.items() if b.ncols}
    actions = {}
    for d in sorted(dims):
        bd = basis[d]
        target = basis.get(d + 2, Mat.zeros(M.dim(d + 2), 0, ctx.zero))
        for s in range(M.system.rank):
            image = M.action(s, d) @ bd
            if target.ncols == 0:
                if not image.is_zero():
                    raise InternalInvariantError("subspace is not action-stable")
                actions[(s, d)] = Mat.zeros(0, bd.ncols, ctx.zero)
                continue
            X = solve(target, image, ctx.zero)
            if X is None:
                raise InternalInvariantError("subspace is not action-stable")
            actions[(s, d)] = X
    sub = GradedModule(M.system, dims, actions=actions)
    inc = GradedMap(sub, M, {d: basis[d] for d in dims})
    return sub, inc


def _split_by_kernels(M: GradedModule, kernel_maps):
    """Cut M along complementary kernels; returns (submodule, inc, proj) triples."""
    ctx = M.ctx
    bases = [_kernel_basis_per_degree(km) for km in kernel_maps]
    parts = []
    for basis in bases:
        if all(b.ncols == 0 for b in basis.values()):
            return None
        parts.append(_submodule_from_basis(M, basis))
    # projections from the combined change of basis, degree by degree
    projs = [dict() for _ in parts]
    for d in M.degrees:
        cols = [bases[i][d] for i in range(len(parts))]
        total = sum(c.ncols for c in cols)
        if total != M.dim(d):
            raise InternalInvariantError("primary components do not fill the degree")
        change = Mat.hstack(cols, M.dim(d))
        inv = inverse(change, ctx.one, ctx.zero)
        offset = 0
        for i, c in enumerate(cols):
            projs[i][d] = Mat(c.ncols, M.dim(d), inv.rows[offset:offset + c.ncols])
            offset += c.ncols
    return [(sub, inc, GradedMap(M, sub, projs[i]))
            for i, (sub, inc) in enumerate(parts)]


def _splitting_candidates(maps, rng):
    """Elements whose Q-minimal polynomial may expose a splitting.

    Integer combinations alone are not enough: when the endomorphism algebra
    is k[T]/(T^2 - beta) with sqrt(beta) in k, every integer combination has
    a Q-irreducible minimal polynomial.  Adding generator-scaled shifts
    (a + t*c*id and friends) separates distinct k-eigenvalues into distinct
    Galois orbits for all but finitely many t, so the schedule mixes
    coefficients from a small pool of field elements.
    """
    ctx = maps[0].domain.ctx
    c = ctx.generator
    for m in maps:
        yield m
    for a in range(len(maps)):
        for b in range(len(maps)):
            if a != b:
                yield maps[a].compose(maps[b])
    for m in maps:
        for t in (1, 2, 3):
            yield m + GradedMap.identity(m.domain).scaled(c * t)
    pool = [ctx.scalar(n) for n in (-3, -2, -1, 0, 1, 2, 3)] \
        + [c, -c, c * 2, c + 1, c - 1, c * c]
    for _ in range(400):
        coeffs = [rng.choice(pool) for _ in maps]
        if not any(coeffs):
            continue
        acc = GradedMap(maps[0].domain, maps[0].domain, {})
        for f, m in zip(coeffs, maps):
            if f:
                acc = acc + m.scaled(f)
        yield acc


def _operator_minpoly_k(op: GradedMap):
    """Minimal polynomial over the coefficient field, ascending FieldElement
    coefficients; much cheaper than the Q version."""
    ctx = op.domain.ctx
    powers = [GradedMap.identity(op.domain)]
    basis_rows = []
    k = 0
    while True:
        v = powers[-1].flat()
        combo = [ctx.zero] * k + [ctx.one]
        for (pivot_idx, pivot_row, pivot_combo) in basis_rows:
            f = v[pivot_idx]
            if f:
                v = [a - f * b for a, b in zip(v, pivot_row)]
                padded = list(pivot_combo) + [ctx.zero] * (len(combo) - len(pivot_combo))
                combo = [a - f * b for a, b in zip(combo, padded)]
        nz = next((i for i, a in enumerate(v) if a), None)
        if nz is None:
            return tuple(combo)
        inv = v[nz].inverse()
        v = [a * inv for a in v]
        combo = [a * inv for a in combo]
        basis_rows.append((nz, v, combo))
        powers.append(op.compose(powers[-1]))
        k += 1
        if k > len(powers[0].flat()) + 1:
            raise InternalInvariantError("minimal polynomial search did not terminate")


def _find_split(M: GradedModule, maps):
    """Split M along a primary decomposition of some endomorphism.

    Cheap first pass: a candidate that is singular but not nilpotent has
    k-minimal polynomial x^e g(x) with g(0) != 0, and M = ker(a^e) + ker(g(a))
    splits it with no factorisation at all.  Echelon bases of the hom solver
    usually contain such elements.  The general pass cuts along the Q-primary
    decomposition (Galois-safe, see module docstring).
    """
    rng = random.Random(0xC0C0)
    quick = list(maps)
    for a in range(len(maps)):
        for b in range(len(maps)):
            if a != b and len(quick) < 4 * len(maps):
                quick.append(maps[a].compose(maps[b]))
    for cand in quick:
        if cand.is_zero() or cand.is_invertible():
            continue    # units carry no x-factor; skip before the Krylov
        kappa = _operator_minpoly_k(cand)
        e = 0
        while e < len(kappa) and not kappa[e]:
            e += 1
        if e == 0 or e >= len(kappa) - 1:
            continue    # a unit, or nilpotent: no split from this element
        power = cand
        for _ in range(e - 1):
            power = power.compose(cand)
        kernel_maps = [power, _apply_poly_to_map(kappa[e:], cand)]
        parts = _split_by_kernels(M, kernel_maps)
        if parts is not None:
            return parts
    for cand in _splitting_candidates(maps, rng):
        if cand.is_zero():
            continue
        mu = _operator_minpoly_q(cand)
        if len(mu) <= 2:
            continue    # scalar: no information
        factors = _factor_rational_poly(mu)
        if len(factors) < 2:
            continue
        kernel_maps = [_apply_poly_to_map(_power_poly(poly, mult), cand)
                       for poly, mult in factors]
        parts = _split_by_kernels(M, kernel_maps)
        if parts is not None:
            return parts
    raise InternalInvariantError(
        "failed to split a module with a non-scalar endomorphism algebra")


def _power_poly(coeffs, mult):
    out = (Fraction(1),)
    for _ in range(mult):
        prod = [Fraction(0)] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(coeffs):
                    if b:
                        prod[i + j] += a * b
        out = tuple(prod)
    return out


class Summand:
    """One indecomposable occurrence inside a decomposition."""

    __slots__ = ("module", "inclusion", "projection")

    def __init__(self, module, inclusion, projection):
        self.module = module
        self.inclusion = inclusion
        self.projection = projection

    @property
    def shift(self) -> int:
        """Grading shift (-k): the summand is normalised(-k) with k its bottom."""
        return -self.module.bottom_degree

    def normalised(self) -> GradedModule:
        return self.module.shifted(-self.module.bottom_degree)

    def idempotent(self) -> GradedMap:
        return self.inclusion.compose(self.projection)


class Decomposition:
    def __init__(self, ambient: GradedModule, summands: list):
        self.ambient = ambient
        self.summands = sorted(
            summands, key=lambda s: (s.module.bottom_degree, -s.module.total_dim))

    def multiplicities(self):
        """Isomorphism classes with shifts: (representative, shift, count)."""
        groups = []
        for s in self.summands:
            norm = s.normalised()
            for g in groups:
                if g[1] == s.shift and _same_graded_dims(g[0], norm) \
                        and isomorphic(g[0], norm):
                    g[2] += 1
                    break
            else:
                groups.append([norm, s.shift, 1])
        return [(g[0], g[1], g[2]) for g in groups]

    def degree_zero_summands(self):
        return [s for s in self.summands if s.module.dim(0)]


def _same_graded_dims(a: GradedModule, b: GradedModule) -> bool:
    return a.graded_dims() == b.graded_dims()


def decompose(module: GradedModule) -> Decomposition:
    """Full Krull-Schmidt decomposition with inclusions and projections.

    Indecomposability is certified by a semisimple quotient of dimension 1
    (local endomorphism algebra); anything larger is split and recursed.
    """
    results = []
    ident = GradedMap.identity(module)
    stack = [(module, ident, ident)]
    while stack:
        X, inc, proj = stack.pop()
        if not X.dims:
            continue
        maps = end0_basis(X)
        if not maps:
            raise InternalInvariantError("endomorphism algebra without identity")
        if len(maps) == 1 or len(maps) - _radical_dimension(maps) == 1:
            results.append(Summand(X, inc, proj))
            continue
        for sub, sub_inc, sub_proj in _find_split(X, maps):
            stack.append((sub, inc.compose(sub_inc), sub_proj.compose(proj)))
    dec = Decomposition(module, results)
    total = sum(s.module.total_dim for s in dec.summands)
    if total != module.total_dim:
        raise InternalInvariantError("decomposition loses dimensions")
    for s in dec.summands:
        e = s.idempotent()
        if e.compose(e).blocks != e.blocks:
            raise InternalInvariantError("non-idempotent summand projector")
    return dec


# ---------------------------------------------------------------------------
# isomorphism testing

def isomorphic(M: GradedModule, N: GradedModule) -> bool:
    """Graded R-module isomorphism: an invertible degree-0 intertwiner.

    The intertwiner space is computed exactly; invertible elements are
    searched over basis vectors and a deterministic randomised schedule
    (an isomorphism makes the generic element invertible).
    """
    if not _same_graded_dims(M, N):
        return False
    if not M.dims:
        return True
    homs = hom0_space(M, N)
    if not homs:
        return False
    for h in homs:
        if h.is_invertible():
            return True
    rng = random.Random(0x15011)
    ctx = M.ctx
    for trial in range(120):
        coeffs = [rng.randint(-4, 4) for _ in homs]
        if not any(coeffs):
            continue
        acc = GradedMap(M, N, {})
        for f, h in zip(coeffs, homs):
            if f:
                acc = acc + h.scaled(ctx.scalar(f))
        if acc.is_invertible():
            return True
    return False


# ---------------------------------------------------------------------------
# Soergel modules

def module_to_json(module: GradedModule) -> dict:
    """Serializable dump: degrees, dimensions and action matrices with
    field-element entries as canonical strings in the generator c."""
    actions = {}
    for d in module.degrees:
        for s in range(module.system.rank):
            mat = module.action(s, d)
            if mat.nrows:
                actions[f"{s + 1},{d}"] = [[str(e) for e in row]
                                           for row in mat.rows]
    return {
        "degrees": module.degrees,
        "dims": {str(d): module.dim(d) for d in module.degrees},
        "actions": actions,
    }


def trivial_module(system: CoxeterSystem) -> GradedModule:
    one, zero = system.ctx.one, system.ctx.zero
    mod = GradedModule(system, {0: 1})
    mod.pairing = {0: Mat(1, 1, [[one]])}
    mod.top = 0
    return mod


def soergel_module(system: CoxeterSystem, word=None, element: GroupElement = None
                   ) -> GradedModule:
    """The indecomposable summand D_w with nonzero degree-0 part, carrying
    the intersection form restricted along its inclusion.

    Built by inducing one letter at a time from the right-hand end of a
    reduced word; each step decomposes R (x)_{R^s} D and keeps the summand
    containing the degree-0 line, which Krull-Schmidt identifies inside the
    ambient Bott-Samelson module.
    """
    if element is not None:
        word = element.reduced_word
    word = tuple(word)
    if not is_reduced(system, word):
        raise NotReducedError(f"word {tuple(s + 1 for s in word)} is not reduced")
    cache = system.cache.setdefault("soergel", {})
    if word in cache:
        return cache[word]
    module = trivial_module(system)
    for pos in range(len(word) - 1, -1, -1):
        s = word[pos]
        ambient = induce(system, s, module)
        dec = decompose(ambient)
        bottoms = dec.degree_zero_summands()
        if len(bottoms) != 1:
            raise InternalInvariantError(
                "expected a unique summand with nonzero degree-0 part")
        summand = bottoms[0]
        module = summand.module
        pairing = {}
        for d in module.degrees:
            inc_d = summand.inclusion.block(d)
            inc_top = summand.inclusion.block(ambient.top - d)
            pairing[d] = inc_d.transpose() @ ambient.pairing_matrix(d) @ inc_top
        module.pairing = pairing
        module.top = ambient.top
        if module.bottom_degree != 0 or module.top_degree != ambient.top:
            # happens exactly when the geometric form is degenerate (an
            # invariant linear form kills the bottom, e.g. the infinite
            # dihedral group), where the degree-0 summand stops short of the
            # Poincare-dual range and the extraction is not meaningful
            raise InvalidInputError(
                "degenerate geometric representation: the degree-0 summand "
                "does not span the full degree range, so D_w is undefined here")
    if module.top != 2 * len(word):
        raise InternalInvariantError("Soergel module top degree mismatch")
    with system.lock:
        cache[word] = module
    return module


def coinvariant_module(system: CoxeterSystem) -> GradedModule:
    """The coinvariant algebra as a graded module on the Schubert basis,
    with multiplication matrices from the Chevalley formula and the
    delta-orthogonal pairing."""
    with system.lock:
        cached = system.cache.get("coinvariant")
        if cached is not None:
            return cached
    calc = schubert_calculus(system)
    enum = calc.enum
    ell = enum.w0.length
    by_degree: dict = {}
    for el in enum.elements:
        by_degree.setdefault(2 * (ell - el.length), []).append(el)
    for d in by_degree:
        by_degree[d].sort(key=lambda e: (e.length, e.reduced_word))
    index = {d: {el.key: i for i, el in enumerate(v)} for d, v in by_degree.items()}
    dims = {d: len(v) for d, v in by_degree.items()}
    ctx = system.ctx
    actions = {}
    for d, els in by_degree.items():
        for s in range(system.rank):
            mat = Mat.zeros(dims.get(d + 2, 0), len(els), ctx.zero)
            lam = calc.ring.vars[s]
            for j, x in enumerate(els):
                for root, tx, coeff in calc.chevalley(lam, x):
                    if coeff:
                        i = index[d + 2][tx.key]
                        mat.rows[i][j] = mat.rows[i][j] + coeff
            actions[(s, d)] = mat
    module = GradedModule(system, dims, actions=actions,
                          labels={d: [el.reduced_word for el in v]
                                  for d, v in by_degree.items()},
                          top=2 * ell)
    pairing = {}
    for d, els in by_degree.items():
        mat = Mat.zeros(len(els), dims[2 * ell - d], ctx.zero)
        for i, x in enumerate(els):
            xw0 = enum.lookup(x * enum.w0)
            j = index[2 * ell - d][xw0.key]
            mat.rows[i][j] = ctx.one
        pairing[d] = mat
    module.pairing = pairing
    with system.lock:
        system.cache["coinvariant"] = module
    return module
