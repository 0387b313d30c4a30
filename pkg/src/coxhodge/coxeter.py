"""Coxeter systems via the geometric representation, with exact matrices.

Elements are n x n matrices over the real cyclotomic field acting on
h = span(alpha_s^vee); the representation is faithful, so matrix equality is
element equality.  Because the form (alpha_s^vee, alpha_t^vee) = -cos(pi/m_st)
gives every simple root length 1 and a symmetric Cartan pairing, the matrix
of w on h in the coroot basis equals the matrix of w on h* in the simple-root
basis; one matrix per element serves both actions.

Length and reduced words come from descent detection (w s shortens w exactly
when w sends alpha_s to a negative root), which works for infinite groups
too; finite enumeration is breadth-first closure under right multiplication
with an explicit bound.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass

from .errors import (
    GroupInfiniteError,
    InternalInvariantError,
    InvalidInputError,
)
from .linalg import Mat
from .scalars import INF, FieldContext, FieldElement, field_context, validate_coxeter_matrix

DEFAULT_BOUND = 100000


class CoxeterSystem:
    """A validated Coxeter matrix with its geometric representation data."""

    def __init__(self, coxeter_matrix):
        self.matrix = validate_coxeter_matrix(coxeter_matrix)
        self.rank = len(self.matrix)
        self.ctx: FieldContext = field_context(self.matrix)
        n, ctx = self.rank, self.ctx
        minus_one = -ctx.one

        def form_entry(m):
            if m is INF:
                return minus_one
            if m == 1:
                return ctx.one
            return -(ctx.two_cos(1, m) / 2)

        self.bilinear = Mat.from_rows(
            [[form_entry(self.matrix[i][j]) for j in range(n)] for i in range(n)])
        # <alpha_t, alpha_s^vee> = 2(alpha_t^vee, alpha_s^vee)
        self.cartan = self.bilinear.scaled(ctx.scalar(2))
        gens = []
        for s in range(n):
            rows = [[ctx.one if i == j else ctx.zero for j in range(n)]
                    for i in range(n)]
            for t in range(n):
                rows[s][t] = rows[s][t] - self.cartan.rows[s][t]
            gens.append(Mat(n, n, rows))
        self.generator_matrices = gens
        self._check_relations()
        self.identity = GroupElement(self, Mat.identity(n, ctx.one, ctx.zero), ())
        self.generators = [GroupElement(self, gens[s], (s,)) for s in range(n)]
        self.cache: dict = {}
        # reentrant: cached constructions (ring, Schubert data) nest
        self.lock = threading.RLock()

    def _check_relations(self):
        n, ctx = self.rank, self.ctx
        ident = Mat.identity(n, ctx.one, ctx.zero)
        for s in range(n):
            if self.generator_matrices[s] @ self.generator_matrices[s] != ident:
                raise InternalInvariantError(f"generator {s} is not an involution")
        for s in range(n):
            for t in range(s + 1, n):
                m = self.matrix[s][t]
                if m is INF:
                    continue
                st = self.generator_matrices[s] @ self.generator_matrices[t]
                acc = ident
                for _ in range(m):
                    acc = acc @ st
                if acc != ident:
                    raise InternalInvariantError(
                        f"braid relation (s{s + 1} s{t + 1})^{m} failed")

    # -- elements ----------------------------------------------------------

    def element_from_word(self, word) -> "GroupElement":
        el = self.identity
        for s in word:
            if not 0 <= s < self.rank:
                raise InvalidInputError(f"generator index {s} out of range")
            el = el * self.generators[s]
        return el

    def pair(self, weight_coords, coroot_coords) -> FieldElement:
        """<lambda, v> for lambda in simple-root and v in coroot coordinates."""
        acc = self.ctx.zero
        for i, b in enumerate(coroot_coords):
            if b:
                for j, a in enumerate(weight_coords):
                    if a:
                        acc = acc + self.cartan.rows[i][j] * a * b
        return acc

    def coroot_pairings(self, weight_coords):
        """<lambda, alpha_s^vee> for every generator s."""
        out = []
        for s in range(self.rank):
            acc = self.ctx.zero
            for j, a in enumerate(weight_coords):
                if a:
                    acc = acc + self.cartan.rows[s][j] * a
            out.append(acc)
        return out

    def __repr__(self):
        return f"CoxeterSystem(rank={self.rank}, N={self.ctx.N})"


class GroupElement:
    """A group element as its matrix on h, plus some word expressing it."""

    __slots__ = ("system", "mat", "word", "_key", "_reduced", "_hash")

    def __init__(self, system: CoxeterSystem, mat: Mat, word: tuple,
                 reduced: tuple | None = None):
        self.system = system
        self.mat = mat
        self.word = word
        self._reduced = reduced
        self._key = None
        self._hash = None

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(tuple(row) for row in self.mat.rows)
        return self._key

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.system, self.mat @ other.mat,
                            self.word + other.word)

    def inverse(self) -> "GroupElement":
        el = self.system.element_from_word(tuple(reversed(self.word)))
        if self._reduced is not None:
            el._reduced = tuple(reversed(self._reduced))
        return el

    def is_identity(self) -> bool:
        one, zero = self.system.ctx.one, self.system.ctx.zero
        return self.mat == Mat.identity(self.system.rank, one, zero)

    def apply_to_coords(self, coords):
        """Image of a vector given in simple-root (equivalently coroot) coordinates."""
        out = []
        for row in self.mat.rows:
            acc = self.system.ctx.zero
            for a, v in zip(row, coords):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def sends_root_negative(self, s: int) -> bool:
        """True when w(alpha_s) is a negative root, i.e. ws is shorter."""
        return root_sign([row[s] for row in self.mat.rows]) < 0

    @property
    def reduced_word(self) -> tuple:
        if self._reduced is None:
            letters = []
            w = self
            while not w.is_identity():
                for s in range(self.system.rank):
                    if w.sends_root_negative(s):
                        letters.append(s)
                        w = w * self.system.generators[s]
                        break
                else:
                    raise InternalInvariantError("non-identity element with no descent")
            self._reduced = tuple(reversed(letters))
        return self._reduced

    @property
    def length(self) -> int:
        return len(self.reduced_word)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self):
        word = "".join(str(s + 1) for s in self.reduced_word) or "id"
        return f"GroupElement({word})"


def root_sign(coords) -> int:
    """+1 / -1 for a positive / negative root vector, 0 for the zero vector.

    Roots have coordinates of uniform sign; mixed signs mean the vector is
    not a root and trip an internal error.
    """
    signs = {c.sign() for c in coords if c}
    if not signs:
        return 0
    if signs == {1}:
        return 1
    if signs == {-1}:
        return -1
    raise InternalInvariantError("root vector with mixed coordinate signs")


def is_reduced(system: CoxeterSystem, word) -> bool:
    """Reducedness via positivity of the root sequence s1..s_{k-1}(alpha_sk)."""
    prefix = system.identity
    for s in word:
        if not 0 <= s < system.rank:
            raise InvalidInputError(f"generator index {s} out of range")
        beta = [row[s] for row in prefix.mat.rows]
        if root_sign(beta) < 0:
            return False
        prefix = prefix * system.generators[s]
    return True


@dataclass(frozen=True)
class Root:
    """A root with its reflection; coords in the simple-root basis of h*,
    coroot in the coroot basis of h (equal coordinate vectors here because
    every simple root has length 1)."""

    coords: tuple
    coroot: tuple
    reflection: GroupElement
    positive: bool


class EnumeratedGroup:
    """Breadth-first closure of a finite system, sorted by (length, lex word)."""

    def __init__(self, system: CoxeterSystem, bound: int):
        self.system = system
        self.bound = bound
        identity = system.identity
        identity._reduced = ()
        found = {identity.key: identity}
        order = [identity]
        frontier = [identity]
        while frontier:
            nxt = []
            for el in frontier:
                for s in range(system.rank):
                    cand = GroupElement(system, el.mat @ system.generator_matrices[s],
                                        el.word + (s,), reduced=el.word + (s,))
                    if cand.key not in found:
                        found[cand.key] = cand
                        order.append(cand)
                        nxt.append(cand)
                        if len(found) > bound:
                            raise GroupInfiniteError(bound)
            frontier = nxt
        self.elements = order
        self.index = {el.key: i for i, el in enumerate(order)}
        longest = max(el.length for el in order)
        top = [el for el in order if el.length == longest]
        if len(top) != 1:
            raise InternalInvariantError("longest element is not unique")
        self.w0 = top[0]
        self._roots = None
        self._covers = {}

    def __len__(self):
        return len(self.elements)

    def lookup(self, el: GroupElement) -> GroupElement:
        """Canonical (enumerated) representative of an element."""
        try:
            return self.elements[self.index[el.key]]
        except KeyError:
            raise InternalInvariantError("element outside the enumerated group") from None

    def positive_roots(self):
        """All positive roots, each paired with its reflection and coroot,
        in bijection with the reflections T."""
        if self._roots is None:
            ctx = self.system.ctx
            by_reflection = {}
            for el in self.elements:
                inv = None
                for s in range(self.system.rank):
                    coords = [row[s] for row in el.mat.rows]
                    if inv is None:
                        inv = el.inverse()
                    t = (el * self.system.generators[s]) * inv
                    t_canon = self.lookup(t)
                    if t_canon.key in by_reflection:
                        continue
                    if root_sign(coords) < 0:
                        coords = [-c for c in coords]
                    tup = tuple(coords)
                    by_reflection[t_canon.key] = Root(
                        coords=tup, coroot=tup, reflection=t_canon, positive=True)
            roots = sorted(by_reflection.values(),
                           key=lambda r: (r.reflection.length, r.reflection.reduced_word))
            if len(roots) != self.w0.length:
                raise InternalInvariantError("|Phi+| differs from l(w0)")
            for r in roots:
                pairing = self.system.pair(r.coords, r.coroot)
                if pairing != ctx.scalar(2):
                    raise InternalInvariantError("<alpha_t, alpha_t^vee> != 2")
            self._roots = roots
        return self._roots

    def lower_covers(self, x: GroupElement):
        """All (t, tx) with t a reflection and l(tx) = l(x) - 1."""
        x = self.lookup(x)
        if x.key not in self._covers:
            out = []
            for root in self.positive_roots():
                tx = self.lookup(root.reflection * x)
                if tx.length == x.length - 1:
                    out.append((root, tx))
            self._covers[x.key] = out
        return self._covers[x.key]


def build_system(coxeter_matrix) -> CoxeterSystem:
    """Construct a system, verifying the involution and braid relations."""
    return CoxeterSystem(coxeter_matrix)


_system_cache: dict = {}
_system_cache_lock = threading.Lock()


def shared_system(coxeter_matrix) -> CoxeterSystem:
    """A process-wide cached system for a given matrix (systems are immutable)."""
    rows = validate_coxeter_matrix(coxeter_matrix)
    key = tuple(tuple(0 if e is INF else e for e in row) for row in rows)
    with _system_cache_lock:
        if key not in _system_cache:
            _system_cache[key] = build_system(rows)
        return _system_cache[key]


def enumerate_group(system: CoxeterSystem, bound: int = DEFAULT_BOUND) -> EnumeratedGroup:
    """Enumerate a finite group, caching the completed closure on the system."""
    with system.lock:
        enum = system.cache.get("enum")
        if enum is None:
            enum = EnumeratedGroup(system, bound)
            system.cache["enum"] = enum
        elif len(enum) > bound:
            raise GroupInfiniteError(bound)
        return enum


# -- descriptors ------------------------------------------------------------

_NAMED = re.compile(r"^([ABDEabde])(\d+)$")


def _chain(n, links):
    rows = [[2] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    for (i, j, m) in links:
        rows[i][j] = m
        rows[j][i] = m
    return rows


def descriptor_to_matrix(desc: str):
    """Parse a named group descriptor: A<n>, B<n>, D<n>, E6-E8, F4, G2, H3, H4, I2:<m>."""
    desc = desc.strip()
    if desc.upper().startswith("I2:"):
        body = desc[3:]
        if not body.isdigit() or int(body) < 2:
            raise InvalidInputError(f"bad dihedral order in descriptor {desc!r}")
        m = int(body)
        return [[1, m], [m, 1]]
    fixed = {
        "F4": _chain(4, [(0, 1, 3), (1, 2, 4), (2, 3, 3)]),
        "G2": _chain(2, [(0, 1, 6)]),
        "H3": _chain(3, [(0, 1, 5), (1, 2, 3)]),
        "H4": _chain(4, [(0, 1, 5), (1, 2, 3), (2, 3, 3)]),
        "E6": _chain(6, [(0, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (1, 3, 3)]),
        "E7": _chain(7, [(0, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3),
                         (1, 3, 3)]),
        "E8": _chain(8, [(0, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3),
                         (6, 7, 3), (1, 3, 3)]),
    }
    if desc.upper() in fixed:
        return fixed[desc.upper()]
    m = _NAMED.match(desc)
    if not m:
        raise InvalidInputError(f"unknown group descriptor {desc!r}")
    family, n = m.group(1).upper(), int(m.group(2))
    if family == "A" and n >= 1:
        return _chain(n, [(i, i + 1, 3) for i in range(n - 1)])
    if family == "B" and n >= 2:
        return _chain(n, [(i, i + 1, 3) for i in range(n - 2)] + [(n - 2, n - 1, 4)])
    if family == "D" and n >= 3:
        return _chain(n, [(i, i + 1, 3) for i in range(n - 2)] + [(n - 3, n - 1, 3)])
    raise InvalidInputError(f"unknown group descriptor {desc!r}")


def matrix_from_json(data):
    """Coxeter matrix from parsed JSON: integers, with "inf" for infinity."""
    if not isinstance(data, list):
        raise InvalidInputError("matrix file must hold an array of arrays")
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise InvalidInputError("matrix file must hold an array of arrays")
        out = []
        for e in row:
            if e == "inf":
                out.append(INF)
            elif isinstance(e, int) and not isinstance(e, bool):
                out.append(e)
            else:
                raise InvalidInputError(f"bad matrix entry {e!r}")
        rows.append(out)
    return validate_coxeter_matrix(rows)


def matrix_to_json(matrix):
    return [["inf" if e is INF else e for e in row] for row in matrix]


def canonical_group_label(descriptor: str | None, matrix) -> str:
    if descriptor:
        return descriptor
    return "matrix:" + json.dumps(matrix_to_json(matrix), separators=(",", ":"))
