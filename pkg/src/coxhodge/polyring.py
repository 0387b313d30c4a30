"""The graded ring R = S(h*) with its W-action, divided differences, and the
coinvariant-algebra Schubert calculus.

Variables are the simple roots alpha_s (degree 2), so the generator action is
the closed-form substitution alpha_t -> alpha_t - <alpha_t, alpha_s^vee>
alpha_s and a divided difference is an exact division by a variable; the
division is checked monomial-wise and a failure signals an action bug, not
bad input.

Normalisation (pinned by the delta-orthogonality of the Schubert pairing):
Y_x = the class of d_x(pi) / |W|, and <f, g> = degree-zero part of d_w0(f g).
With these constants <Y_x, Y_z> = delta_{w0, x^-1 z} holds on the nose, which
is what the dual-basis expansion and the Chevalley cross-checks rely on.
"""

from __future__ import annotations

from fractions import Fraction

from .coxeter import CoxeterSystem, EnumeratedGroup, GroupElement, enumerate_group
from .errors import InternalInvariantError, InvalidInputError, NonLinearError
from .scalars import FieldContext, FieldElement


class Polynomial:
    """Sparse multivariate polynomial over a field context.

    terms maps exponent tuples to nonzero FieldElement coefficients; the
    grading doubles the polynomial degree (deg alpha_s = 2).
    """

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldContext, nvars: int, terms: dict):
        self.ctx = ctx
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ctx, nvars):
        return Polynomial(ctx, nvars, {})

    @staticmethod
    def constant(ctx, nvars, value):
        value = value if isinstance(value, FieldElement) else ctx.scalar(value)
        return Polynomial(ctx, nvars, {(0,) * nvars: value})

    @staticmethod
    def variable(ctx, nvars, i):
        e = tuple(1 if j == i else 0 for j in range(nvars))
        return Polynomial(ctx, nvars, {e: ctx.one})

    @staticmethod
    def linear(ctx, coords):
        coords = list(coords)
        n = len(coords)
        terms = {}
        for i, c in enumerate(coords):
            c = c if isinstance(c, FieldElement) else ctx.scalar(c)
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return Polynomial(ctx, n, terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise InternalInvariantError("polynomials in different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            out[e] = c if acc is None else acc + c
        return Polynomial(self.ctx, self.nvars, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            out[e] = -c if acc is None else acc - c
        return Polynomial(self.ctx, self.nvars, out)

    def __neg__(self):
        return Polynomial(self.ctx, self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            if not other:
                return Polynomial.zero(self.ctx, self.nvars)
            return Polynomial(self.ctx, self.nvars,
                              {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = out.get(e)
                out[e] = prod if acc is None else acc + prod
        return Polynomial(self.ctx, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInputError("negative polynomial power")
        result = Polynomial.constant(self.ctx, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- structure -----------------------------------------------------------

    def degree(self) -> int:
        """Polynomial degree; the graded degree is twice this.  -1 for zero."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_components(self) -> dict:
        out: dict = {}
        for e, c in self.terms.items():
            d = sum(e)
            out.setdefault(d, {})[e] = c
        return {d: Polynomial(self.ctx, self.nvars, t) for d, t in out.items()}

    def constant_term(self) -> FieldElement:
        return self.terms.get((0,) * self.nvars, self.ctx.zero)

    def coefficient(self, exponents) -> FieldElement:
        return self.terms.get(tuple(exponents), self.ctx.zero)

    def linear_coords(self):
        """Coordinate vector of a homogeneous linear polynomial."""
        coords = [self.ctx.zero] * self.nvars
        for e, c in self.terms.items():
            if sum(e) != 1:
                raise NonLinearError("polynomial is not homogeneous of degree 2")
            coords[e.index(1)] = c
        return coords

    def substitute(self, images: list) -> "Polynomial":
        out = Polynomial.zero(self.ctx, images[0].nvars if images else self.nvars)
        for e, c in self.terms.items():
            term = Polynomial.constant(out.ctx, out.nvars, c)
            for i, exp in enumerate(e):
                if exp:
                    term = term * images[i] ** exp
            out = out + term
        return out

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)})"


class PolyRing:
    """R bound to a Coxeter system: variables, action, divided differences."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.ctx = system.ctx
        self.nvars = system.rank
        self.vars = [Polynomial.variable(self.ctx, self.nvars, i)
                     for i in range(self.nvars)]
        # s(alpha_t) = alpha_t - C[s][t] alpha_s
        self._gen_images = []
        for s in range(self.nvars):
            images = []
            for t in range(self.nvars):
                img = dict(self.vars[t].terms)
                cst = system.cartan.rows[s][t]
                e_s = tuple(1 if j == s else 0 for j in range(self.nvars))
                img[e_s] = img.get(e_s, self.ctx.zero) - cst
                images.append(Polynomial(self.ctx, self.nvars, img))
            self._gen_images.append(images)
        self._power_cache: dict = {}

    def zero(self):
        return Polynomial.zero(self.ctx, self.nvars)

    def constant(self, v):
        return Polynomial.constant(self.ctx, self.nvars, v)

    def linear(self, coords):
        return Polynomial.linear(self.ctx, list(coords))

    def _image_power(self, s, t, exp):
        key = (s, t, exp)
        cached = self._power_cache.get(key)
        if cached is None:
            cached = self._gen_images[s][t] ** exp
            self._power_cache[key] = cached
        return cached

    def act_gen(self, s: int, f: Polynomial) -> Polynomial:
        out = self.zero()
        for e, c in f.terms.items():
            term = self.constant(c)
            for t, exp in enumerate(e):
                if exp:
                    term = term * self._image_power(s, t, exp)
            out = out + term
        return out

    def act(self, w, f: Polynomial) -> Polynomial:
        """Action of a group element or word; a graded ring automorphism."""
        word = w.reduced_word if isinstance(w, GroupElement) else tuple(w)
        for s in reversed(word):
            f = self.act_gen(s, f)
        return f

    def demazure(self, s: int, f: Polynomial) -> Polynomial:
        """(f - s(f)) / alpha_s with an exactness check on the division."""
        g = f - self.act_gen(s, f)
        out = {}
        for e, c in g.terms.items():
            if e[s] < 1:
                raise InternalInvariantError(
                    "Demazure numerator not divisible by its simple root")
            out[e[:s] + (e[s] - 1,) + e[s + 1:]] = c
        return Polynomial(self.ctx, self.nvars, out)

    def demazure_word(self, word, f: Polynomial) -> Polynomial:
        """d_{s_1} ... d_{s_m} applied to f (rightmost operator first)."""
        for s in reversed(tuple(word)):
            f = self.demazure(s, f)
        return f


def ring_of(system: CoxeterSystem) -> PolyRing:
    with system.lock:
        ring = system.cache.get("ring")
        if ring is None:
            ring = PolyRing(system)
            system.cache["ring"] = ring
        return ring


class SchubertClass:
    __slots__ = ("element", "poly", "degree")

    def __init__(self, element, poly, degree):
        self.element = element
        self.poly = poly
        self.degree = degree

    def __repr__(self):
        return f"SchubertClass({self.element!r}, deg={self.degree})"


class SchubertCalculus:
    """Schubert basis, pairing and Chevalley formula for a finite system."""

    def __init__(self, system: CoxeterSystem, enum: EnumeratedGroup):
        self.system = system
        self.enum = enum
        self.ring = ring_of(system)
        roots = enum.positive_roots()
        pi = self.ring.constant(1)
        for r in roots:
            pi = pi * self.ring.linear(r.coords)
        self.pi = pi
        self.order = len(enum)
        self.top_length = enum.w0.length
        # d_x(pi) by increasing length: x = s u reduced gives P_x = d_s(P_u)
        raw = {enum.system.identity.key: pi}
        for el in enum.elements[1:]:
            s = el.reduced_word[0]
            parent = enum.lookup(system.generators[s] * el)
            raw[el.key] = self.ring.demazure(s, raw[parent.key])
        w0_val = raw[enum.w0.key]
        if w0_val != self.ring.constant(self.order):
            raise InternalInvariantError("d_w0(pi) differs from |W|")
        inv_order = Fraction(1, self.order)
        self.classes = {
            key: SchubertClass(enum.elements[enum.index[key]],
                               poly * inv_order,
                               2 * (self.top_length - enum.elements[enum.index[key]].length))
            for key, poly in raw.items()
        }

    def schubert_class(self, x: GroupElement) -> SchubertClass:
        return self.classes[self.enum.lookup(x).key]

    def pairing(self, f: Polynomial, g: Polynomial) -> FieldElement:
        """Degree-zero part of d_w0(f g)."""
        return self.ring.demazure_word(
            self.enum.w0.reduced_word, f * g).constant_term()

    def expand_in_schubert(self, f: Polynomial) -> dict:
        """Coefficients of the image of f in H on the Schubert basis,
        keyed by (canonical) group element."""
        out = {}
        w0 = self.enum.w0
        for d, comp in f.homogeneous_components().items():
            target_len = self.top_length - d
            if not 0 <= target_len <= self.top_length:
                continue
            for el in self.enum.elements:
                if el.length != target_len:
                    continue
                dual = self.schubert_class(self.enum.lookup(el * w0))
                c = self.pairing(comp, dual.poly)
                if c:
                    out[el] = out.get(el, self.system.ctx.zero) + c
        return {el: c for el, c in out.items() if c}

    def chevalley(self, lam: Polynomial, x: GroupElement) -> list:
        """lambda * Y_x = sum over lower covers (t, tx) of <lambda, alpha_t^vee> Y_tx."""
        coords = lam.linear_coords()
        if not any(coords):
            raise NonLinearError("Chevalley weight must be homogeneous of degree 2")
        out = []
        for root, tx in self.enum.lower_covers(x):
            coeff = self.system.pair(coords, root.coroot)
            out.append((root, tx, coeff))
        return out


def schubert_calculus(system: CoxeterSystem, bound: int | None = None) -> SchubertCalculus:
    enum = enumerate_group(system, *((bound,) if bound is not None else ()))
    with system.lock:
        calc = system.cache.get("schubert")
        if calc is None:
            calc = SchubertCalculus(system, enum)
            system.cache["schubert"] = calc
        return calc


# ---------------------------------------------------------------------------
# polynomial text format: rationals, `c`, variables a1..an, ^, *, +, -

def format_field_terms(coeff: FieldElement):
    """Split a field element into (rational, c-power) pairs, constant first."""
    return [(q, j) for j, q in enumerate(coeff.coeffs) if q]


def format_polynomial(p: Polynomial) -> str:
    pieces = []
    for e in sorted(p.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
        for q, j in format_field_terms(p.terms[e]):
            factors = []
            if j == 1:
                factors.append("c")
            elif j > 1:
                factors.append(f"c^{j}")
            for i, exp in enumerate(e):
                if exp == 1:
                    factors.append(f"a{i + 1}")
                elif exp > 1:
                    factors.append(f"a{i + 1}^{exp}")
            mag = abs(q)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            pieces.append((q < 0, "*".join(factors)))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for negative, body in pieces[1:]:
        out += (" - " if negative else " + ") + body
    return out


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            if j < len(text) and text[j] == "/":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise InvalidInputError("bad rational in polynomial text")
                tokens.append(Fraction(num, int(text[j + 1:k])))
                i = k
            else:
                tokens.append(Fraction(num))
                i = j
        elif ch == "c":
            tokens.append("VAR_C")
            i += 1
        elif ch == "a":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise InvalidInputError(f"bad variable near {text[i:]!r}")
            tokens.append(("VAR_A", int(text[i + 1:j]) - 1))
            i = j
        else:
            raise InvalidInputError(f"unexpected character {ch!r} in polynomial text")
    return tokens


def parse_polynomial(text: str, ctx: FieldContext, nvars: int) -> Polynomial:
    """Parse the CLI polynomial grammar, e.g. `a1^2*a2 - 1/2*c*a1`."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def parse_factor():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise InvalidInputError("truncated polynomial text")
        if isinstance(tok, Fraction):
            base = Polynomial.constant(ctx, nvars, tok)
        elif tok == "VAR_C":
            base = Polynomial.constant(ctx, nvars, ctx.generator)
        elif isinstance(tok, tuple) and tok[0] == "VAR_A":
            idx = tok[1]
            if not 0 <= idx < nvars:
                raise InvalidInputError(f"variable a{idx + 1} out of range")
            base = Polynomial.variable(ctx, nvars, idx)
        else:
            raise InvalidInputError(f"unexpected token {tok!r}")
        pos += 1
        if peek() == "^":
            pos += 1
            exp = peek()
            if not isinstance(exp, Fraction) or exp.denominator != 1 or exp < 0:
                raise InvalidInputError("exponent must be a nonnegative integer")
            pos += 1
            base = base ** int(exp)
        return base

    def parse_term():
        nonlocal pos
        acc = parse_factor()
        while peek() == "*":
            pos += 1
            acc = acc * parse_factor()
        return acc

    negate = False
    if peek() in ("+", "-"):
        negate = peek() == "-"
        pos += 1
    result = parse_term()
    if negate:
        result = -result
    while peek() in ("+", "-"):
        negative = peek() == "-"
        pos += 1
        term = parse_term()
        result = result - term if negative else result + term
    if pos != len(tokens):
        raise InvalidInputError("trailing tokens in polynomial text")
    return result
