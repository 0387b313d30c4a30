"""Exact arithmetic in the real cyclotomic field Q(2cos(pi/N)).

Every scalar in the library is a FieldElement: a polynomial in the generator
c = 2cos(pi/N) with rational coefficients, reduced modulo the minimal
polynomial of c.  The minimal polynomial is obtained from the 2N-th
cyclotomic polynomial Phi_2N by the palindromic substitution
Phi_2N(x) = x^d * psi(x + 1/x), so no factorisation is ever performed.

The real embedding is pinned to the *largest* real root of psi, which is
2cos(pi/N) itself; choosing any other root would break the positivity of the
Gauss q-numbers [n] for 0 < n < m.  Signs of nonzero elements are decided by
interval evaluation over a rational enclosure of the root, bisecting the
enclosure until zero is excluded.  The loop terminates because a nonzero
canonical form cannot vanish at c.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InternalInvariantError, InvalidInputError

#: Coxeter-matrix entry standing for m_st = infinity.
INF = None

_F0 = Fraction(0)
_F1 = Fraction(1)


def _sgn(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


# --------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists)

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _int_poly_div_exact(num, den):
    """Quotient of integer polynomials known to divide exactly."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        q, r = divmod(num[k + len(den) - 1], lead)
        if r:
            raise InternalInvariantError("inexact integer polynomial division")
        out[k] = q
        if q:
            for j, dj in enumerate(den):
                num[k + j] -= q * dj
    if any(num[: len(den) - 1]):
        raise InternalInvariantError("nonzero remainder in cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as an ascending tuple of integer coefficients."""
    if n == 1:
        return (-1, 1)
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _int_poly_div_exact(p, cyclotomic_polynomial(d))
    return tuple(p)


def minimal_polynomial_two_cos(N: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(pi/N) over Q, degree phi(2N)/2.

    Uses the fold Phi_2N(x) = x^d psi(x + 1/x); x^j + x^-j expands to the
    monic Chebyshev-like polynomials V_j with V_0 = 2, V_1 = y,
    V_{j+1} = y V_j - V_{j-1}.
    """
    if N < 2:
        raise InvalidInputError("conductor must be at least 2")
    phi = cyclotomic_polynomial(2 * N)
    two_d = len(phi) - 1
    if two_d % 2:
        raise InternalInvariantError("Phi_2N has odd degree")
    d = two_d // 2
    for j in range(two_d + 1):
        if phi[j] != phi[two_d - j]:
            raise InternalInvariantError("Phi_2N is not palindromic")
    vs = [[2], [0, 1]]
    while len(vs) <= d:
        prev, cur = vs[-2], vs[-1]
        nxt = [0] + list(cur)
        for i, p in enumerate(prev):
            nxt[i] -= p
        vs.append(_trim(nxt))
    psi = [0] * (d + 1)
    psi[0] = phi[d]
    for j in range(1, d + 1):
        cj = phi[d + j]
        if cj:
            for i, v in enumerate(vs[j]):
                psi[i] += cj * v
    return tuple(psi)


def _frac_poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = _F0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _frac_poly_rem(a, b):
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b):
        q = a[-1] / lead
        if q:
            for j in range(len(b)):
                a[len(a) - len(b) + j] -= q * b[j]
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _sturm_chain(p):
    chain = [list(p)]
    dp = [i * c for i, c in enumerate(p)][1:]
    if dp:
        chain.append(dp)
    while len(chain[-1]) > 1:
        r = _frac_poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sgn(_frac_poly_eval(p, x)) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _eval_interval(coeffs, lo: Fraction, hi: Fraction):
    """Sound interval Horner evaluation over [lo, hi]."""
    alo = ahi = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


# --------------------------------------------------------------------------
# field context

class FieldContext:
    """The field Q(c), c = 2cos(pi/N), as Q[x] modulo the minimal polynomial.

    Immutable after construction; the stored root enclosure only ever shrinks
    (monotone refinement), so sharing a context across threads is safe.
    """

    def __init__(self, N: int):
        self.N = N
        self.minimal_polynomial = minimal_polynomial_two_cos(N)
        self.degree = len(self.minimal_polynomial) - 1
        d = self.degree
        self._mp_frac = tuple(Fraction(a) for a in self.minimal_polynomial)
        # c^(d+j) reduced mod psi, for j = 0 .. d-2
        rows = []
        if d >= 1:
            row = [Fraction(-a) for a in self.minimal_polynomial[:d]]
            rows.append(tuple(row))
            for _ in range(d - 2):
                shifted = [_F0] + list(rows[-1][: d - 1])
                top = rows[-1][d - 1]
                if top:
                    shifted = [s + top * r for s, r in zip(shifted, rows[0])]
                rows.append(tuple(shifted))
        self._reduction = tuple(rows)
        self.zero = FieldElement(self, (_F0,) * d)
        self.one = self.scalar(1)
        if d == 1:
            self.generator = self.scalar(-self.minimal_polynomial[0])
            self._enc = None
        else:
            self.generator = FieldElement(
                self, (_F0, _F1) + (_F0,) * (d - 2))
            self._sturm = _sturm_chain(self._mp_frac)
            self._enc = self._isolate_largest_root()
            self._sign_hi = _sgn(_frac_poly_eval(self._mp_frac, self._enc[1]))

    # -- construction -----------------------------------------------------

    def scalar(self, r) -> "FieldElement":
        r = Fraction(r)
        return FieldElement(self, (r,) + (_F0,) * (self.degree - 1))

    def element(self, coeffs) -> "FieldElement":
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > self.degree:
            raise InvalidInputError("coefficient vector longer than field degree")
        cs += [_F0] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def two_cos(self, k: int, n: int) -> "FieldElement":
        """2cos(k*pi/n) as an exact element; n must divide N after reduction."""
        if n < 1:
            raise InvalidInputError("denominator must be positive")
        k = abs(k) % (2 * n)
        if k > n:
            k = 2 * n - k
        if k == 0:
            return self.scalar(2)
        g = gcd(k, n)
        k2, n2 = k // g, n // g
        if self.N % n2:
            raise InvalidInputError(
                f"cos(pi*{k}/{n}) does not lie in Q(2cos(pi/{self.N}))")
        j = k2 * (self.N // n2)
        v_prev, v_cur = self.scalar(2), self.generator
        for _ in range(j - 1):
            v_prev, v_cur = v_cur, self.generator * v_cur - v_prev
        return v_cur if j >= 1 else v_prev

    # -- embedding --------------------------------------------------------

    def enclosure(self):
        """Current rational enclosure (lo, hi) of the embedded generator."""
        if self.degree == 1:
            c = Fraction(-self.minimal_polynomial[0])
            return (c - 1, c + 1)
        return self._enc

    def _count_roots(self, a: Fraction, b: Fraction) -> int:
        return _variations(self._sturm, a) - _variations(self._sturm, b)

    def _isolate_largest_root(self):
        lo, hi = Fraction(-3), Fraction(3)
        while self._count_roots(lo, hi) > 1:
            mid = (lo + hi) / 2
            if self._count_roots(mid, hi) >= 1:
                lo = mid
            else:
                hi = mid
        s_lo = _sgn(_frac_poly_eval(self._mp_frac, lo))
        s_hi = _sgn(_frac_poly_eval(self._mp_frac, hi))
        if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
            raise InternalInvariantError("failed to isolate the largest root")
        return (lo, hi)

    def refine_enclosure(self) -> None:
        """Halve the root enclosure, keeping the root strictly inside."""
        lo, hi = self._enc
        mid = (lo + hi) / 2
        smid = _sgn(_frac_poly_eval(self._mp_frac, mid))
        if smid == 0:
            raise InternalInvariantError("rational root of an irreducible minimal polynomial")
        if smid == self._sign_hi:
            self._enc = (lo, mid)
        else:
            self._enc = (mid, hi)

    def __repr__(self):
        return f"FieldContext(N={self.N}, degree={self.degree})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.N == self.N

    def __hash__(self):
        return hash(("FieldContext", self.N))


@lru_cache(maxsize=None)
def _context_for_conductor(N: int) -> FieldContext:
    return FieldContext(N)


def validate_coxeter_matrix(matrix) -> list[list[int | None]]:
    """Check shape, symmetry, diagonal 1 and entries in {2,3,...} | {INF}."""
    if not isinstance(matrix, (list, tuple)) or not matrix:
        raise InvalidInputError("Coxeter matrix must be a nonempty square matrix")
    n = len(matrix)
    rows = []
    for row in matrix:
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise InvalidInputError("Coxeter matrix must be square")
        rows.append(list(row))
    for i in range(n):
        if rows[i][i] != 1:
            raise InvalidInputError("Coxeter matrix diagonal entries must be 1")
        for j in range(n):
            e = rows[i][j]
            if e != rows[j][i]:
                raise InvalidInputError("Coxeter matrix must be symmetric")
            if i != j and e is not INF and (not isinstance(e, int) or e < 2):
                raise InvalidInputError(
                    "off-diagonal entries must be integers >= 2 or infinity")
    return rows


def field_context(coxeter_matrix) -> FieldContext:
    """Smallest real cyclotomic context containing cos(pi/m_st) for all finite m_st.

    The conductor is N = 2*lcm of the finite entries >= 3, and N = 2 when
    there are none (all cosines rational).
    """
    rows = validate_coxeter_matrix(coxeter_matrix)
    l = 1
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            m = rows[i][j]
            if m is not INF and m >= 3:
                l = l * m // gcd(l, m)
    return _context_for_conductor(2 * l)


# --------------------------------------------------------------------------
# field elements

class FieldElement:
    """An element of Q(c) in canonical form: a coefficient vector of length
    deg(minpoly), equality being coefficient-vector equality."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: tuple):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- ring structure ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx.N != self.ctx.N:
                raise InvalidInputError("field elements from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.ctx,
                            tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.ctx,
                            tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ctx.zero
            return FieldElement(self.ctx, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.ctx.degree
        if d == 1:
            return FieldElement(self.ctx, (self.coeffs[0] * o.coeffs[0],))
        conv = [_F0] * (2 * d - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(o.coeffs):
                    if bj:
                        conv[i + j] += ai * bj
        res = conv[:d]
        red = self.ctx._reduction
        for k in range(2 * d - 2, d - 1, -1):
            ck = conv[k]
            if ck:
                row = red[k - d]
                for i in range(d):
                    ri = row[i]
                    if ri:
                        res[i] += ck * ri
        return FieldElement(self.ctx, tuple(res))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        d = self.ctx.degree
        if d == 1:
            return FieldElement(self.ctx, (1 / self.coeffs[0],))
        # extended Euclid in Q[x] against the minimal polynomial
        r0 = list(self.ctx._mp_frac)
        r1 = _trim([Fraction(a) for a in self.coeffs])
        s0, s1 = [], [_F1]
        while len(r1) > 1:
            q = [_F0] * (len(r0) - len(r1) + 1) if len(r0) >= len(r1) else []
            rem = list(r0)
            lead = r1[-1]
            while len(rem) >= len(r1):
                f = rem[-1] / lead
                q[len(rem) - len(r1)] = f
                if f:
                    for j in range(len(r1)):
                        rem[len(rem) - len(r1) + j] -= f * r1[j]
                rem.pop()
                while rem and rem[-1] == 0:
                    rem.pop()
            # s_next = s0 - q * s1
            qs1 = [_F0] * (len(q) + len(s1) - 1) if s1 and q else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        if sj:
                            qs1[i + j] += qi * sj
            s_next = [_F0] * max(len(s0), len(qs1))
            for i, v in enumerate(s0):
                s_next[i] += v
            for i, v in enumerate(qs1):
                s_next[i] -= v
            r0, r1 = r1, rem
            s0, s1 = s1, _trim(s_next)
        if not r1:
            raise InternalInvariantError("gcd with an irreducible polynomial collapsed")
        g = r1[0]
        inv = [c / g for c in s1]
        return self.ctx.element(inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return FieldElement(self.ctx, tuple(a / f for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exp: int):
        if exp < 0:
            return self.inverse() ** (-exp)
        result = self.ctx.one
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base if exp > 1 else base
            exp >>= 1
        return result

    # -- comparisons and utilities ----------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx.N == other.ctx.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.N, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInputError("element is irrational")
        return self.coeffs[0]

    def sign(self) -> int:
        """Sign under the fixed real embedding: exact zero test, then
        interval evaluation with enclosure refinement until 0 is excluded."""
        if not self:
            return 0
        nz = [i for i, a in enumerate(self.coeffs) if a]
        if nz == [0]:
            return _sgn(self.coeffs[0])
        if self.ctx.degree == 1:
            return _sgn(self.coeffs[0])
        while True:
            lo, hi = self.ctx._enc
            vlo, vhi = _eval_interval(self.coeffs, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            self.ctx.refine_enclosure()

    def __str__(self):
        terms = []
        for i in range(self.ctx.degree - 1, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            if i == 0:
                mono = ""
            elif i == 1:
                mono = "c"
            else:
                mono = f"c^{i}"
            if mono:
                if a == 1:
                    body = mono
                elif a == -1:
                    body = f"-{mono}"
                else:
                    body = f"{a}*{mono}"
            else:
                body = str(a)
            terms.append(body)
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"FieldElement({self}, N={self.ctx.N})"


# --------------------------------------------------------------------------
# derived quantities

def cos_fraction(k: int, n: int, ctx: FieldContext) -> FieldElement:
    """cos(k*pi/n) exactly, via the Chebyshev relation at the generator."""
    return ctx.two_cos(k, n) / 2


def qnum(n: int, m: int, ctx: FieldContext) -> FieldElement:
    """Gauss q-number [n] specialised at zeta = e^(i*pi/m).

    Defined by the recurrence [2][n] = [n+1] + [n-1] with [0] = 0, [1] = 1
    and [2] = 2cos(pi/m); extended to negative n by [-n] = -[n].
    """
    if m < 2:
        raise InvalidInputError("q-number order m must be at least 2")
    if n < 0:
        return -qnum(-n, m, ctx)
    two_cos = ctx.two_cos(1, m)
    prev, cur = ctx.zero, ctx.one
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, two_cos * cur - prev
    return cur


def sign(x: FieldElement) -> int:
    """Sign oracle: -1, 0 or +1 under the fixed embedding."""
    return x.sign()
