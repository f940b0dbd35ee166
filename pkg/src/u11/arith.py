"""Exact arithmetic in the finite rings used throughout the package.

Three layers:

* ``LocalRing`` -- Artinian local rings ``(Z/p^m)[x]/(g)``; elements are plain
  tuples of ``deg g`` residues mod ``p^m`` (little-endian).
* ``PrimeCtx`` / ``FieldElem`` -- the coefficient field ``F_{p^f}`` that holds
  every lambda, with operator overloading.
* ``VPoly`` / ``Mat2`` -- polynomials in ``v`` over a ``LocalRing`` and 2x2
  matrices over either of the above.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import CapacityError, DomainError, RingMismatchError, UnitError

Elem = tuple  # element of a LocalRing

# enumeration bounds for the residue-structure search
_MAX_POLY_ENUM = 200_000
_MAX_RING_ENUM = 1_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def p_digits(x: int, p: int) -> tuple[int, int]:
    """Base-p digits ``(a0, a1)`` of ``0 <= x <= p^2 - 2``."""
    if not 0 <= x <= p * p - 2:
        raise DomainError(f"p_digits: {x} not in [0, {p * p - 2}]")
    return x % p, x // p


# ---------------------------------------------------------------------------
# polynomial helpers over Z/n, little-endian lists of ints


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, n):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % n
    return _trim([c % n for c in out])


def _psub(a, b, n):
    return _padd(a, [(-c) % n for c in b], n)


def _pmul(a, b, n):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % n for c in out])


def _pdivmod(a, g, n):
    """Division by ``g`` whose leading coefficient is invertible mod n."""
    a = _trim([c % n for c in a])
    g = _trim([c % n for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lc = pow(g[-1], -1, n)
    q = [0] * max(len(a) - len(g) + 1, 0)
    a = list(a)
    while len(a) >= len(g):
        coef = a[-1] * inv_lc % n
        shift = len(a) - len(g)
        q[shift] = coef
        for i, c in enumerate(g):
            a[shift + i] = (a[shift + i] - coef * c) % n
        _trim(a)
    return _trim(q), a


def _ppow(a, e, n):
    out = [1]
    for _ in range(e):
        out = _pmul(out, a, n)
    return out


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _monic_polys(deg: int, p: int) -> Iterator[list[int]]:
    """Monic polynomials of exact degree ``deg``, lexicographic in (c0, c1, ...)."""
    if p**deg > _MAX_POLY_ENUM:
        raise CapacityError(f"{p}^{deg} monic polynomials exceed enumeration bound")
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    g = _trim([c % p for c in poly])
    deg = len(g) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for h in _monic_polys(d, p):
            if not _pdivmod(g, h, p)[1]:
                return False
    return True


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree f over F_p."""
    for h in _monic_polys(f, p):
        if is_irreducible_mod_p(h, p):
            return tuple(h)
    raise AssertionError("an irreducible polynomial of every degree exists")


def _radical_power(gbar: list[int], p: int) -> tuple[list[int], int]:
    """Return ``(h, e)`` with ``gbar = h^e`` and h monic irreducible, else raise."""
    deg = len(gbar) - 1
    if is_irreducible_mod_p(gbar, p):
        return gbar, 1
    for d in range(1, deg):
        if deg % d:
            continue
        for h in _monic_polys(d, p):
            if _ppow(h, deg // d, p) == gbar and is_irreducible_mod_p(h, p):
                return h, deg // d
    raise DomainError(f"modulus {gbar} mod {p} is not a power of one irreducible; ring is not local")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalRing:
    """The finite local ring ``(Z/p^m)[x]/(modulus)``.

    ``modulus`` is monic, little-endian.  Construction checks that the modulus
    reduces mod p to a power of a single irreducible ``h``; the residue field
    is then ``F_p[x]/(h)``.
    """

    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.m < 1:
            raise DomainError("nilpotency exponent m must be >= 1")
        n = self.p**self.m
        mod = tuple(int(c) % n for c in self.modulus)
        if len(mod) < 2 or mod[-1] != 1:
            raise DomainError(f"modulus {list(self.modulus)} must be monic of degree >= 1")
        object.__setattr__(self, "modulus", mod)
        h, e = _radical_power(_trim([c % self.p for c in mod]), self.p)
        object.__setattr__(self, "_res_poly", tuple(h))
        object.__setattr__(self, "_ram", e)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", len(mod) - 1)
        object.__setattr__(self, "zero", (0,) * (len(mod) - 1))
        object.__setattr__(self, "one", (1,) + (0,) * (len(mod) - 2))
        object.__setattr__(self, "_inv_cache", {})

    @property
    def size(self) -> int:
        return self.n**self.degree

    @property
    def residue_degree(self) -> int:
        return len(self._res_poly) - 1

    @property
    def ramification(self) -> int:
        return self._ram

    @property
    def is_field(self) -> bool:
        return self.m == 1 and self._ram == 1

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_descriptor(cls, d: dict) -> LocalRing:
        return cls(int(d["p"]), int(d["m"]), tuple(int(c) for c in d["modulus"]))

    @classmethod
    def galois_ring(cls, p: int, m: int, f: int) -> LocalRing:
        """GR(p^m, f) via the smallest irreducible of degree f."""
        return cls(p, m, smallest_irreducible(p, f))

    # -- elements
    def elem(self, x) -> Elem:
        if type(x) is tuple and len(x) == self.degree and all(0 <= c < self.n for c in x):
            return x
        if isinstance(x, int):
            return (x % self.n,) + (0,) * (self.degree - 1)
        x = [int(c) for c in x]
        if len(x) > self.degree:
            _, x = _pdivmod(x, self.modulus, self.n)
        x = [c % self.n for c in x]
        return tuple(x) + (0,) * (self.degree - len(x))

    @property
    def gen(self) -> Elem:
        """Class of x."""
        return self.elem([0, 1])

    @property
    def max_ideal_gen(self) -> Elem:
        """p when unramified, otherwise h(x) (for Eisenstein moduli this is x)."""
        if self._ram == 1:
            return self.elem(self.p)
        return self.elem(list(self._res_poly))

    def add(self, x: Elem, y: Elem) -> Elem:
        n = self.n
        return tuple((a + b) % n for a, b in zip(x, y))

    def sub(self, x: Elem, y: Elem) -> Elem:
        n = self.n
        return tuple((a - b) % n for a, b in zip(x, y))

    def neg(self, x: Elem) -> Elem:
        n = self.n
        return tuple((-a) % n for a in x)

    def mul(self, x: Elem, y: Elem) -> Elem:
        n, d, g = self.n, self.degree, self.modulus
        if d == 1:
            return (x[0] * y[0] % n,)
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % n
            if c:
                for i in range(d):
                    prod[k - d + i] -= c * g[i]
        return tuple(c % n for c in prod[:d])

    def pow(self, x: Elem, e: int) -> Elem:
        if e < 0:
            return self.pow(self.inverse(x), -e)
        out, base = self.one, x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def residue(self, x: Elem) -> tuple[int, ...]:
        """Image of x in the residue field, as a coefficient tuple."""
        h = self._res_poly
        if len(h) == 2 and h[0] == 0:
            return (x[0] % self.p,)
        if len(h) == len(self.modulus):
            return tuple(c % self.p for c in x)
        _, r = _pdivmod([c % self.p for c in x], h, self.p)
        return tuple(r) + (0,) * (len(h) - 1 - len(r))

    def is_unit(self, x: Elem) -> bool:
        return any(self.residue(x))

    def inverse(self, x: Elem) -> Elem:
        cache = self._inv_cache
        if x not in cache:
            cache[x] = self._inverse(x)
        return cache[x]

    def _inverse(self, x: Elem) -> Elem:
        # invert in the residue field, then Newton-lift through the nilpotent ideal
        res = _trim(list(self.residue(x)))
        if not res:
            raise UnitError(f"{x} is not a unit in {self.descriptor()}")
        p, h = self.p, list(self._res_poly)
        s0, s1, r0, r1 = [1], [], res, h
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        # r0 is a nonzero constant here since h is irreducible
        c = pow(r0[0], -1, p)
        y = self.elem([a * c for a in s0])
        two = self.elem(2)
        for _ in range(64):
            xy = self.mul(x, y)
            if xy == self.one:
                return y
            y = self.mul(y, self.sub(two, xy))
        raise AssertionError("Newton lifting did not converge")

    def residue_field(self) -> LocalRing:
        return LocalRing(self.p, 1, self._res_poly)

    def to_residue_field(self, x: Elem) -> Elem:
        return self.residue(x)

    def elements(self) -> Iterator[Elem]:
        if self.size > _MAX_RING_ENUM:
            raise CapacityError(f"ring of size {self.size} too large to enumerate")
        return itertools.product(range(self.n), repeat=self.degree)

    @cached_property
    def max_ideal(self) -> tuple[Elem, ...]:
        return tuple(x for x in self.elements() if not self.is_unit(x))

    def random_elem(self, rng: random.Random) -> Elem:
        return tuple(rng.randrange(self.n) for _ in range(self.degree))

    def random_unit(self, rng: random.Random) -> Elem:
        while True:
            x = self.random_elem(rng)
            if self.is_unit(x):
                return x

    def random_nonunit(self, rng: random.Random) -> Elem:
        return rng.choice(self.max_ideal)

    def fmt(self, x: Elem) -> str:
        terms = []
        for i, c in enumerate(x):
            if c:
                terms.append(str(c) if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}"))
        return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeCtx:
    """A prime p together with the coefficient field F_{p^f} for lambda.

    ``modulus`` may be omitted; the lexicographically smallest irreducible
    polynomial of degree f is used then.
    """

    p: int
    f: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.f < 1:
            raise DomainError("f must be >= 1")
        if self.modulus is None:
            object.__setattr__(self, "modulus", smallest_irreducible(self.p, self.f))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.f + 1 or mod[-1] != 1:
                raise DomainError(f"modulus must be monic of degree f={self.f}")
            if not is_irreducible_mod_p(mod, self.p):
                raise DomainError(f"modulus {list(mod)} is reducible mod {self.p}")
            object.__setattr__(self, "modulus", mod)

    @property
    def N(self) -> int:
        return self.p * self.p - 1

    @property
    def q(self) -> int:
        return self.p**self.f

    @cached_property
    def ring(self) -> LocalRing:
        return LocalRing(self.p, 1, self.modulus)

    def elem(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.ctx != self:
                raise RingMismatchError("element from a different field")
            return x
        return FieldElem(self, self.ring.elem(x))

    @property
    def zero(self) -> FieldElem:
        return self.elem(0)

    @property
    def one(self) -> FieldElem:
        return self.elem(1)

    def elements(self) -> list[FieldElem]:
        """All field elements, lexicographic in the coefficient sequence."""
        return [FieldElem(self, c) for c in itertools.product(range(self.p), repeat=self.f)]

    def nonzero(self) -> list[FieldElem]:
        return [x for x in self.elements() if not x.is_zero()]

    def lambda_index(self, i: int) -> FieldElem:
        units = self.nonzero()
        if not 0 <= i < len(units):
            raise DomainError(f"lambda index {i} not in [0, {len(units) - 1}]")
        return units[i]

    def code(self, x: FieldElem) -> int:
        return sum(c * self.p**i for i, c in enumerate(x.coeffs))

    def from_code(self, k: int) -> FieldElem:
        return FieldElem(self, tuple((k // self.p**i) % self.p for i in range(self.f)))

    @cached_property
    def tables(self):
        """numpy add/mul/neg/inv lookup tables indexed by ``code``."""
        import numpy as np

        q = self.q
        if q > 4096:
            raise CapacityError(f"field of size {q} too large for lookup tables")
        els = [self.from_code(k) for k in range(q)]
        add = np.array([[self.code(a + b) for b in els] for a in els], dtype=np.int64)
        mul = np.array([[self.code(a * b) for b in els] for a in els], dtype=np.int64)
        neg = np.array([self.code(-a) for a in els], dtype=np.int64)
        inv = np.array([0] + [self.code(a.inverse()) for a in els[1:]], dtype=np.int64)
        return {"add": add, "mul": mul, "neg": neg, "inv": inv}

    def describe(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}


@dataclass(frozen=True, eq=False)
class FieldElem:
    ctx: PrimeCtx
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise RingMismatchError("field elements over different fields")
            return other
        if isinstance(other, int):
            return self.ctx.elem(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.ctx, self.ctx.ring.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.ctx, self.ctx.ring.sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.ring.neg(self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.ctx, self.ctx.ring.mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.ring.pow(self.coeffs, e))

    def inverse(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.ring.inverse(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def parent(self):
        return self.ctx

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self):
        if self.ctx.f == 1:
            return f"F{self.ctx.p}({self.coeffs[0]})"
        return f"F{self.ctx.q}{self.coeffs}"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VPoly:
    """Polynomial in v over a LocalRing; coefficients lowest degree first."""

    ring: LocalRing
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [self.ring.elem(c) for c in self.coeffs]
        zero = self.ring.zero
        while cs and cs[-1] == zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _raw(cls, ring: LocalRing, cs: list) -> VPoly:
        # cs already holds reduced ring elements; only trim
        zero = ring.zero
        while cs and cs[-1] == zero:
            cs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "coeffs", tuple(cs))
        return obj

    @classmethod
    def const(cls, ring: LocalRing, c) -> VPoly:
        return cls(ring, (ring.elem(c),))

    @classmethod
    def v(cls, ring: LocalRing) -> VPoly:
        return cls(ring, (ring.zero, ring.one))

    @classmethod
    def v_plus_p(cls, ring: LocalRing) -> VPoly:
        return cls(ring, (ring.elem(ring.p), ring.one))

    @property
    def parent(self):
        return self.ring

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Elem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def _lift(self, other) -> VPoly:
        if isinstance(other, VPoly):
            if other.ring != self.ring:
                raise RingMismatchError("polynomials over different rings")
            return other
        if isinstance(other, (int, tuple)):
            return VPoly.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        R = self.ring
        k = max(len(self.coeffs), len(other.coeffs))
        return VPoly._raw(R, [R.add(self.coeff(i), other.coeff(i)) for i in range(k)])

    __radd__ = __add__

    def __neg__(self):
        return VPoly._raw(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        R = self.ring
        if self.is_zero() or other.is_zero():
            return VPoly._raw(R, [])
        out = [R.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return VPoly._raw(R, out)

    __rmul__ = __mul__

    def divmod_monic(self, g: VPoly) -> tuple[VPoly, VPoly]:
        """Exact division by a polynomial with unit leading coefficient."""
        R = self.ring
        g = self._lift(g)
        lc_inv = R.inverse(g.coeffs[-1])
        rem = list(self.coeffs)
        quot = [R.zero] * max(len(rem) - len(g.coeffs) + 1, 0)
        while len(rem) >= len(g.coeffs) and rem:
            c = R.mul(rem[-1], lc_inv)
            shift = len(rem) - len(g.coeffs)
            quot[shift] = c
            for i, b in enumerate(g.coeffs):
                rem[shift + i] = R.sub(rem[shift + i], R.mul(c, b))
            rem.pop()
        return VPoly._raw(R, quot), VPoly._raw(R, rem)

    def map_coeffs(self, ring: LocalRing, fn) -> VPoly:
        return VPoly(ring, tuple(fn(c) for c in self.coeffs))

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.coeffs]

    def __repr__(self):
        R = self.ring
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == R.zero:
                continue
            s = R.fmt(c)
            if i:
                s = f"({s})" + ("v" if i == 1 else f"v^{i}")
            terms.append(s)
        return " + ".join(terms) or "0"


def _parent(x):
    try:
        return x.parent
    except AttributeError:
        raise RingMismatchError(f"unsupported matrix entry {x!r}") from None


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix ``[[a, b], [c, d]]`` over VPoly or FieldElem entries."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        parents = {_parent(x) for x in self.entries()}
        if len(parents) != 1:
            raise RingMismatchError("matrix entries over different coefficient rings")

    @classmethod
    def from_rows(cls, rows) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def diag(cls, x, y, zero) -> Mat2:
        return cls(x, zero, zero, y)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def parent(self):
        return _parent(self.a)

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> Mat2:
        return Mat2(self.a, self.c, self.b, self.d)

    def scale(self, x) -> Mat2:
        return Mat2(*(x * e for e in self.entries()))

    def __matmul__(self, o: Mat2) -> Mat2:
        if not isinstance(o, Mat2):
            return NotImplemented
        if o.parent != self.parent:
            raise RingMismatchError("matrices over different coefficient rings")
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(*(x + y for x, y in zip(self.entries(), o.entries())))

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(*(x - y for x, y in zip(self.entries(), o.entries())))

    def __neg__(self) -> Mat2:
        return Mat2(*(-x for x in self.entries()))

    def map(self, fn) -> Mat2:
        return Mat2(*(fn(x) for x in self.entries()))

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.rows()]


def swap_matrix(zero, one) -> Mat2:
    """The antidiagonal ``s = [[0, 1], [1, 0]]``."""
    return Mat2(zero, one, one, zero)


def vpoly_mat(ring: LocalRing, rows) -> Mat2:
    """Build a Mat2 of VPolys from nested lists of coefficient lists or VPolys."""

    def conv(x):
        if isinstance(x, VPoly):
            return x
        if isinstance(x, int):
            return VPoly.const(ring, x)
        return VPoly(ring, tuple(ring.elem(c) for c in x))

    return Mat2.from_rows([[conv(x) for x in row] for row in rows])


def field_mat(ctx: PrimeCtx, rows) -> Mat2:
    return Mat2.from_rows([[ctx.elem(x) for x in row] for row in rows])
