"""Isomorphism-class labels for non-supercuspidal mod-p representations of U(1,1).

Representations never appear as vector spaces here.  An irreducible
non-supercuspidal representation is one of three labels

    Character(k)        the character omega^k o det,           0 <= k <= p
    Special(k)          (omega^k o det) tensor Steinberg,      0 <= k <= p
    PrincipalSeries(chi)  Ind_B^G(chi) for chi not extending to G

and a semisimple representation is a sorted multiset of labels.  Characters
of the torus are ``mu_lambda omega^r`` with r mod p^2-1 and lambda in the
session field F_{p^f}.
"""
from __future__ import annotations

import ast
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from .arith import FieldElem, PrimeCtx
from .errors import DomainError


@dataclass(frozen=True)
class TChar:
    """Smooth character mu_lambda * omega^r of the diagonal torus."""

    r: int
    lam: FieldElem

    def __post_init__(self):
        if self.lam.is_zero():
            raise DomainError("lambda must be nonzero")
        object.__setattr__(self, "r", self.r % self.ctx.N)

    @property
    def ctx(self) -> PrimeCtx:
        return self.lam.ctx

    def to_json(self) -> dict:
        return {"r": self.r, "lambda": self.lam.to_json()}


@dataclass(frozen=True)
class Character:
    k: int

    def key(self):
        return (0, self.k, ())

    def to_json(self) -> dict:
        return {"type": "character", "k": self.k}


@dataclass(frozen=True)
class Special:
    k: int

    def key(self):
        return (1, self.k, ())

    def to_json(self) -> dict:
        return {"type": "special", "k": self.k}


@dataclass(frozen=True)
class PrincipalSeries:
    chi: TChar

    def key(self):
        return (2, self.chi.r, self.chi.lam.coeffs)

    def to_json(self) -> dict:
        return {"type": "ps", "r": self.chi.r, "lambda": self.chi.lam.to_json()}


NonSCFactor = Union[Character, Special, PrincipalSeries]


def ps(r: int, lam: FieldElem) -> PrincipalSeries:
    """Principal-series label; refuses characters that extend to G."""
    chi = TChar(r, lam)
    if extends_to_G(chi) is not None:
        raise DomainError(f"Ind({chi}) is reducible; use Character/Special labels")
    return PrincipalSeries(chi)


@dataclass(frozen=True)
class Semisimple:
    """A multiset of factor labels, kept sorted so that == is isomorphism."""

    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=lambda f: f.key())))

    def __add__(self, other: Semisimple) -> Semisimple:
        return Semisimple(self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def multiplicities(self) -> Counter:
        return Counter(self.factors)

    def to_json(self) -> list:
        return [f.to_json() for f in self.factors]


# ---------------------------------------------------------------------------
# characters of T and G


def restrict_det_char(k: int, ctx: PrimeCtx) -> TChar:
    """Restriction of omega^k o det to the torus."""
    return TChar(k * (1 - ctx.p), ctx.one)


def extends_to_G(chi: TChar) -> int | None:
    """The index k with chi = (omega^k o det)|_T, or None if chi does not extend."""
    p = chi.ctx.p
    if chi.lam != 1 or chi.r % (p - 1):
        return None
    m = chi.r // (p - 1)
    if m > p:
        return None
    return (-m) % (p + 1)


@dataclass(frozen=True)
class Irreducible:
    pass


@dataclass(frozen=True)
class ReducibleLength2:
    sub: Character
    quotient: Special


def induced_structure(chi: TChar) -> Irreducible | ReducibleLength2:
    k = extends_to_G(chi)
    if k is None:
        return Irreducible()
    return ReducibleLength2(Character(k), Special(k))


def induced_ss(chi: TChar) -> Semisimple:
    """Semisimplification of Ind_B^G(chi)."""
    st = induced_structure(chi)
    if isinstance(st, ReducibleLength2):
        return Semisimple((st.sub, st.quotient))
    return Semisimple((PrincipalSeries(chi),))


def twist_factor(F: NonSCFactor, k: int, ctx: PrimeCtx) -> NonSCFactor:
    """Tensor a factor with omega^k o det."""
    p = ctx.p
    if isinstance(F, Character):
        return Character((F.k + k) % (p + 1))
    if isinstance(F, Special):
        return Special((F.k + k) % (p + 1))
    return PrincipalSeries(TChar(F.chi.r + k * (1 - p), F.chi.lam))


def twist(S: Semisimple, k: int, ctx: PrimeCtx) -> Semisimple:
    return Semisimple(tuple(twist_factor(F, k, ctx) for F in S))


def _check_r(r: int, ctx: PrimeCtx):
    if not 0 <= r <= ctx.p - 1:
        raise DomainError(f"r={r} not in [0, {ctx.p - 1}]")


def _check_lam(lam: FieldElem, ctx: PrimeCtx):
    if lam.ctx != ctx:
        raise DomainError("lambda lives in a different field")
    if lam.is_zero():
        raise DomainError("lambda must be nonzero")


def pi_ss(r: int, lam: FieldElem, ctx: PrimeCtx) -> Semisimple:
    """Semisimplification of Ind(mu_{lambda^-1} omega^{-pr}), for 0 <= r <= p-1."""
    _check_r(r, ctx)
    _check_lam(lam, ctx)
    return induced_ss(TChar(-ctx.p * r, lam.inverse()))


@dataclass(frozen=True)
class PacketIndex:
    r: int
    lam: FieldElem
    k: int

    def validate(self, ctx: PrimeCtx) -> PacketIndex:
        _check_r(self.r, ctx)
        _check_lam(self.lam, ctx)
        if not 0 <= self.k <= ctx.p:
            raise DomainError(f"k={self.k} not in [0, {ctx.p}]")
        return self

    def to_json(self) -> dict:
        return {"r": self.r, "lambda": self.lam.to_json(), "k": self.k}


def packet_base(r: int, lam: FieldElem, ctx: PrimeCtx) -> Semisimple:
    """Pi(r, lambda) before the det-twist."""
    other = pi_ss(ctx.p - 1 - r, lam.inverse(), ctx)
    return pi_ss(r, lam, ctx) + twist(other, r + 1, ctx)


def packet(idx: PacketIndex, ctx: PrimeCtx) -> Semisimple:
    idx.validate(ctx)
    return twist(packet_base(idx.r, idx.lam, ctx), idx.k, ctx)


def packet_indices(ctx: PrimeCtx) -> Iterable[PacketIndex]:
    for lam in ctx.nonzero():
        for r in range(ctx.p):
            for k in range(ctx.p + 1):
                yield PacketIndex(r, lam, k)


def classify_all(ctx: PrimeCtx) -> list[NonSCFactor]:
    """Every irreducible non-supercuspidal label, each exactly once."""
    p = ctx.p
    out: list[NonSCFactor] = [Character(k) for k in range(p + 1)]
    out += [Special(k) for k in range(p + 1)]
    for r in range(ctx.N):
        for lam in ctx.nonzero():
            chi = TChar(r, lam)
            if extends_to_G(chi) is None:
                out.append(PrincipalSeries(chi))
    return out


def expected_class_count(ctx: PrimeCtx) -> tuple[int, int, int]:
    p = ctx.p
    return p + 1, p + 1, ctx.N * (ctx.q - 1) - (p + 1)


# ---------------------------------------------------------------------------
# deformation criteria


class DeformStatus(str, Enum):
    ISOMORPHISM = "Isomorphism"
    OUTSIDE_CRITERION = "OutsideCriterion"


def hss_induction_status(chi: TChar) -> DeformStatus:
    """Whether the induction map on deformation functors is known to be an isomorphism."""
    p = chi.ctx.p
    if (chi.lam != 1 and chi.lam != -1) or (chi.r - 1) % (p - 1):
        return DeformStatus.ISOMORPHISM
    return DeformStatus.OUTSIDE_CRITERION


def hss_norm_oracle(chi: TChar) -> bool:
    # chi differs from omega on the norm group <p^2> x Z_p^x: test the value
    # at p^2 (lambda^2) and every Teichmuller unit of F_p
    p = chi.ctx.p
    if chi.lam * chi.lam != 1:
        return True
    return any(pow(u, chi.r, p) != u for u in range(1, p))


def steinberg_status(k: int, ctx: PrimeCtx) -> DeformStatus:
    return DeformStatus.ISOMORPHISM


# ---------------------------------------------------------------------------
# ring presentations

GEN_KINDS = ("unit", "maximal-ideal", "unrestricted")
BASES = ("O", "O-power-series")

_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Pow,
    ast.USub, ast.UAdd, ast.Name, ast.Load, ast.Constant,
)


def parse_relation(expr: str, names: Iterable[str]) -> ast.Expression:
    """Parse a polynomial relation over the given generator names and ``p``."""
    allowed = set(names) | {"p"}
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as e:
        raise DomainError(f"relation {expr!r} does not parse: {e.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise DomainError(f"relation {expr!r}: unsupported syntax {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in allowed:
            raise DomainError(f"relation {expr!r}: unknown symbol {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise DomainError(f"relation {expr!r}: non-integer constant")
    return tree


@dataclass(frozen=True)
class RingPresentation:
    """Complete local O-algebra given by generators, kinds and relations."""

    base: str
    gens: tuple[tuple[str, str], ...]
    relations: tuple[str, ...] = ()
    extra: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.base not in BASES:
            raise DomainError(f"unknown base {self.base!r}")
        names = [g for g, _ in self.gens]
        if len(set(names)) != len(names):
            raise DomainError("duplicate generator names")
        for name, kind in self.gens:
            if not name.isidentifier() or name == "p":
                raise DomainError(f"bad generator name {name!r}")
            if kind not in GEN_KINDS:
                raise DomainError(f"unknown generator kind {kind!r}")
        for rel in self.relations:
            parse_relation(rel, names)
        if any(x < 0 for x in self.extra):
            raise DomainError("extra variable counts must be nonnegative")

    @property
    def dimension(self) -> int:
        """Generators minus relations (the relative dimension over O)."""
        return len(self.gens) - len(self.relations)

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "gens": [{"name": n, "kind": k} for n, k in self.gens],
            "relations": list(self.relations),
            "extra": list(self.extra),
        }


def universal_char_defring() -> RingPresentation:
    """Universal deformation ring of a character of the compact torus Z_{p^2}^x.

    Its pro-p part 1 + pZ_{p^2} is free of rank 2 over Z_p, so the ring is
    O[[X1, X2]].
    """
    return RingPresentation("O-power-series", (("X1", "unrestricted"), ("X2", "unrestricted")))
