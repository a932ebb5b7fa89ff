"""Finite presentations of preordered semirings.

A presentation lists generators and base inequalities lhs <= rhs between
canonical polynomial elements.  The preorder it presents is the smallest
reflexive transitive relation containing the base relations and 0 <= 1 that
is compatible with addition and multiplication.  Optional sections declare a
candidate power universal element, a multiplicative set (for localization),
a monomial set (for the spectral-point conditions), and a homomorphism
family (for separation searches).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .expr import Expr, Monomial, mono_degree, mono_key
from .family import HomFamily


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    """Limits for certificate search.

    nodes bounds the size (node count) of any certificate the search may
    return, degree and coeff bound the total degree and largest coefficient
    of every intermediate expression the search is allowed to visit.
    """

    nodes: int = 48
    degree: int = 8
    coeff: int = 64

    def __post_init__(self):
        if self.nodes < 1 or self.degree < 0 or self.coeff < 1:
            raise PresentationError(f"degenerate budget {self}")


@dataclass(frozen=True)
class MSet:
    """A set of monomials, given extensionally or by an exponent comparison.

    kind is one of:
      "all"   -- every monomial;
      "list"  -- exactly the listed monomials;
      "exp_le" -- monomials whose exponent of `lo_gen` is <= that of `hi_gen`.
    """

    kind: str
    monomials: tuple[Monomial, ...] = ()
    lo_gen: str | None = None
    hi_gen: str | None = None

    def contains(self, gens: tuple[str, ...], mono: Monomial) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "list":
            return mono in self.monomials
        if self.kind == "exp_le":
            return mono[gens.index(self.lo_gen)] <= mono[gens.index(self.hi_gen)]
        raise PresentationError(f"unknown MSet kind {self.kind!r}")

    def enumerate(self, gens: tuple[str, ...], max_degree: int) -> list[Monomial]:
        """Members up to total degree max_degree, graded-lex ascending."""
        if self.kind == "list":
            return sorted(
                (m for m in self.monomials if mono_degree(m) <= max_degree), key=mono_key
            )
        out = []
        for d in range(max_degree + 1):
            for combo in combinations_with_replacement(range(len(gens)), d):
                mono = [0] * len(gens)
                for i in combo:
                    mono[i] += 1
                m = tuple(mono)
                if self.contains(gens, m):
                    out.append(m)
        return sorted(out, key=mono_key)


@dataclass(frozen=True)
class Presentation:
    gens: tuple[str, ...]
    relations: tuple[tuple[Expr, Expr], ...]
    power_universal: Expr | None = None
    mult_set: tuple[Expr, ...] = ()
    m_set: MSet | None = None
    family: HomFamily | None = None

    def __post_init__(self):
        for lhs, rhs in self.relations:
            if lhs.gens != self.gens or rhs.gens != self.gens:
                raise PresentationError("relation over foreign generators")
        if self.power_universal is not None and self.power_universal.gens != self.gens:
            raise PresentationError("power universal over foreign generators")
        for t in self.mult_set:
            if t.gens != self.gens:
                raise PresentationError("mult_set member over foreign generators")
            if t.is_zero():
                raise PresentationError("mult_set must not contain 0")
        if self.family is not None and self.family.gens != self.gens:
            raise PresentationError("family over foreign generators")

    def zero(self) -> Expr:
        return Expr.zero(self.gens)

    def one(self) -> Expr:
        return Expr.one(self.gens)

    def nat(self, n: int) -> Expr:
        return Expr.nat(self.gens, n)

    def gen(self, name: str) -> Expr:
        return Expr.generator(self.gens, name)

    def with_relations(self, extra: tuple[tuple[Expr, Expr], ...]) -> "Presentation":
        return Presentation(
            self.gens,
            self.relations + tuple(extra),
            self.power_universal,
            self.mult_set,
            self.m_set,
            self.family,
        )
