"""Canonical elements of the free commutative semiring N[g1, ..., gm].

An element is a finite sum of monomials with positive integer coefficients,
stored as a sorted tuple of (exponent-vector, coefficient) pairs.  Zero is the
empty sum.  Addition and multiplication never cancel, so every element has a
unique canonical form and equality is syntactic equality of the stored terms.

Terms are kept in graded-lexicographic order, leading term first, which makes
the printed form and every iteration over an expression deterministic.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

Monomial = tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_sub(a: Monomial, b: Monomial) -> Monomial | None:
    """Componentwise difference, or None if any exponent would go negative."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_degree(a: Monomial) -> int:
    return sum(a)


def mono_key(a: Monomial) -> tuple[int, Monomial]:
    """Graded-lex sort key (total degree first, then exponents)."""
    return (sum(a), a)


class ExprError(ValueError):
    pass


class Expr:
    """An immutable canonical polynomial over a fixed generator tuple.

    Instances are hashable and totally ordered by ``sort_key`` (an arbitrary
    but deterministic order used for tie-breaking during search; it is NOT the
    semiring preorder, which is decided by the search and certificate
    machinery).
    """

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: tuple[str, ...], terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]]):
        items = terms.items() if isinstance(terms, Mapping) else terms
        width = len(gens)
        cleaned: dict[Monomial, int] = {}
        for mono, coeff in items:
            if len(mono) != width:
                raise ExprError(f"monomial {mono} does not match generators {gens}")
            if coeff < 0 or any(e < 0 for e in mono):
                raise ExprError(f"negative coefficient or exponent in ({mono}, {coeff})")
            if coeff == 0:
                continue
            cleaned[mono] = cleaned.get(mono, 0) + coeff
        object.__setattr__(self, "gens", tuple(gens))
        object.__setattr__(
            self,
            "terms",
            tuple(sorted(cleaned.items(), key=lambda kv: mono_key(kv[0]), reverse=True)),
        )
        object.__setattr__(self, "_hash", hash((self.gens, self.terms)))

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    # ---- constructors ----

    @staticmethod
    def zero(gens: tuple[str, ...]) -> "Expr":
        return Expr(gens, {})

    @staticmethod
    def one(gens: tuple[str, ...]) -> "Expr":
        return Expr.nat(gens, 1)

    @staticmethod
    def nat(gens: tuple[str, ...], n: int) -> "Expr":
        if n < 0:
            raise ExprError("naturals only")
        unit = (0,) * len(gens)
        return Expr(gens, {unit: n} if n else {})

    @staticmethod
    def generator(gens: tuple[str, ...], name: str) -> "Expr":
        try:
            i = gens.index(name)
        except ValueError:
            raise ExprError(f"unknown generator {name!r} (have {gens})") from None
        mono = tuple(1 if j == i else 0 for j in range(len(gens)))
        return Expr(gens, {mono: 1})

    @staticmethod
    def monomial(gens: tuple[str, ...], mono: Monomial, coeff: int = 1) -> "Expr":
        return Expr(gens, {tuple(mono): coeff})

    # ---- ring structure ----

    def _check_gens(self, other: "Expr") -> None:
        if self.gens != other.gens:
            raise ExprError(f"generator mismatch: {self.gens} vs {other.gens}")

    def __add__(self, other: "Expr") -> "Expr":
        self._check_gens(other)
        acc = dict(self.terms)
        for mono, coeff in other.terms:
            acc[mono] = acc.get(mono, 0) + coeff
        return Expr(self.gens, acc)

    def __mul__(self, other: "Expr") -> "Expr":
        self._check_gens(other)
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Expr(self.gens, acc)

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int) or n < 0:
            raise ExprError("exponent must be a nonnegative integer")
        result = Expr.one(self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, q: int) -> "Expr":
        if q < 0:
            raise ExprError("scale factor must be nonnegative")
        return Expr(self.gens, {m: c * q for m, c in self.terms})

    def minus(self, other: "Expr") -> "Expr | None":
        """Coefficientwise difference self - other, or None if not dominated."""
        self._check_gens(other)
        acc = dict(self.terms)
        for mono, coeff in other.terms:
            have = acc.get(mono, 0)
            if have < coeff:
                return None
            if have == coeff:
                del acc[mono]
            else:
                acc[mono] = have - coeff
        return Expr(self.gens, acc)

    def dominates(self, other: "Expr") -> bool:
        """True when every coefficient of other is <= the matching one here."""
        return self.minus(other) is not None

    # ---- queries ----

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.as_nat() == 1

    def as_nat(self) -> int | None:
        """The natural number this expression denotes, or None if non-constant."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and mono_degree(self.terms[0][0]) == 0:
            return self.terms[0][1]
        return None

    def coeff(self, mono: Monomial) -> int:
        for m, c in self.terms:
            if m == mono:
                return c
        return 0

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    def total_degree(self) -> int:
        return mono_degree(self.terms[0][0]) if self.terms else 0

    def max_coeff(self) -> int:
        return max((c for _, c in self.terms), default=0)

    def terms_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def eval_at(self, values):
        """Evaluate at a point; values maps generator name -> number.

        Works for any commutative semiring of Python numbers (Fraction in
        practice).  The empty sum evaluates to 0 and the empty product to 1.
        """
        total = 0
        for mono, coeff in self.terms:
            term = coeff
            for name, e in zip(self.gens, mono):
                if e:
                    term = term * values[name] ** e
            total = total + term
        return total

    # ---- ordering / identity ----

    def sort_key(self):
        return self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and self.gens == other.gens and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    # ---- printing ----

    def _mono_str(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.gens, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.terms:
            body = self._mono_str(mono)
            if not body:
                chunks.append(str(coeff))
            elif coeff == 1:
                chunks.append(body)
            else:
                chunks.append(f"{coeff}*{body}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms)


def normalize(gens: tuple[str, ...], tree) -> Expr:
    """Expand a raw expression tree into canonical form.

    The raw tree is nested tuples: ("num", n), ("gen", name),
    ("add", l, r), ("mul", l, r), ("pow", t, n).  Expansion applies the
    semiring axioms, so e.g. ("pow", x+1, 2) becomes x^2 + 2x + 1 and
    re-normalizing a canonical element is the identity.
    """
    if isinstance(tree, Expr):
        if tree.gens != tuple(gens):
            raise ExprError(f"generator mismatch: {tree.gens} vs {tuple(gens)}")
        return tree
    kind = tree[0]
    if kind == "num":
        return Expr.nat(tuple(gens), tree[1])
    if kind == "gen":
        return Expr.generator(tuple(gens), tree[1])
    if kind == "add":
        return normalize(gens, tree[1]) + normalize(gens, tree[2])
    if kind == "mul":
        return normalize(gens, tree[1]) * normalize(gens, tree[2])
    if kind == "pow":
        return normalize(gens, tree[1]) ** tree[2]
    raise ExprError(f"unknown raw tree node {kind!r}")
