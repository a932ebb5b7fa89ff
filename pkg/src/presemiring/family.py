"""Monotone homomorphisms into the nonnegative rationals, and parameterized
families of them.

A Hom assigns an exact nonnegative rational to each generator; evaluation of a
polynomial element is then determined.  A HomFamily describes a slice of the
spectrum: parameters ranging over rational intervals (possibly open, in which
case they are truncated to a closed box with a configurable floor), generator
values given as ratios of polynomials in the parameters with nonnegative
integer coefficients, and optional polynomial constraints among the
parameters.  All arithmetic is exact; nothing here ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .expr import Expr, Monomial

DEFAULT_FLOOR = Fraction(1, 64)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class Hom:
    """A generator valuation.  f(0) = 0 and f(1) = 1 hold by construction;
    monotonicity against a presentation is checked by spectrum.verify_hom."""

    gens: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.gens) != len(self.values):
            raise FamilyError("one value per generator required")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise FamilyError("homomorphism values must be nonnegative")

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.gens, self.values))

    def eval(self, x: Expr) -> Fraction:
        if x.gens != self.gens:
            raise FamilyError(f"generator mismatch: {x.gens} vs {self.gens}")
        return Fraction(x.eval_at(self.as_dict()))

    def describe(self) -> str:
        if not self.gens:
            return "f = id"
        return ", ".join(f"f({g}) = {v}" for g, v in zip(self.gens, self.values))


@dataclass(frozen=True)
class Interval:
    """A rational interval with independently open/closed endpoints."""

    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open)):
            raise FamilyError(f"empty interval {self}")

    def effective(self, floor: Fraction) -> tuple[Fraction, Fraction]:
        """Closed truncation: open endpoints move inward by the floor."""
        lo = self.lo + floor if self.lo_open else self.lo
        hi = self.hi - floor if self.hi_open else self.hi
        if lo > hi:
            raise FamilyError(f"truncation floor {floor} empties {self}")
        return (lo, hi)

    def __str__(self) -> str:
        lo_b = "(" if self.lo_open else "["
        hi_b = ")" if self.hi_open else "]"
        return f"{lo_b}{self.lo}, {self.hi}{hi_b}"


def _mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class RatFun:
    """A ratio of polynomials with nonnegative integer coefficients.

    Canonicalized on construction: the integer content and any monomial factor
    common to numerator and denominator are cancelled (full polynomial gcd is
    deliberately not attempted; the common-factor cancellation is enough to
    recognize the Laurent-monomial case the boundedness analysis keys on).
    """

    num: Expr
    den: Expr

    def __post_init__(self):
        if self.den.is_zero():
            raise FamilyError("zero denominator")
        num, den = self.num, self.den
        if not num.is_zero():
            content = 0
            for _, c in num.terms:
                content = gcd(content, c)
            for _, c in den.terms:
                content = gcd(content, c)
            common = num.monomials()[-1]
            for m in num.monomials():
                common = _mono_gcd(common, m)
            for m in den.monomials():
                common = _mono_gcd(common, m)
            if content > 1 or any(common):
                strip = lambda e: Expr(
                    e.gens,
                    {tuple(x - y for x, y in zip(m, common)): c // content for m, c in e.terms},
                )
                num, den = strip(num), strip(den)
        den_nat = den.as_nat()
        if num.is_zero() and den_nat != 1:
            den = Expr.one(den.gens)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def poly(p: Expr) -> "RatFun":
        return RatFun(p, Expr.one(p.gens))

    def eval(self, point: dict[str, Fraction]) -> Fraction:
        den = Fraction(self.den.eval_at(point))
        if den == 0:
            raise FamilyError(f"denominator {self.den} vanishes at {point}")
        return Fraction(self.num.eval_at(point)) / den

    def laurent_exponents(self) -> dict[str, int] | None:
        """If this is a single monomial ratio, its net exponent per parameter."""
        if len(self.num.terms) != 1 or len(self.den.terms) != 1:
            return None
        (mn, _), (md, _) = self.num.terms[0], self.den.terms[0]
        return {g: a - b for g, a, b in zip(self.num.gens, mn, md)}

    def _coerce(self, other) -> "RatFun | None":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, int) and other >= 0:
            return RatFun(Expr.nat(self.num.gens, other), Expr.one(self.num.gens))
        return None

    def __mul__(self, other) -> "RatFun":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other) -> "RatFun":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __pow__(self, n: int) -> "RatFun":
        return RatFun(self.num**n, self.den**n)

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class HomFamily:
    """A parameterized slice of monotone homomorphisms.

    `params` and `intervals` are aligned; `values` is aligned with `gens`.
    Constraints are pairs (lhs, rhs) of polynomials over the parameters,
    read as lhs <= rhs.  Open interval endpoints are truncated to a closed
    box by `floor` for separation searches; boundedness analysis still sees
    the declared open endpoints.
    """

    gens: tuple[str, ...]
    params: tuple[str, ...]
    intervals: tuple[Interval, ...]
    values: tuple[RatFun, ...]
    constraints: tuple[tuple[Expr, Expr], ...] = ()
    floor: Fraction = DEFAULT_FLOOR

    def __post_init__(self):
        if len(self.params) != len(self.intervals):
            raise FamilyError("one interval per parameter required")
        if len(self.gens) != len(self.values):
            raise FamilyError("one value per generator required")
        if len(set(self.params)) != len(self.params):
            raise FamilyError("duplicate parameter name")
        for rf in self.values:
            if rf.num.gens != self.params or rf.den.gens != self.params:
                raise FamilyError("family values must be functions of the declared parameters")
        for lhs, rhs in self.constraints:
            if lhs.gens != self.params or rhs.gens != self.params:
                raise FamilyError("constraints must be polynomials in the declared parameters")

    def effective_box(self) -> list[tuple[Fraction, Fraction]]:
        return [iv.effective(self.floor) for iv in self.intervals]

    def satisfies_constraints(self, point: dict[str, Fraction]) -> bool:
        return all(
            Fraction(lhs.eval_at(point)) <= Fraction(rhs.eval_at(point))
            for lhs, rhs in self.constraints
        )

    def in_box(self, point: dict[str, Fraction]) -> bool:
        return all(
            lo <= point[p] <= hi
            for p, (lo, hi) in zip(self.params, self.effective_box())
        )

    def feasible(self, point: dict[str, Fraction]) -> bool:
        return self.in_box(point) and self.satisfies_constraints(point)

    def at(self, point: dict[str, Fraction]) -> Hom:
        """Instantiate the homomorphism at a parameter point (not feasibility-checked)."""
        pt = {p: Fraction(v) for p, v in point.items()}
        missing = set(self.params) - set(pt)
        if missing:
            raise FamilyError(f"missing parameter values: {sorted(missing)}")
        return Hom(self.gens, tuple(rf.eval(pt) for rf in self.values))

    def grid(self, steps: int) -> list[dict[str, Fraction]]:
        """The uniform rational grid over the effective box, endpoints included,
        in lexicographic order.  `steps` is the number of points per axis."""
        if steps < 2:
            steps = 2
        axes: list[list[Fraction]] = []
        for lo, hi in self.effective_box():
            if lo == hi:
                axes.append([lo])
            else:
                axes.append([lo + (hi - lo) * k / (steps - 1) for k in range(steps)])
        points: list[dict[str, Fraction]] = []

        def rec(i: int, acc: list[Fraction]):
            if i == len(axes):
                points.append(dict(zip(self.params, acc)))
                return
            for v in axes[i]:
                rec(i + 1, acc + [v])

        rec(0, [])
        return points
