"""Value domains for the geometric and tropical settings.

All maps in this package are written once against four abstract operations

    oplus   geometric x + y          tropical max(x, y)
    otimes  geometric x * y          tropical x + y
    odiv    geometric x / y          tropical x - y
    hsum    geometric (1/x+1/y)^-1   tropical min(x, y)

together with three constants: ``corner`` (the boundary value at (0,1) and
(1,0)), ``zero`` (the oplus identity, used for all other boundary indices)
and ``one`` (the otimes identity).  Substituting one operation table for the
other turns every birational map here into its piecewise-linear counterpart;
the convergence of the geometric maps to the tropical ones under
eps*log(.(exp(x/eps))) is a tested property, not an assumption.

The geometric arithmetic is written with plain Python operators, so any
value type supporting +, *, / and ordering flows through unchanged: exact
``fractions.Fraction`` (the reference domain for identity checks), ``float``,
``mpmath.mpf`` (for tropicalization limits, where exp(x/eps) overflows
doubles) and the dual numbers used for Jacobians.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

_NEG_INF = float("-inf")


class DomainError(ValueError):
    """Raised when a value is outside its domain or an operation is undefined there."""


class ValueDomain:
    """One of the three value domains; use the module-level singletons."""

    def __init__(self, name: str, tropical: bool, exact: bool):
        self.name = name
        self.is_tropical = tropical
        self.is_geometric = not tropical
        self.is_exact = exact
        if tropical:
            self.corner = 0.0
            self.zero = _NEG_INF
            self.one = 0.0
        elif exact:
            self.corner = Fraction(1, 2)
            self.zero = Fraction(0)
            self.one = Fraction(1)
        else:
            self.corner = 0.5
            self.zero = 0.0
            self.one = 1.0

    def __repr__(self) -> str:
        return f"ValueDomain({self.name!r})"

    # -- the four operations -------------------------------------------------

    def oplus(self, x, y):
        """Geometric sum / tropical max.  The zero element is its identity."""
        if self.is_tropical:
            return x if x >= y else y
        return x + y

    def otimes(self, x, y):
        """Geometric product / tropical sum."""
        if self.is_tropical:
            return x + y
        return x * y

    def odiv(self, x, y):
        """Geometric quotient / tropical difference; the zero element may not divide."""
        if self.is_tropical:
            if y == _NEG_INF:
                raise DomainError("tropical division by -inf")
            return x - y
        try:
            return x / y
        except ZeroDivisionError:
            raise DomainError("geometric division by zero") from None

    def hsum(self, x, y):
        """Geometric harmonic sum xy/(x+y) / tropical min.

        Geometric arguments must be strictly positive: the boundary zero
        reaching an hsum signals a shape-logic bug upstream.
        """
        if self.is_tropical:
            return x if x <= y else y
        if not (x > 0 and y > 0):
            raise DomainError(f"hsum needs positive arguments, got {x!r}, {y!r}")
        return x * y / (x + y)

    # -- entries ---------------------------------------------------------------

    def coerce(self, x) -> Any:
        """Normalize an interior entry, enforcing the domain's invariants.

        Exotic numeric types (dual numbers, mpf) pass through untouched in the
        float domains, so the generic map code can run on them.
        """
        if self.is_tropical:
            if isinstance(x, (int, float)):
                x = float(x)
                if x != x or x == float("inf"):
                    raise DomainError(f"tropical entry must be real or -inf, got {x!r}")
            return x
        if self.is_exact:
            if isinstance(x, float):
                raise DomainError(
                    f"rational domain rejects floats (got {x!r}); pass Fraction, int or 'p/q'"
                )
            x = Fraction(x)
        elif isinstance(x, (int, Fraction)):
            x = float(x)
        if not x > 0:
            raise DomainError(f"geometric interior entries must be positive, got {x!r}")
        return x

    def isclose(self, x, y, rel_tol=1e-12) -> bool:
        """Equality for exact domains, relative tolerance otherwise."""
        if self.is_exact:
            return x == y
        if x == y:
            return True
        if self.is_tropical and (x == _NEG_INF or y == _NEG_INF):
            return False
        scale = max(abs(x), abs(y), 1e-300)
        return abs(x - y) <= rel_tol * scale

    # -- scalar (de)serialization ----------------------------------------------

    def scalar_to_json(self, x):
        if self.is_tropical:
            return "-inf" if x == _NEG_INF else float(x)
        if self.is_exact:
            return str(x)
        return float(x)

    def scalar_from_json(self, obj):
        if self.is_tropical:
            if obj == "-inf":
                return _NEG_INF
            return self.coerce(float(obj))
        if self.is_exact:
            if isinstance(obj, float):
                raise DomainError(f"rational entries must be strings or ints, got {obj!r}")
            return self.coerce(Fraction(obj))
        return self.coerce(float(obj))


GEOMETRIC_RATIONAL = ValueDomain("geom-rational", tropical=False, exact=True)
GEOMETRIC_FLOAT = ValueDomain("geom-float", tropical=False, exact=False)
TROPICAL = ValueDomain("tropical", tropical=True, exact=False)

DOMAINS = {d.name: d for d in (GEOMETRIC_RATIONAL, GEOMETRIC_FLOAT, TROPICAL)}


def domain_by_name(name: str) -> ValueDomain:
    try:
        return DOMAINS[name]
    except KeyError:
        raise DomainError(f"unknown domain {name!r}; expected one of {sorted(DOMAINS)}") from None
