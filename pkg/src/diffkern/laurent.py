"""Exact multivariate Laurent polynomials on a half-integer exponent lattice.

Everything downstream (difference operators in multiplicative variables,
Koornwinder and Macdonald polynomials, kernel expansions) is built on the
algebra in this module:

  * ``LaurentPoly``     sparse Laurent polynomials in m variables with
                        ``fractions.Fraction`` coefficients.  Exponents live on
                        a DOUBLED lattice: the stored integer vector ``e``
                        represents the monomial ``prod_i z_i**(e_i/2)``, so
                        half-integer powers such as z**(1/2) - z**(-1/2) are
                        exact lattice points.
  * ``Partition``       weakly decreasing integer tuples with containment,
                        conjugation and (BC) dominance order.
  * ``ExactParams``     Askey-Wilson parameter bundle (a,b,c,d,q,t) stored via
                        exact rational square roots, so alpha = (abcd/q)**(1/2)
                        and friends stay rational.
  * bracket helpers     [z;a] = z + 1/z - a - 1/a and the shifted factorials
                        [z;a]_{q,l} (polynomial) and [a]_{t,l} (constant).

All arithmetic is exact; there is no floating-point fallback anywhere in this
module.  Numeric evaluation happens only through ``eval_numeric``, where the
caller supplies a square root for every coordinate to fix branches.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]
Scalar = Fraction | int

# ======================================================================
# errors
# ======================================================================


class VariableCountMismatch(ValueError):
    """Raised when two polynomials over different variable sets are combined."""


class InexactDivisionError(ArithmeticError):
    """Raised when a quotient of Laurent polynomials is not a Laurent polynomial.

    Carries enough context for callers to report the failure without crashing:
    the divisor and dividend term counts and the offending quotient exponent.
    """

    def __init__(self, message: str, offending_exponent: Exponent | None = None):
        super().__init__(message)
        self.offending_exponent = offending_exponent


# ======================================================================
# LaurentPoly
# ======================================================================


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact scalar expected, got {type(c).__name__}")


class LaurentPoly:
    """Sparse exact Laurent polynomial in ``m`` variables (doubled lattice).

    Instances are immutable by convention: every operation returns a new
    polynomial and ``terms`` must not be mutated by callers.
    """

    __slots__ = ("m", "_terms")

    def __init__(self, m: int, terms: Mapping[Exponent, Scalar] | None = None):
        if m < 0:
            raise ValueError("variable count must be nonnegative")
        self.m = m
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                key = tuple(exp)
                if len(key) != m:
                    raise VariableCountMismatch(
                        f"exponent {key} has length {len(key)}, expected {m}"
                    )
                val = _as_fraction(coeff)
                if val:
                    clean[key] = val
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "LaurentPoly":
        return cls(m)

    @classmethod
    def one(cls, m: int) -> "LaurentPoly":
        return cls.const(m, 1)

    @classmethod
    def const(cls, m: int, c: Scalar) -> "LaurentPoly":
        return cls(m, {(0,) * m: _as_fraction(c)})

    @classmethod
    def monomial(cls, m: int, exps: Sequence[int], coeff: Scalar = 1) -> "LaurentPoly":
        """Monomial with DOUBLED exponents ``exps`` (so (2,) means z**1)."""
        return cls(m, {tuple(exps): _as_fraction(coeff)})

    @classmethod
    def var_power(cls, m: int, i: int, e2: int, coeff: Scalar = 1) -> "LaurentPoly":
        """``coeff * z_i**(e2/2)`` as a polynomial in ``m`` variables."""
        exps = [0] * m
        exps[i] = e2
        return cls.monomial(m, exps, coeff)

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.m)

    def integral_lattice(self) -> bool:
        """True when every stored (doubled) exponent is even."""
        return all(all(e % 2 == 0 for e in exp) for exp in self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.m == other.m and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(self.m, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.m, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "LaurentPoly(0)"
        bits = []
        for exp in sorted(self._terms):
            mono = "*".join(
                f"z{i}^({e}/2)" for i, e in enumerate(exp) if e
            ) or "1"
            bits.append(f"{self._terms[exp]}*{mono}")
        return "LaurentPoly(" + " + ".join(bits) + ")"

    # -- ring operations ------------------------------------------------

    def _check_m(self, other: "LaurentPoly") -> None:
        if self.m != other.m:
            raise VariableCountMismatch(
                f"operand variable counts differ: {self.m} vs {other.m}"
            )

    def __add__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.m, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_m(other)
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            new = out.get(exp, Fraction(0)) + coeff
            if new:
                out[exp] = new
            else:
                out.pop(exp, None)
        res = LaurentPoly(self.m)
        res._terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        res = LaurentPoly(self.m)
        res._terms = {exp: -c for exp, c in self._terms.items()}
        return res

    def __sub__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.m, other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return LaurentPoly.zero(self.m)
            res = LaurentPoly(self.m)
            res._terms = {exp: coeff * c for exp, coeff in self._terms.items()}
            return res
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_m(other)
        # plain sparse convolution; desk-scale inputs make this plenty fast
        out: dict[Exponent, Fraction] = {}
        small, large = (
            (self._terms, other._terms)
            if len(self._terms) <= len(other._terms)
            else (other._terms, self._terms)
        )
        for e1, c1 in small.items():
            for e2, c2 in large.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                new = out.get(key, Fraction(0)) + c1 * c2
                if new:
                    out[key] = new
                else:
                    out.pop(key, None)
        res = LaurentPoly(self.m)
        res._terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = LaurentPoly.one(self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    # -- substitutions and symmetries -----------------------------------

    def substitute(
        self,
        i: int,
        sqrt_scale: Scalar = 1,
        invert: bool = False,
    ) -> "LaurentPoly":
        """Apply ``z_i -> sqrt_scale**2 * z_i**(+-1)`` exactly.

        The scale is passed through its square root so that odd points of the
        doubled lattice (genuine half powers of z_i) pick up the exact factor
        ``sqrt_scale**e`` with no root extraction.
        """
        s = _as_fraction(sqrt_scale)
        if not s:
            raise ValueError("substitution scale must be nonzero")
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self._terms.items():
            e = exp[i]
            factor = s**e
            new_exp = list(exp)
            if invert:
                new_exp[i] = -e
            key = tuple(new_exp)
            new = out.get(key, Fraction(0)) + coeff * factor
            if new:
                out[key] = new
            else:
                out.pop(key, None)
        res = LaurentPoly(self.m)
        res._terms = out
        return res

    def invert_all(self) -> "LaurentPoly":
        """``z_i -> 1/z_i`` for every variable simultaneously."""
        res = LaurentPoly(self.m)
        res._terms = {
            tuple(-e for e in exp): coeff for exp, coeff in self._terms.items()
        }
        return res

    def permute(self, perm: Sequence[int]) -> "LaurentPoly":
        """Relabel variables: output variable ``perm[i]`` carries old ``z_i``."""
        if sorted(perm) != list(range(self.m)):
            raise ValueError(f"not a permutation of 0..{self.m - 1}: {perm}")
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self._terms.items():
            new_exp = [0] * self.m
            for i, e in enumerate(exp):
                new_exp[perm[i]] = e
            out[tuple(new_exp)] = coeff
        res = LaurentPoly(self.m)
        res._terms = out
        return res

    # -- numeric evaluation ---------------------------------------------

    def eval_at(self, sqrt_point: Sequence[complex]) -> complex:
        """Evaluate at ``z_i = sqrt_point[i]**2``.

        The caller supplies ``s_i`` with ``s_i**2 = z_i``; the monomial with
        doubled exponent ``e`` evaluates to ``prod s_i**e_i``, which fixes all
        square-root branches explicitly.
        """
        if len(sqrt_point) != self.m:
            raise VariableCountMismatch(
                f"point has {len(sqrt_point)} coordinates, expected {self.m}"
            )
        for s in sqrt_point:
            if s == 0:
                raise ZeroDivisionError("zero coordinate in Laurent evaluation")
        total = 0j
        for exp, coeff in self._terms.items():
            value = complex(coeff)
            for s, e in zip(sqrt_point, exp):
                if e:
                    value *= complex(s) ** e
            total += value
        return total


def eval_numeric(f: LaurentPoly, sqrt_point: Sequence[complex]) -> complex:
    """Functional alias for :meth:`LaurentPoly.eval_at`."""
    return f.eval_at(sqrt_point)


# ======================================================================
# exact division
# ======================================================================


def divide_exact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``f / g``; raises ``InexactDivisionError`` otherwise.

    Lex leading-term cancellation.  Every quotient exponent of an exact
    division lies in the per-coordinate box

        min_i(f) - max_i(g) <= e_i <= max_i(f) - min_i(g),

    so stepping outside the box certifies the division is not exact; inside
    the box the strictly lex-decreasing remainder leads force termination.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return LaurentPoly.zero(f.m)
    if f.m != g.m:
        raise VariableCountMismatch(
            f"operand variable counts differ: {f.m} vs {g.m}"
        )
    m = f.m
    f_exps = list(f.terms)
    g_exps = list(g.terms)
    lo = tuple(
        min(e[i] for e in f_exps) - max(e[i] for e in g_exps) for i in range(m)
    )
    hi = tuple(
        max(e[i] for e in f_exps) - min(e[i] for e in g_exps) for i in range(m)
    )

    g_lead = max(g_exps)
    g_lead_coeff = g.terms[g_lead]
    g_rest = [(e, c) for e, c in g.terms.items() if e != g_lead]

    remainder = dict(f.terms)
    quotient: dict[Exponent, Fraction] = {}
    while remainder:
        r_lead = max(remainder)
        q_exp = tuple(a - b for a, b in zip(r_lead, g_lead))
        if any(not (lo[i] <= q_exp[i] <= hi[i]) for i in range(m)):
            raise InexactDivisionError(
                "quotient exponent escapes the exact-division box; "
                f"division of {len(f.terms)}-term by {len(g.terms)}-term "
                "polynomial is not exact",
                offending_exponent=q_exp,
            )
        q_coeff = remainder.pop(r_lead) / g_lead_coeff
        quotient[q_exp] = q_coeff
        for e, c in g_rest:
            key = tuple(a + b for a, b in zip(q_exp, e))
            new = remainder.get(key, Fraction(0)) - q_coeff * c
            if new:
                remainder[key] = new
            else:
                remainder.pop(key, None)
    out = LaurentPoly(m)
    out._terms = quotient  # already canonical
    return out


def sqrt_fraction(x: Fraction | int) -> Fraction:
    """Exact square root of a nonnegative rational; raises if irrational."""
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        raise ValueError("cannot take a real square root of a negative rational")
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn != x.numerator or rd * rd != x.denominator:
        raise ValueError(f"{x} is not a perfect rational square")
    return Fraction(rn, rd)


# ======================================================================
# partitions
# ======================================================================


class Partition:
    """Weakly decreasing tuple of nonnegative integers, trailing zeros trimmed."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        cleaned = list(parts)
        for p in cleaned:
            if not isinstance(p, int) or p < 0:
                raise ValueError(f"partition parts must be nonnegative integers: {cleaned}")
        if any(cleaned[i] < cleaned[i + 1] for i in range(len(cleaned) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {cleaned}")
        while cleaned and cleaned[-1] == 0:
            cleaned.pop()
        self.parts: tuple[int, ...] = tuple(cleaned)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def part(self, i: int) -> int:
        """Part ``i`` (0-based), with implicit zeros past the length."""
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def padded(self, m: int) -> tuple[int, ...]:
        if len(self.parts) > m:
            raise ValueError(f"partition {self.parts} longer than m={m}")
        return self.parts + (0,) * (m - len(self.parts))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(
            [sum(1 for p in self.parts if p > i) for i in range(self.parts[0])]
        )

    def contains(self, other: "Partition") -> bool:
        """Containment of Young diagrams: ``self >= other`` part by part."""
        return all(self.part(i) >= other.part(i) for i in range(len(other)))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Partition{self.parts}"


def dominance_leq(mu: Partition, lam: Partition) -> bool:
    """BC dominance: all prefix sums of mu bounded by lam's AND |mu| <= |lam|.

    The inhomogeneous convention (weight may drop) is the one that makes the
    triangular expansions of the Koornwinder theory literal: constants are
    comparable to everything above them.
    """
    if mu.size > lam.size:
        return False
    n = max(len(mu), len(lam))
    s_mu = 0
    s_lam = 0
    for i in range(n):
        s_mu += mu.part(i)
        s_lam += lam.part(i)
        if s_mu > s_lam:
            return False
    return True


def partitions_in_box(max_length: int, max_part: int) -> list[Partition]:
    """All partitions fitting in a ``max_length x max_part`` box."""
    results: list[Partition] = []

    def rec(prefix: list[int], remaining: int, cap: int) -> None:
        results.append(Partition(prefix))
        if remaining == 0:
            return
        for p in range(min(cap, max_part), 0, -1):
            rec(prefix + [p], remaining - 1, p)

    rec([], max_length, max_part)
    # dedupe (prefixes with trailing zeros trim to the same partition) and sort
    uniq = {p.parts: p for p in results}
    return sorted(uniq.values(), key=lambda p: (p.size, p.parts))


def partitions_of(n: int, max_length: int | None = None) -> list[Partition]:
    """All partitions of ``n`` with at most ``max_length`` parts."""
    cap = n if max_length is None else max_length
    return [p for p in partitions_in_box(cap, n) if p.size == n]


# ======================================================================
# hyperoctahedral orbit sums and invariance
# ======================================================================


def orbit_sum(mu: Partition | Sequence[int], m: int) -> LaurentPoly:
    """Monomial orbit sum m_mu(z) = sum of z**nu over the W-orbit of mu.

    W is the hyperoctahedral group (signed permutations); each distinct
    monomial appears exactly once with coefficient 1.
    """
    part = mu if isinstance(mu, Partition) else Partition(mu)
    padded = part.padded(m)
    terms: dict[Exponent, Fraction] = {}
    one = Fraction(1)
    for perm in set(itertools.permutations(padded)):
        nonzero = [i for i, e in enumerate(perm) if e]
        for signs in itertools.product((1, -1), repeat=len(nonzero)):
            exps = list(perm)
            for pos, s in zip(nonzero, signs):
                exps[pos] *= s
            terms[tuple(2 * e for e in exps)] = one
    return LaurentPoly(m, terms)


def orbit_size(mu: Partition, m: int) -> int:
    """|W.mu| by stabilizer counting: distinct permutations x sign choices."""
    padded = mu.padded(m)
    perms = len(set(itertools.permutations(padded)))
    nonzero = sum(1 for e in padded if e)
    return perms * 2**nonzero


def is_W_invariant(f: LaurentPoly) -> bool:
    """Exact invariance under the hyperoctahedral generators.

    Checks the adjacent transpositions and the inversion of the last
    variable; these generate the full group of signed permutations.
    """
    m = f.m
    if m == 0:
        return True
    for i in range(m - 1):
        perm = list(range(m))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if f.permute(perm) != f:
            return False
    return f.substitute(m - 1, invert=True) == f


def is_symmetric(f: LaurentPoly) -> bool:
    """Invariance under variable permutations only (type-A symmetry)."""
    m = f.m
    for i in range(m - 1):
        perm = list(range(m))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if f.permute(perm) != f:
            return False
    return True


def sym_orbit_sum(mu: Partition | Sequence[int], m: int) -> LaurentPoly:
    """Symmetric-group orbit sum (no sign flips), for the type-A theory."""
    part = mu if isinstance(mu, Partition) else Partition(mu)
    padded = part.padded(m)
    terms: dict[Exponent, Fraction] = {}
    one = Fraction(1)
    for perm in set(itertools.permutations(padded)):
        terms[tuple(2 * e for e in perm)] = one
    return LaurentPoly(m, terms)


# ======================================================================
# Askey-Wilson parameter bundle
# ======================================================================


@dataclass(frozen=True)
class ExactParams:
    """Square-rational Askey-Wilson parameters.

    Stores the square roots sa..st, so a = sa**2, ..., t = st**2 and every
    square root the formulas call for (alpha = (abcd/q)**(1/2), (qt)**(1/2)/a,
    q**(1/2) prefactors) is an exact rational.
    """

    sa: Fraction
    sb: Fraction
    sc: Fraction
    sd: Fraction
    sq: Fraction
    st: Fraction

    def __post_init__(self) -> None:
        for name in ("sa", "sb", "sc", "sd", "sq", "st"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, Fraction(value))
            if not getattr(self, name):
                raise ValueError(f"square root {name} must be nonzero")

    # squared values
    @property
    def a(self) -> Fraction:
        return self.sa**2

    @property
    def b(self) -> Fraction:
        return self.sb**2

    @property
    def c(self) -> Fraction:
        return self.sc**2

    @property
    def d(self) -> Fraction:
        return self.sd**2

    @property
    def q(self) -> Fraction:
        return self.sq**2

    @property
    def t(self) -> Fraction:
        return self.st**2

    @property
    def alpha(self) -> Fraction:
        """(abcd/q)**(1/2) = sa sb sc sd / sq, exactly."""
        return self.sa * self.sb * self.sc * self.sd / self.sq

    def sqrt_qt_over_a(self) -> Fraction:
        """((qt)**(1/2))/a ... returned as the square root bundle needs it:
        the value (qt)^{1/2}/a itself, which is rational: sq*st/sa**2."""
        return self.sq * self.st / self.a

    @classmethod
    def default(cls) -> "ExactParams":
        return cls(
            sa=Fraction(2, 3),
            sb=Fraction(3, 5),
            sc=Fraction(5, 7),
            sd=Fraction(7, 11),
            sq=Fraction(1, 2),
            st=Fraction(2, 5),
        )

    def replace(self, **kwargs: Fraction) -> "ExactParams":
        data = {
            "sa": self.sa,
            "sb": self.sb,
            "sc": self.sc,
            "sd": self.sd,
            "sq": self.sq,
            "st": self.st,
        }
        data.update(kwargs)
        return ExactParams(**data)

    def as_dict(self) -> dict[str, str]:
        return {
            "sa": str(self.sa),
            "sb": str(self.sb),
            "sc": str(self.sc),
            "sd": str(self.sd),
            "sq": str(self.sq),
            "st": str(self.st),
        }


# ======================================================================
# brackets: [z;a], [z;a]_{q,l}, [a]_{t,l}
# ======================================================================


def bracket_za(m: int, i: int, a: Fraction) -> LaurentPoly:
    """[z_i; a] = z_i + 1/z_i - a - 1/a as a polynomial in m variables."""
    a = _as_fraction(a)
    if not a:
        raise ValueError("bracket constant must be nonzero")
    const = -(a + 1 / a)
    zero = (0,) * m
    up = [0] * m
    up[i] = 2
    down = [0] * m
    down[i] = -2
    return LaurentPoly(m, {tuple(up): Fraction(1), tuple(down): Fraction(1), zero: const})


def bracket_factorial_poly(a: Fraction, q: Fraction, l: int) -> LaurentPoly:
    """[z;a]_{q,l} = [z;a][z;qa]...[z;q^{l-1}a], univariate (m = 1), monic of degree l."""
    if l < 0:
        raise ValueError("factorial length must be nonnegative")
    a = _as_fraction(a)
    q = _as_fraction(q)
    out = LaurentPoly.one(1)
    for j in range(l):
        out = out * bracket_za(1, 0, a * q**j)
    return out


def bracket_const(sqrt_c: Fraction) -> Fraction:
    """[c] = c**(1/2) - c**(-1/2), taking the square root as input."""
    s = _as_fraction(sqrt_c)
    if not s:
        raise ValueError("bracket square root must be nonzero")
    return s - 1 / s


def bracket_pair_const(sqrt_x: Fraction, sqrt_y: Fraction) -> Fraction:
    """[x;y] = x + 1/x - y - 1/y for constants, via their square roots."""
    x = _as_fraction(sqrt_x) ** 2
    y = _as_fraction(sqrt_y) ** 2
    return x + 1 / x - y - 1 / y


def bracket_factorial_const(sqrt_a: Fraction, sqrt_t: Fraction, l: int) -> Fraction:
    """[a]_{t,l} = [a][ta]...[t^{l-1}a] as an exact rational.

    Arguments are the square roots of a and t, so each factor
    [t^j a] = (t^j a)**(1/2) - (t^j a)**(-1/2) is rational.
    """
    if l < 0:
        raise ValueError("factorial length must be nonnegative")
    sa = _as_fraction(sqrt_a)
    st = _as_fraction(sqrt_t)
    out = Fraction(1)
    for j in range(l):
        out *= bracket_const(st**j * sa)
    return out


# ======================================================================
# JSON serialization
# ======================================================================


def poly_to_json(f: LaurentPoly) -> dict:
    """Schema: {vars, lattice: "half", terms: [{exp, num, den}]}, terms lex-sorted."""
    return {
        "vars": f.m,
        "lattice": "half",
        "terms": [
            {
                "exp": list(exp),
                "num": str(f.terms[exp].numerator),
                "den": str(f.terms[exp].denominator),
            }
            for exp in sorted(f.terms)
        ],
    }


def poly_from_json(obj: Mapping) -> LaurentPoly:
    if obj.get("lattice") != "half":
        raise ValueError(f"unsupported lattice tag: {obj.get('lattice')!r}")
    m = int(obj["vars"])
    terms: dict[Exponent, Fraction] = {}
    for entry in obj["terms"]:
        exp = tuple(int(e) for e in entry["exp"])
        terms[exp] = Fraction(int(entry["num"]), int(entry["den"]))
    return LaurentPoly(m, terms)


def poly_dumps(f: LaurentPoly) -> str:
    """Canonical byte-stable JSON text for a polynomial."""
    return json.dumps(poly_to_json(f), separators=(", ", ": "))
