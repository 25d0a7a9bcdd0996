"""Exact Weyl-correspondence engine for central-field operator algebra.

Phase-space functions are finite sums of monomials

    coeff * hbar^h * x_1^a1 ... x_d^ad * p_1^b1 ... p_d^bd * r^m,

with coeff an exact complex rational (a Gaussian rational) and m any
integer (the hyperradius r = sqrt(sum x_i^2) may appear with negative
powers).  Differentiation is closed on this class because

    d(r^m)/dx_k = m x_k r^(m-2),

and the Moyal star product of two such functions terminates exactly after
(p-degree(a) + p-degree(b)) bidifferential orders.  Everything here is
exact rational arithmetic; no floats appear anywhere in this module.

Identity verification does not canonicalize modulo r^2 = sum x_i^2.
Instead, candidate identities are checked by evaluating the difference at
random rational points: monomials with even r-power substitute
(sum x_i^2)^(m/2) exactly, and monomials with odd r-power are collected
in a separate channel (writing the difference as E + r*O, which vanishes
identically iff E and O both vanish, since r is not a rational function
of the x_i).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, NamedTuple, Sequence, Union

__all__ = [
    "GaussianRational",
    "PhaseMonomial",
    "PhasePoly",
    "OperatorWord",
    "star",
    "weyl_of_word",
    "weyl_of_words",
    "l2_words",
    "weyl_l2",
    "kinetic_split_words",
    "weyl_kinetic_split",
    "radial_momentum_words",
    "weyl_radial_momentum",
    "lambda_poly",
    "lambda_squared_poly",
    "rp_over_r_poly",
    "classical_t_rad_poly",
    "classical_t_ang_poly",
    "p_squared_poly",
    "identity_check",
    "mapping_identities",
    "resolution_identity_entries",
    "verification_report",
]

RationalLike = Union[int, Fraction]


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return GaussianRational(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _i_power(k: int) -> GaussianRational:
    """i^k as a Gaussian rational."""
    return (
        GaussianRational(1),
        GaussianRational(0, 1),
        GaussianRational(-1),
        GaussianRational(0, -1),
    )[k % 4]


class PhaseMonomial(NamedTuple):
    """Exponent signature of one monomial (the coefficient lives in PhasePoly)."""

    hbar_pow: int
    x_pows: tuple
    p_pows: tuple
    r_pow: int


class PhasePoly:
    """Finite sum of PhaseMonomials with Gaussian-rational coefficients.

    Terms are kept canonical: no two stored monomials share an exponent
    signature, and zero coefficients are dropped.
    """

    __slots__ = ("d", "_terms")

    def __init__(self, d: int, terms: dict | None = None):
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise ValueError(f"invalid dimension {d!r}")
        self.d = d
        self._terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "PhasePoly":
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, value) -> "PhasePoly":
        c = value if isinstance(value, GaussianRational) else GaussianRational(value)
        if c.is_zero:
            return cls.zero(d)
        zeros = (0,) * d
        return cls(d, {PhaseMonomial(0, zeros, zeros, 0): c})

    @classmethod
    def monomial(cls, d, coeff, x_pows=None, p_pows=None, r_pow=0, hbar_pow=0) -> "PhasePoly":
        c = coeff if isinstance(coeff, GaussianRational) else GaussianRational(coeff)
        if c.is_zero:
            return cls.zero(d)
        xp = tuple(x_pows) if x_pows is not None else (0,) * d
        pp = tuple(p_pows) if p_pows is not None else (0,) * d
        if len(xp) != d or len(pp) != d:
            raise ValueError("exponent vectors must have length d")
        if any(e < 0 for e in xp) or any(e < 0 for e in pp):
            raise ValueError("x/p exponents must be non-negative")
        return cls(d, {PhaseMonomial(hbar_pow, xp, pp, r_pow): c})

    @classmethod
    def x(cls, d: int, i: int) -> "PhasePoly":
        xp = [0] * d
        xp[i] = 1
        return cls.monomial(d, 1, x_pows=xp)

    @classmethod
    def p(cls, d: int, i: int) -> "PhasePoly":
        pp = [0] * d
        pp[i] = 1
        return cls.monomial(d, 1, p_pows=pp)

    @classmethod
    def r_power(cls, d: int, m: int) -> "PhasePoly":
        return cls.monomial(d, 1, r_pow=m)

    @classmethod
    def hbar(cls, d: int, power: int = 1) -> "PhasePoly":
        return cls.monomial(d, 1, hbar_pow=power)

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable) -> "PhasePoly":
        acc: dict = {}
        for key, coeff in pairs:
            prev = acc.get(key)
            coeff = prev + coeff if prev is not None else coeff
            if coeff.is_zero:
                acc.pop(key, None)
            else:
                acc[key] = coeff
        return cls(d, acc)

    # -- inspection ---------------------------------------------------

    def items(self):
        return self._terms.items()

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def p_degree(self) -> int:
        return max((sum(k.p_pows) for k in self._terms), default=0)

    def is_real(self) -> bool:
        """True when every coefficient has exactly zero imaginary part."""
        return all(c.is_real for c in self._terms.values())

    def coefficient(self, key: PhaseMonomial) -> GaussianRational:
        return self._terms.get(key, GaussianRational(0))

    def hbar_component(self, power: int) -> "PhasePoly":
        """The sub-polynomial multiplying hbar^power, with the hbar factor removed."""
        pairs = [
            (PhaseMonomial(0, k.x_pows, k.p_pows, k.r_pow), c)
            for k, c in self._terms.items()
            if k.hbar_pow == power
        ]
        return PhasePoly.from_pairs(self.d, pairs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "PhasePoly") -> "PhasePoly":
        self._check(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            prev = acc.get(key)
            c = prev + c if prev is not None else c
            if c.is_zero:
                acc.pop(key, None)
            else:
                acc[key] = c
        return PhasePoly(self.d, acc)

    def __sub__(self, other: "PhasePoly") -> "PhasePoly":
        return self + (-other)

    def __neg__(self) -> "PhasePoly":
        return PhasePoly(self.d, {k: -c for k, c in self._terms.items()})

    def __mul__(self, other: "PhasePoly") -> "PhasePoly":
        self._check(other)
        pairs = []
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                key = PhaseMonomial(
                    ka.hbar_pow + kb.hbar_pow,
                    tuple(a + b for a, b in zip(ka.x_pows, kb.x_pows)),
                    tuple(a + b for a, b in zip(ka.p_pows, kb.p_pows)),
                    ka.r_pow + kb.r_pow,
                )
                pairs.append((key, ca * cb))
        return PhasePoly.from_pairs(self.d, pairs)

    def scaled(self, factor) -> "PhasePoly":
        c = factor if isinstance(factor, GaussianRational) else GaussianRational(factor)
        if c.is_zero:
            return PhasePoly.zero(self.d)
        return PhasePoly(self.d, {k: v * c for k, v in self._terms.items()})

    def shift_hbar(self, k: int) -> "PhasePoly":
        if k == 0:
            return self
        return PhasePoly(
            self.d,
            {
                PhaseMonomial(key.hbar_pow + k, key.x_pows, key.p_pows, key.r_pow): c
                for key, c in self._terms.items()
            },
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhasePoly):
            return NotImplemented
        return self.d == other.d and self._terms == other._terms

    def __hash__(self):
        return hash((self.d, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "PhasePoly(0)"
        bits = []
        for key in sorted(self._terms, key=lambda k: (k.hbar_pow, k.r_pow, k.x_pows, k.p_pows)):
            c = self._terms[key]
            sym = []
            if key.hbar_pow:
                sym.append(f"hb^{key.hbar_pow}")
            sym.extend(f"x{i}^{e}" for i, e in enumerate(key.x_pows) if e)
            sym.extend(f"p{i}^{e}" for i, e in enumerate(key.p_pows) if e)
            if key.r_pow:
                sym.append(f"r^{key.r_pow}")
            bits.append(f"{c}*{'*'.join(sym) if sym else '1'}")
        return "PhasePoly(" + " + ".join(bits) + ")"

    # -- calculus -----------------------------------------------------

    def diff_x(self, k: int) -> "PhasePoly":
        pairs = []
        for key, c in self._terms.items():
            e = key.x_pows[k]
            if e:
                xp = list(key.x_pows)
                xp[k] = e - 1
                pairs.append((PhaseMonomial(key.hbar_pow, tuple(xp), key.p_pows, key.r_pow), c * e))
            if key.r_pow:
                xp = list(key.x_pows)
                xp[k] = e + 1
                pairs.append(
                    (PhaseMonomial(key.hbar_pow, tuple(xp), key.p_pows, key.r_pow - 2), c * key.r_pow)
                )
        return PhasePoly.from_pairs(self.d, pairs)

    def diff_p(self, k: int) -> "PhasePoly":
        pairs = []
        for key, c in self._terms.items():
            e = key.p_pows[k]
            if e:
                pp = list(key.p_pows)
                pp[k] = e - 1
                pairs.append((PhaseMonomial(key.hbar_pow, key.x_pows, tuple(pp), key.r_pow), c * e))
        return PhasePoly.from_pairs(self.d, pairs)

    def poisson(self, other: "PhasePoly") -> "PhasePoly":
        """Classical Poisson bracket {self, other}."""
        self._check(other)
        out = PhasePoly.zero(self.d)
        for k in range(self.d):
            out = out + self.diff_x(k) * other.diff_p(k) - self.diff_p(k) * other.diff_x(k)
        return out

    def _check(self, other: "PhasePoly") -> None:
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")


@lru_cache(maxsize=None)
def _multi_indices(d: int, max_total: int) -> tuple:
    """All length-d tuples of non-negative ints with sum <= max_total."""
    if d == 0:
        return ((),)
    out = []
    for head in _multi_indices(d - 1, max_total):
        room = max_total - sum(head)
        out.extend(head + (k,) for k in range(room + 1))
    return tuple(out)


def _multi_factorial(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def _deriv(poly: PhasePoly, x_multi: tuple, p_multi: tuple, cache: dict) -> PhasePoly:
    """d^|x_multi|/dx^x_multi d^|p_multi|/dp^p_multi of poly, memoized."""
    key = (x_multi, p_multi)
    got = cache.get(key)
    if got is not None:
        return got
    for j, n in enumerate(p_multi):
        if n:
            lower = list(p_multi)
            lower[j] = n - 1
            res = _deriv(poly, x_multi, tuple(lower), cache).diff_p(j)
            break
    else:
        for j, n in enumerate(x_multi):
            if n:
                lower = list(x_multi)
                lower[j] = n - 1
                res = _deriv(poly, tuple(lower), p_multi, cache).diff_x(j)
                break
        else:
            res = poly
    cache[key] = res
    return res


def star(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    """Moyal star product of two phase-space polynomials, exact.

    Expands the bidifferential exponential as the finite double sum over
    multi-indices (alpha, beta):

        sum (i hbar/2)^(|a|+|b|) (-1)^|b| / (a! b!)
            (d_x^a d_p^b f) (d_p^a d_x^b g),

    which terminates because every p-derivative lowers a finite p-degree.
    """
    a._check(b)
    d = a.d
    deg_a, deg_b = a.p_degree(), b.p_degree()
    cache_a: dict = {}
    cache_b: dict = {}
    zero = (0,) * d
    cache_a[(zero, zero)] = a
    cache_b[(zero, zero)] = b
    total = PhasePoly.zero(d)
    for alpha in _multi_indices(d, deg_b):
        ka = sum(alpha)
        da_partial = _deriv(a, alpha, zero, cache_a)
        if da_partial.is_zero:
            continue
        db_partial = _deriv(b, zero, alpha, cache_b)
        if db_partial.is_zero:
            continue
        for beta in _multi_indices(d, deg_a):
            kb = sum(beta)
            da = _deriv(a, alpha, beta, cache_a)
            if da.is_zero:
                continue
            db = _deriv(b, beta, alpha, cache_b)
            if db.is_zero:
                continue
            k = ka + kb
            coeff = _i_power(k) * Fraction(
                (-1) ** kb, (1 << k) * _multi_factorial(alpha) * _multi_factorial(beta)
            )
            total = total + (da * db).scaled(coeff).shift_hbar(k)
    return total


# -- ordered operator words -------------------------------------------


@dataclass(frozen=True)
class OperatorWord:
    """An ordered product of momentum components and position functions.

    Each factor is either ("p", i) for the i-th momentum component or
    ("f", poly) for multiplication by a momentum-free phase-space
    function of the Cartesian positions and the hyperradius.
    """

    d: int
    factors: tuple

    def __post_init__(self):
        for f in self.factors:
            kind = f[0]
            if kind == "p":
                if not (0 <= f[1] < self.d):
                    raise ValueError(f"momentum index out of range: {f[1]}")
            elif kind == "f":
                poly = f[1]
                if poly.d != self.d:
                    raise ValueError("position-function dimension mismatch")
                if poly.p_degree() > 0:
                    raise ValueError("position functions must be momentum free")
            else:
                raise ValueError(f"unknown factor kind {kind!r}")

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return OperatorWord(self.d, self.factors + other.factors)


def _mom(d: int, i: int):
    return ("p", i)


def _fn(poly: PhasePoly):
    return ("f", poly)


def weyl_of_word(word: OperatorWord) -> PhasePoly:
    """Weyl transform of an ordered word, folding factor images with star."""
    out = PhasePoly.constant(word.d, 1)
    for f in word.factors:
        img = PhasePoly.p(word.d, f[1]) if f[0] == "p" else f[1]
        out = star(out, img)
    return out


WordSum = Sequence  # list of (Fraction coefficient, OperatorWord)


def weyl_of_words(words: WordSum) -> PhasePoly:
    """Weyl transform of a rational combination of operator words."""
    if not words:
        raise ValueError("empty word sum")
    d = words[0][1].d
    out = PhasePoly.zero(d)
    for coeff, word in words:
        out = out + weyl_of_word(word).scaled(Fraction(coeff))
    return out


def _words_product(ws1: WordSum, ws2: WordSum) -> list:
    return [(c1 * c2, w1 * w2) for c1, w1 in ws1 for c2, w2 in ws2]


def angular_momentum_words(d: int, i: int, j: int) -> list:
    """The component x_i p_j - x_j p_i as a word sum."""
    return [
        (Fraction(1), OperatorWord(d, (_fn(PhasePoly.x(d, i)), _mom(d, j)))),
        (Fraction(-1), OperatorWord(d, (_fn(PhasePoly.x(d, j)), _mom(d, i)))),
    ]


def l2_words(d: int) -> list:
    """Total squared angular momentum as a word sum.

    The half double sum over ordered pairs i != j collapses to the plain
    sum over i < j because the (j, i) component is minus the (i, j) one.
    """
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            lij = angular_momentum_words(d, i, j)
            out.extend(_words_product(lij, lij))
    return out


def weyl_l2(d: int) -> PhasePoly:
    """Weyl transform of the squared total angular momentum operator."""
    return weyl_of_words(l2_words(d))


def _xx_over_r2(d: int, i: int, j: int) -> PhasePoly:
    xp = [0] * d
    xp[i] += 1
    xp[j] += 1
    return PhasePoly.monomial(d, 1, x_pows=xp, r_pow=-2)


def kinetic_split_words(d: int, mass: RationalLike = 1) -> tuple:
    """Word sums for the radial and angular kinetic-energy operators.

    Radial part: the projector sandwich sum over i, j of
        p_i (x_i x_j / r^2) p_j / (2 M).
    Angular part: the complementary projector sandwich, whose (i, j) block
    has position functions x_i^2, x_j^2 and -x_i x_j over r^2.
    """
    half_m = Fraction(1, 2) / Fraction(mass)
    rad = []
    for i in range(d):
        for j in range(d):
            rad.append(
                (half_m, OperatorWord(d, (_mom(d, i), _fn(_xx_over_r2(d, i, j)), _mom(d, j))))
            )
    ang = []
    for i in range(d):
        for j in range(i + 1, d):
            entries = (
                (j, j, _xx_over_r2(d, i, i)),
                (i, i, _xx_over_r2(d, j, j)),
                (i, j, -_xx_over_r2(d, i, j)),
                (j, i, -_xx_over_r2(d, i, j)),
            )
            for k, l, poly in entries:
                ang.append((half_m, OperatorWord(d, (_mom(d, k), _fn(poly), _mom(d, l)))))
    return rad, ang


def weyl_kinetic_split(d: int, mass: RationalLike = 1) -> tuple:
    """Weyl transforms (radial, angular) of the kinetic-energy split.

    Their sum equals p^2 / 2M modulo r^2 = sum x_i^2, and the radial part
    exceeds the classical-like radial energy by
    (d-1)(d-2) hbar^2 / (8 M r^2); both facts are verified as identities
    in mapping_identities.
    """
    rad, ang = kinetic_split_words(d, mass)
    return weyl_of_words(rad), weyl_of_words(ang)


def radial_momentum_words(d: int) -> list:
    """The symmetrized radial momentum (r/r . p + p . r/r) / 2 as words."""
    out = []
    for i in range(d):
        xi_over_r = PhasePoly.monomial(d, 1, x_pows=[1 if k == i else 0 for k in range(d)], r_pow=-1)
        out.append((Fraction(1, 2), OperatorWord(d, (_fn(xi_over_r), _mom(d, i)))))
        out.append((Fraction(1, 2), OperatorWord(d, (_mom(d, i), _fn(xi_over_r)))))
    return out


def weyl_radial_momentum(d: int) -> PhasePoly:
    return weyl_of_words(radial_momentum_words(d))


# -- classical-like reference functions -------------------------------


def lambda_poly(d: int, i: int, j: int) -> PhasePoly:
    """Classical angular-momentum component x_i p_j - x_j p_i."""
    return PhasePoly.x(d, i) * PhasePoly.p(d, j) - PhasePoly.x(d, j) * PhasePoly.p(d, i)


def lambda_squared_poly(d: int) -> PhasePoly:
    """Classical squared total angular momentum (pointwise product)."""
    out = PhasePoly.zero(d)
    for i in range(d):
        for j in range(i + 1, d):
            lij = lambda_poly(d, i, j)
            out = out + lij * lij
    return out


def rp_over_r_poly(d: int) -> PhasePoly:
    """(r . p) / r, the classical radial momentum."""
    pairs = []
    for i in range(d):
        xp = [0] * d
        pp = [0] * d
        xp[i] = pp[i] = 1
        pairs.append((PhaseMonomial(0, tuple(xp), tuple(pp), -1), GaussianRational(1)))
    return PhasePoly.from_pairs(d, pairs)


def classical_t_rad_poly(d: int, mass: RationalLike = 1) -> PhasePoly:
    """(r . p)^2 / (2 M r^2), the classical-like radial kinetic energy."""
    rp = rp_over_r_poly(d)
    return (rp * rp).scaled(Fraction(1, 2) / Fraction(mass))


def classical_t_ang_poly(d: int, mass: RationalLike = 1) -> PhasePoly:
    """Lambda^2 / (2 M r^2), the classical-like angular kinetic energy."""
    return (lambda_squared_poly(d) * PhasePoly.r_power(d, -2)).scaled(
        Fraction(1, 2) / Fraction(mass)
    )


def p_squared_poly(d: int, mass: RationalLike = 1) -> PhasePoly:
    """p^2 / 2M."""
    pairs = []
    for i in range(d):
        pp = [0] * d
        pp[i] = 2
        pairs.append((PhaseMonomial(0, (0,) * d, tuple(pp), 0), GaussianRational(Fraction(1, 2) / Fraction(mass))))
    return PhasePoly.from_pairs(d, pairs)


def _hbar2_over_r2(d: int, coeff: Fraction) -> PhasePoly:
    return PhasePoly.monomial(d, coeff, r_pow=-2, hbar_pow=2)


# -- identity testing --------------------------------------------------


def _random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-8, 8), rng.randint(1, 6))


def identity_check(lhs: PhasePoly, rhs: PhasePoly, trials: int = 20, seed: int = 0) -> bool:
    """Exact randomized test of lhs == rhs modulo r^2 = sum x_i^2.

    Evaluates lhs - rhs at `trials` random rational points.  Even powers
    of r substitute (sum x_i^2)^(m/2) as exact rationals; odd powers are
    accumulated in a separate channel (the coefficient of one leftover
    factor of r), and both channels must vanish at every point.  hbar is
    sampled as a positive rational like any other variable.
    """
    if lhs.d != rhs.d:
        raise ValueError("dimension mismatch between identity sides")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    diff = lhs - rhs
    if diff.is_zero:
        return True
    d = lhs.d
    rng = random.Random(seed)
    terms = list(diff.items())
    for _ in range(trials):
        xs = [_random_fraction(rng) for _ in range(d)]
        while all(v == 0 for v in xs):
            xs = [_random_fraction(rng) for _ in range(d)]
        ps = [_random_fraction(rng) for _ in range(d)]
        hb = Fraction(rng.randint(1, 8), rng.randint(1, 6))
        r2 = sum(v * v for v in xs)
        even = GaussianRational(0)
        odd = GaussianRational(0)
        for key, coeff in terms:
            v = hb ** key.hbar_pow
            for base, e in zip(xs, key.x_pows):
                if e:
                    v *= base ** e
            for base, e in zip(ps, key.p_pows):
                if e:
                    v *= base ** e
            if key.r_pow % 2 == 0:
                even = even + coeff * (v * r2 ** (key.r_pow // 2))
            else:
                odd = odd + coeff * (v * r2 ** ((key.r_pow - 1) // 2))
        if not (even.is_zero and odd.is_zero):
            return False
    return True


def mapping_identities(d: int, mass: RationalLike = 1, omit_l2_offset: bool = False) -> list:
    """The operator-to-phase-space mapping claims for dimension d.

    Returns (name, lhs, rhs) triples.  All of them hold exactly; the
    omit_l2_offset flag drops the hbar^2 offset from the angular-momentum
    mapping to provide a deliberately failing negative control.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    m = Fraction(mass)
    t_rad, t_ang = weyl_kinetic_split(d, m)
    offset = _hbar2_over_r2(d, Fraction((d - 1) * (d - 2), 8) / m)
    lam2 = lambda_squared_poly(d)
    l2_rhs = lam2 if omit_l2_offset else lam2 - PhasePoly.monomial(d, Fraction(d * (d - 1), 4), hbar_pow=2)
    pr = weyl_radial_momentum(d)
    pr_classical = rp_over_r_poly(d)
    pr2_rhs = pr_classical * pr_classical + _hbar2_over_r2(d, Fraction(d - 1, 4))
    x0, p0 = PhasePoly.x(d, 0), PhasePoly.p(d, 0)
    ident = [
        ("canonical_commutator", star(x0, p0) - star(p0, x0), PhasePoly.monomial(d, GaussianRational(0, 1), hbar_pow=1)),
        ("L2_mapping", weyl_l2(d), l2_rhs),
        ("Trad_mapping", t_rad, classical_t_rad_poly(d, m) + offset),
        ("Tang_mapping", t_ang, classical_t_ang_poly(d, m) - offset),
        ("kinetic_sum", t_rad + t_ang, p_squared_poly(d, m)),
        ("radial_momentum", pr, pr_classical),
        ("radial_momentum_squared", star(pr, pr), pr2_rhs),
    ]
    return ident


def resolution_identity_entries(d: int) -> list:
    """Entrywise resolution of the identity matrix into projector blocks.

    Entry (k, l) asserts x_k x_l / r^2 plus the half double sum of the
    complementary blocks equals delta_kl.
    """
    entries = []
    for k in range(d):
        for l in range(d):
            lhs = _xx_over_r2(d, k, l)
            for i in range(d):
                for j in range(d):
                    if i == j:
                        continue
                    # (T^ij)_kl = x_i^2 d_kj d_lj + x_j^2 d_ki d_li - x_i x_j (d_ki d_lj + d_kj d_li)
                    block = PhasePoly.zero(d)
                    if k == j and l == j:
                        block = block + _xx_over_r2(d, i, i)
                    if k == i and l == i:
                        block = block + _xx_over_r2(d, j, j)
                    if k == i and l == j:
                        block = block - _xx_over_r2(d, i, j)
                    if k == j and l == i:
                        block = block - _xx_over_r2(d, i, j)
                    lhs = lhs + block.scaled(Fraction(1, 2))
            rhs = PhasePoly.constant(d, 1 if k == l else 0)
            entries.append((f"resolve_{k}{l}", lhs, rhs))
    return entries


def verification_report(
    dims: Sequence[int],
    trials: int = 20,
    seed: int = 20240001,
    mass: RationalLike = 1,
    omit_l2_offset: bool = False,
) -> list:
    """Run the full identity catalog and return JSON-ready result rows.

    Each row is {identity_name, dimension, status, trials, seed}; status
    is "pass" or "fail".  Seeds are derived deterministically per row.
    """
    rows = []
    for d in dims:
        idents = mapping_identities(d, mass, omit_l2_offset=omit_l2_offset)
        resolve = resolution_identity_entries(d)
        res_seed = seed + 1000 * d
        res_ok = all(identity_check(lhs, rhs, trials, res_seed + i) for i, (_, lhs, rhs) in enumerate(resolve))
        rows.append(
            {
                "identity_name": "identity_resolution",
                "dimension": d,
                "status": "pass" if res_ok else "fail",
                "trials": trials,
                "seed": res_seed,
            }
        )
        for i, (name, lhs, rhs) in enumerate(idents):
            s = seed + 1000 * d + 100 + i
            ok = identity_check(lhs, rhs, trials, s)
            rows.append(
                {
                    "identity_name": name,
                    "dimension": d,
                    "status": "pass" if ok else "fail",
                    "trials": trials,
                    "seed": s,
                }
            )
    return rows
