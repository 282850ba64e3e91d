"""
Exact finite fields: F_p, F_q = F_p[x]/(modulus) with q = p^m, and the
quadratic extension F_{q^2} = F_q[alpha]/(alpha^2 - d).

Elements are plain ints. An element of F_q with coefficient vector
(c_0, ..., c_{m-1}) (constant term first) is the integer sum(c_i * p**i),
so the prime subfield occupies 0..p-1. An element x + y*alpha of F_{q^2} is
the integer x*q + y, which is also its vertex index in the Paley graph.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_pow_mod, gf_rem, gf_strip

from src.certificate import CheckResult, require
from src.config import DEFAULT_SETTINGS
from src.errors import CapExceededError, FieldError

logger = logging.getLogger(__name__)

# Flat addition tables are kept for extension fields up to this order.
_ADD_TABLE_MAX = 256


def factor_prime_power(q: int) -> Tuple[int, int]:
    """Split an odd prime power q into (p, m)."""
    if q < 3:
        raise FieldError(f"q must be an odd prime power, got {q}")
    if q % 2 == 0:
        raise FieldError(f"q must be odd, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, m),) = factors.items()
    return int(p), int(m)


def _is_irreducible(poly: List[int], p: int) -> bool:
    # trial division by every monic polynomial of degree 1..deg/2
    degree = len(poly) - 1
    for k in range(1, degree // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            divisor = [1, *tail]
            if not gf_rem(poly, divisor, p, ZZ):
                return False
    return True


def _order_is_full(element, mul, one, order: int) -> bool:
    for prime in factorint(order):
        if _power(element, order // prime, mul, one) == one:
            return False
    return True


def _power(base, exponent: int, mul, one):
    result = one
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        base = mul(base, base)
        exponent >>= 1
    return result


@dataclass(frozen=True, eq=False)
class FieldContext:
    """
    F_q with q = p^m. Immutable once built; `exp[i]` is the i-th power of the
    primitive element and `log` is its inverse (log[0] = -1).
    """

    p: int
    m: int
    modulus: Tuple[int, ...]
    primitive: int
    exp: Tuple[int, ...]
    log: Tuple[int, ...]
    _add_table: Optional[Tuple[int, ...]] = field(default=None, repr=False)
    _neg: Tuple[int, ...] = field(default=(), repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def order(self) -> int:
        return self.q

    def __len__(self) -> int:
        return self.q

    def elements(self) -> range:
        return range(self.q)

    def vector(self, a: int) -> Tuple[int, ...]:
        digits = []
        for _ in range(self.m):
            a, c = divmod(a, self.p)
            digits.append(c)
        return tuple(digits)

    def from_vector(self, vector: Sequence[int]) -> int:
        a = 0
        for c in reversed(vector):
            a = a * self.p + c % self.p
        return a

    def element_table(self) -> List[Tuple[int, ...]]:
        return [self.vector(a) for a in self.elements()]

    def from_int(self, n: int) -> int:
        """The image of the integer n in the prime subfield."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a * self.q + b]
        return self.from_vector([x + y for x, y in zip(self.vector(a), self.vector(b))])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no inverse")
        return self.exp[-self.log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise FieldError("zero has no inverse")
            return 1 if n == 0 else 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def is_square(self, a: int) -> bool:
        if a == 0:
            raise FieldError("squareness of 0 is undefined")
        return self.pow(a, (self.q - 1) // 2) == 1

    def nonzero_squares(self) -> List[int]:
        return [a for a in range(1, self.q) if self.is_square(a)]


def _poly_of(vector: Sequence[int]) -> List[int]:
    # sympy's galoistools wants the leading coefficient first
    return gf_strip([int(c) for c in reversed(vector)])


def build_field(p: int, m: int = 1, cap: Optional[int] = None) -> FieldContext:
    """Build F_{p^m} with the least monic irreducible modulus and least primitive element."""
    cap = DEFAULT_SETTINGS.field_cap if cap is None else cap
    if p == 2:
        raise FieldError("characteristic 2 is not supported")
    if not isprime(p):
        raise FieldError(f"p must be a prime number, not {p}")
    if m < 1:
        raise FieldError(f"m must be a positive integer, not {m}")
    q = p**m
    if q > cap:
        raise CapExceededError("field order", q, cap)

    # least monic irreducible, coefficient tuples compared constant term first
    modulus = None
    for tail in itertools.product(range(p), repeat=m):
        candidate = (*tail, 1)
        if _is_irreducible(_poly_of(candidate), p):
            modulus = candidate
            break
    assert modulus is not None, "an irreducible polynomial exists in every degree"
    mod_poly = _poly_of(modulus)

    def to_poly(a: int) -> List[int]:
        digits = []
        for _ in range(m):
            a, c = divmod(a, p)
            digits.append(c)
        return _poly_of(digits)

    def from_poly(poly: List[int]) -> int:
        a = 0
        for c in poly:
            a = a * p + int(c)
        return a

    def poly_mul(a: int, b: int) -> int:
        return from_poly(gf_rem(gf_mul(to_poly(a), to_poly(b), p, ZZ), mod_poly, p, ZZ))

    primitive = None
    for g in range(1, q):
        g_poly = to_poly(g)
        if all(gf_pow_mod(g_poly, (q - 1) // r, mod_poly, p, ZZ) != [1] for r in factorint(q - 1)):
            primitive = g
            break
    if primitive is None:
        raise FieldError(f"no primitive element found for p={p}, m={m}")

    exp = [1]
    for _ in range(q - 2):
        exp.append(poly_mul(exp[-1], primitive))
    log = [-1] * q
    for i, a in enumerate(exp):
        log[a] = i
    if -1 in log[1:]:
        raise FieldError(f"exp table of {primitive} does not cover F_{q}*")

    neg = [0] * q
    for a in range(q):
        digits = []
        x = a
        for _ in range(m):
            x, c = divmod(x, p)
            digits.append((-c) % p)
        neg[a] = sum(c * p**i for i, c in enumerate(digits))

    add_table = None
    if m > 1 and q <= _ADD_TABLE_MAX:
        vectors = [[(a // p**i) % p for i in range(m)] for a in range(q)]
        add_table = tuple(
            sum(((x + y) % p) * p**i for i, (x, y) in enumerate(zip(vectors[a], vectors[b])))
            for a in range(q)
            for b in range(q)
        )

    ctx = FieldContext(p, m, modulus, primitive, tuple(exp), tuple(log), add_table, tuple(neg))
    logger.debug("built F_%d: modulus %s, primitive %d", q, modulus, primitive)
    return ctx


def least_nonsquare(F: FieldContext) -> int:
    """The least d in F_q* with d^((q-1)/2) = -1."""
    minus_one = F.neg(1)
    for a in range(1, F.q):
        if F.pow(a, (F.q - 1) // 2) == minus_one:
            return a
    raise FieldError(f"F_{F.q} has no non-square")


class QuadExtElement(NamedTuple):
    """x + y*alpha with x, y in F_q."""

    x: int
    y: int


@dataclass(frozen=True, eq=False)
class QuadExtContext:
    """F_{q^2} as pairs over `base`, alpha^2 = d, with exp/log tables of the primitive beta."""

    base: FieldContext
    d: int
    beta: int
    exp: Tuple[int, ...]
    log: Tuple[int, ...]
    debug_verify: bool = False

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def order(self) -> int:
        return self.base.q**2

    @property
    def alpha(self) -> int:
        return self.encode(0, 1)

    @property
    def one(self) -> int:
        return self.encode(1, 0)

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def encode(self, x: int, y: int) -> int:
        return x * self.base.q + y

    def decode(self, a: int) -> QuadExtElement:
        return QuadExtElement(*divmod(a, self.base.q))

    def embed(self, c: int) -> int:
        """The base-field element c as an element of F_{q^2}."""
        return self.encode(c, 0)

    def add(self, a: int, b: int) -> int:
        F = self.base
        ax, ay = divmod(a, F.q)
        bx, by = divmod(b, F.q)
        return F.add(ax, bx) * F.q + F.add(ay, by)

    def neg(self, a: int) -> int:
        F = self.base
        x, y = divmod(a, F.q)
        return F.neg(x) * F.q + F.neg(y)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no inverse")
        return self.exp[-self.log[a] % (self.order - 1)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise FieldError("zero has no inverse")
            return self.one if n == 0 else 0
        return self.exp[(self.log[a] * n) % (self.order - 1)]

    def scale(self, c: int, a: int) -> int:
        """c * a for c in the base field."""
        F = self.base
        x, y = divmod(a, F.q)
        return F.mul(c, x) * F.q + F.mul(c, y)

    def norm(self, a: int) -> int:
        F = self.base
        x, y = divmod(a, F.q)
        value = F.sub(F.mul(x, x), F.mul(F.mul(y, y), self.d))
        if self.debug_verify and a != 0:
            by_power = self.pow(a, F.q + 1)
            if by_power != self.embed(value):
                raise FieldError(f"norm mismatch at {self.decode(a)}: {value} vs {self.decode(by_power)}")
        return value

    def conjugate(self, a: int) -> int:
        F = self.base
        x, y = divmod(a, F.q)
        return x * F.q + F.neg(y)

    def is_square(self, a: int) -> bool:
        if a == 0:
            raise FieldError("squareness of 0 is undefined")
        result = self.pow(a, (self.order - 1) // 2) == self.one
        if self.debug_verify and result != self.base.is_square(self.norm(a)):
            raise FieldError(f"norm criterion disagrees at {self.decode(a)}")
        return result

    def nonzero_squares(self) -> List[int]:
        """All nonzero squares, ascending: the even powers of beta."""
        return sorted(self.exp[::2])


def _pair_mul(F: FieldContext, d: int, a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[int, int]:
    # (x + y alpha)(x' + y' alpha) = (x x' + y y' d) + (x y' + x' y) alpha
    x, y = a
    u, v = b
    return (
        F.add(F.mul(x, u), F.mul(F.mul(y, v), d)),
        F.add(F.mul(x, v), F.mul(u, y)),
    )


def build_quadratic_extension(F: FieldContext, debug_verify: Optional[bool] = None) -> QuadExtContext:
    """F_{q^2} over F with d the least non-square and beta the least primitive element."""
    if F.q % 2 == 0:
        raise FieldError("the base field must have odd order")
    d = least_nonsquare(F)
    order = F.q**2

    def mul(a, b):
        return _pair_mul(F, d, a, b)

    one = (1, 0)
    beta = None
    for index in range(1, order):
        candidate = divmod(index, F.q)
        if _order_is_full(candidate, mul, one, order - 1):
            beta = index
            break
    if beta is None:
        raise FieldError(f"no primitive element in F_{order}")

    beta_pair = divmod(beta, F.q)
    exp = [F.q]  # beta^0 = 1 = (1, 0)
    current = one
    for _ in range(order - 2):
        current = mul(current, beta_pair)
        exp.append(current[0] * F.q + current[1])
    log = [-1] * order
    for i, a in enumerate(exp):
        log[a] = i
    if -1 in log[1:]:
        raise FieldError(f"powers of beta do not cover F_{order}*")

    if debug_verify is None:
        debug_verify = DEFAULT_SETTINGS.debug_verify
    ctx = QuadExtContext(F, d, beta, tuple(exp), tuple(log), debug_verify)
    logger.debug("built F_%d over F_%d: d = %d, beta = %s", order, F.q, d, ctx.decode(beta))
    return ctx


def build_tower(q: int, field_cap: Optional[int] = None, debug_verify: Optional[bool] = None) -> QuadExtContext:
    """F_p -> F_q -> F_{q^2} for an odd prime power q."""
    p, m = factor_prime_power(q)
    cap = DEFAULT_SETTINGS.field_cap if field_cap is None else field_cap
    if q * q > cap:
        raise CapExceededError("extension field order", q * q, cap)
    return build_quadratic_extension(build_field(p, m, cap), debug_verify)


def norm(ctx: QuadExtContext, gamma: int) -> int:
    return ctx.norm(gamma)


def conjugate(ctx: QuadExtContext, gamma: int) -> int:
    return ctx.conjugate(gamma)


def is_square(ctx, gamma: int) -> bool:
    """Euler's criterion in either a FieldContext or a QuadExtContext."""
    return ctx.is_square(gamma)


def field_tables(ctx: QuadExtContext) -> Dict[str, object]:
    F = ctx.base
    return {
        "p": F.p,
        "m": F.m,
        "q": F.q,
        "modulus": list(F.modulus),
        "base_primitive": list(F.vector(F.primitive)),
        "d": list(F.vector(ctx.d)),
        "beta": [list(F.vector(c)) for c in ctx.decode(ctx.beta)],
        "elements": [list(v) for v in F.element_table()],
    }


def verify_field(F: FieldContext) -> CheckResult:
    """exp/log round trip and the order of the primitive element."""
    claim = "field tables"
    for a in range(1, F.q):
        require(F.exp[F.log[a]] == a, claim, "exp(log(x)) != x", {"x": a})
    require(len(set(F.exp)) == F.q - 1, claim, "primitive element has order below q-1", {"primitive": F.primitive})
    require(_is_irreducible(_poly_of(F.modulus), F.p), claim, "modulus is reducible", {"modulus": list(F.modulus)})
    return CheckResult(claim, True, {"q": F.q, "modulus": list(F.modulus), "primitive": F.primitive})


def verify_norm_properties(ctx: QuadExtContext) -> CheckResult:
    """The norm is the multiplicative map gamma -> gamma^(q+1) onto F_q* with kernel of order q+1."""
    claim = "norm map"
    F = ctx.base
    image = set()
    kernel = []
    for a in range(1, ctx.order):
        n = ctx.norm(a)
        require(ctx.embed(n) == ctx.pow(a, F.q + 1), claim, "N(g) != g^(q+1)", {"gamma": list(ctx.decode(a))})
        require(ctx.embed(n) == ctx.mul(a, ctx.conjugate(a)), claim, "N(g) != g * conj(g)", {"gamma": list(ctx.decode(a))})
        image.add(n)
        if n == 1:
            kernel.append(a)
    require(image == set(range(1, F.q)), claim, "image of N is not F_q*", {"image_size": len(image)})
    require(len(kernel) == F.q + 1, claim, "kernel does not have order q+1", {"kernel_size": len(kernel)})
    # multiplicativity on generators suffices: N(beta^i) = N(beta)^i
    nb = ctx.norm(ctx.beta)
    for i, a in enumerate(ctx.exp):
        require(ctx.norm(a) == F.pow(nb, i), claim, "N is not multiplicative", {"power": i})
    require(ctx.norm(0) == 0, claim, "N(0) != 0")
    return CheckResult(claim, True, {"kernel_size": len(kernel), "image_size": len(image)})


def verify_square_lemmas(ctx: QuadExtContext) -> CheckResult:
    """Squareness of -1, -d, alpha, F_q*, and the norm criterion for every nonzero element."""
    claim = "squares"
    F = ctx.base
    q = F.q
    minus_one = F.neg(1)
    require(F.is_square(minus_one) == (q % 4 == 1), claim, "-1 squareness does not follow q mod 4", {"q": q})
    require(F.is_square(F.neg(ctx.d)) == (q % 4 == 3), claim, "-d squareness does not follow q mod 4", {"q": q})
    require(not F.is_square(ctx.d), claim, "d is a square", {"d": ctx.d})
    require(ctx.norm(ctx.alpha) == F.neg(ctx.d), claim, "N(alpha) != -d")
    require(ctx.is_square(ctx.alpha) == (q % 4 == 3), claim, "alpha squareness does not follow q mod 4", {"q": q})
    for c in range(1, q):
        require(ctx.is_square(ctx.embed(c)), claim, "element of F_q* is not a square in F_{q^2}", {"c": c})
    squares = 0
    for a in range(1, ctx.order):
        square = ctx.is_square(a)
        require(square == F.is_square(ctx.norm(a)), claim, "norm criterion fails", {"gamma": list(ctx.decode(a))})
        squares += square
    require(squares == (ctx.order - 1) // 2, claim, "squares are not an index-2 subgroup", {"squares": squares})
    return CheckResult(claim, True, {"nonzero_squares": squares, "alpha_is_square": q % 4 == 3})
