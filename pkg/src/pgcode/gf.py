"""Arithmetic in the finite fields GF(p^h).

Elements are stored by their integer code: the element
c_0 + c_1 t + ... + c_{h-1} t^{h-1} (t a root of the modulus) has code
sum(c_i * p**i).  Ordering by code is the canonical element order used
everywhere else in the package.

The modulus is the monic irreducible polynomial of degree h whose
coefficient vector has the smallest integer code, so F_8 uses t^3 + t + 1
and F_4 uses t^2 + t + 1.

Every scalar method on :class:`Field` also accepts numpy integer arrays and
then works elementwise; the geometry and spread modules rely on that.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import PreconditionError

MAX_ORDER = 2**20
# full q x q addition/multiplication tables are built up to this order
TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**h, raising if q is not a prime power."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    h = 0
    r = q
    while r % p == 0:
        r //= p
        h += 1
    if r != 1 or not is_prime(p):
        raise PreconditionError(f"{q} is not a prime power")
    return p, h


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as coefficient lists, constant term first ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def is_irreducible(coeffs: list[int] | tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    f = _trim(list(coeffs))
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(f, list(low) + [1], p):
                return False
    return True


def canonical_modulus(p: int, h: int) -> tuple[int, ...]:
    """Monic irreducible of degree h with the smallest integer code."""
    for code in range(p**h):
        low = [(code // p**i) % p for i in range(h)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {h} over F_{p}")


class Field:
    """The finite field with q = p**h elements.

    Use :func:`GF` to obtain cached instances; ``Field(p, h)`` builds a fresh
    one, which compares equal to the cached one.
    """

    def __init__(self, p: int, h: int = 1):
        if not is_prime(p):
            raise PreconditionError(f"characteristic {p} is not prime")
        if h < 1:
            raise PreconditionError("extension degree must be >= 1")
        if p**h > MAX_ORDER:
            raise PreconditionError(f"field order {p}^{h} exceeds cap {MAX_ORDER}")
        self.p = p
        self.h = h
        self.q = p**h
        self.modulus = canonical_modulus(p, h)
        self._pow_p = [p**i for i in range(h)]
        self._embeddings: dict[tuple[int, int], np.ndarray] = {}
        self._build_tables()

    # construction helpers (pure python, used once)

    def _poly_mul_code(self, a: int, b: int) -> int:
        p, h = self.p, self.h
        da = [(a // p**i) % p for i in range(h)]
        db = [(b // p**i) % p for i in range(h)]
        prod = [0] * (2 * h - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_rem(prod, list(self.modulus), p) if h > 1 else [prod[0] % p]
        return sum(c * p**i for i, c in enumerate(rem))

    def _poly_pow_code(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul_code(result, base)
            base = self._poly_mul_code(base, base)
            e >>= 1
        return result

    def _vec_mul_code(self, a: np.ndarray, b: int) -> np.ndarray:
        """Multiply an array of codes by one code (an F_p-linear map)."""
        p, h = self.p, self.h
        pw = np.array(self._pow_p, dtype=np.int64)
        rows = [self.coeffs(self._poly_mul_code(p**i, b)) for i in range(h)]
        mat = np.array(rows, dtype=np.int64)
        da = (a[:, None] // pw) % p
        return ((da @ mat) % p) @ pw

    def _find_primitive(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._poly_pow_code(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")

    def _build_tables(self) -> None:
        q = self.q
        g = self._find_primitive()
        self.primitive = g
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        block = max(1, int(np.ceil(np.sqrt(q - 1))))
        x = 1
        for i in range(min(block, q - 1)):
            exp[i] = x
            x = self._poly_mul_code(x, g)
        step = x  # g**block
        head = exp[:block].copy()
        mult = step
        for start in range(block, q - 1, block):
            stop = min(start + block, q - 1)
            exp[start:stop] = self._vec_mul_code(head[: stop - start], mult)
            mult = self._poly_mul_code(mult, step)
        exp[q - 1 :] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self._exp = exp
        self._log = log
        codes = np.arange(q, dtype=np.int64)
        self._neg = self._digitwise(codes, np.zeros_like(codes), sign=-1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        if q <= TABLE_LIMIT:
            a, b = np.meshgrid(codes, codes, indexing="ij")
            self._add_t = self._digitwise(a, b)
            self._mul_t = self._mul_log(a, b)
        else:
            self._add_t = None
            self._mul_t = None

    def _digitwise(self, a, b, sign: int = 1):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._pow_p:
            da = (a // pw) % p
            db = (b // pw) % p
            out += ((sign * da + db) % p) * pw
        return out

    def _mul_log(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    # elementwise arithmetic on codes (ints or numpy arrays)

    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        if self._add_t is not None:
            return self._out(self._add_t[a, b])
        return self._out(self._digitwise(a, b))

    def neg(self, a):
        return self._out(self._neg[a])

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if self._mul_t is not None:
            return self._out(self._mul_t[a, b])
        return self._out(self._mul_log(a, b))

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError(f"inverse of zero in GF({self.q})")
        return self._out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a = np.asarray(self.inv(a))
            e = -e
        if e == 0:
            return self._out(np.ones_like(a))
        r = self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, r))

    def frobenius(self, a):
        return self.pow(a, self.p)

    def trace(self, a):
        """Absolute trace to F_p: a + a^p + ... + a^(p^(h-1))."""
        a = np.asarray(a, dtype=np.int64)
        acc = np.zeros_like(a)
        x = a
        for _ in range(self.h):
            acc = np.asarray(self.add(acc, x))
            x = np.asarray(self.frobenius(x))
        return self._out(acc)

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n (i.e. n * 1)."""
        return n % self.p

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple((code // pw) % self.p for pw in self._pow_p)

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.h:
            raise PreconditionError(f"need {self.h} coefficients, got {len(coeffs)}")
        return sum((int(c) % self.p) * pw for c, pw in zip(coeffs, self._pow_p))

    # element views

    def __call__(self, code: int) -> FieldElement:
        return FieldElement(self, code)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def prime_field(self) -> Field:
        return GF(self.p, 1)

    def embedding_from(self, small: Field) -> np.ndarray:
        """Array mapping codes of ``small`` to codes of self.

        The generator t of ``small`` is sent to the smallest-code root of its
        modulus, which fixes the homomorphism once and for all.
        """
        key = (small.p, small.h)
        cached = self._embeddings.get(key)
        if cached is not None:
            return cached
        if small.p != self.p or self.h % small.h:
            raise PreconditionError(f"GF({small.q}) is not a subfield of GF({self.q})")
        root = None
        for y in range(self.q):
            val = 0
            for c in reversed(small.modulus):
                val = self.add(self.mul(val, y), c)
            if val == 0:
                root = y
                break
        if root is None:
            raise AssertionError("subfield modulus has no root; modulus table corrupted")
        powers = [1]
        for _ in range(small.h - 1):
            powers.append(self.mul(powers[-1], root))
        table = np.zeros(small.q, dtype=np.int64)
        for code in range(small.q):
            acc = 0
            for c, pw in zip(small.coeffs(code), powers):
                acc = self.add(acc, self.mul(c, pw))
            table[code] = acc
        table.setflags(write=False)
        self._embeddings[key] = table
        return table

    def to_json(self) -> dict:
        return {"p": self.p, "h": self.h, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.h) == (other.p, other.h)

    def __hash__(self):
        return hash((self.p, self.h))

    def __repr__(self):
        return f"GF({self.p}^{self.h})" if self.h > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int, h: int = 1) -> Field:
    return Field(p, h)


def field_of_order(q: int) -> Field:
    return GF(*prime_power(q))


class FieldElement:
    """Immutable element of a :class:`Field`, with the usual operators."""

    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        code = int(code)
        if not 0 <= code < field.q:
            raise PreconditionError(f"code {code} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise PreconditionError(f"mixing {self.field!r} and {other.field!r}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, code) -> FieldElement:
        return FieldElement(self.field, code)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.code))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.code, e))

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.code))

    def frobenius(self) -> FieldElement:
        return self._wrap(self.field.frobenius(self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other) and 0 <= other < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.h, self.code))

    def __repr__(self):
        return f"{self.field!r}({self.code})"


def field_arithmetic(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add, sub, mul, div, pow, inv, frobenius.

    For ``pow`` the exponent is passed as ``b`` (an int).
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** int(b)
    if op == "inv":
        return a.inv()
    if op == "frobenius":
        return a.frobenius()
    raise PreconditionError(f"unknown field operation {op!r}")


def trace_to_prime(x: FieldElement) -> FieldElement:
    return x.field.prime_field(x.field.trace(x.code))


def subfield_embed(x: FieldElement, target: Field) -> FieldElement:
    table = target.embedding_from(x.field)
    return FieldElement(target, int(table[x.code]))
