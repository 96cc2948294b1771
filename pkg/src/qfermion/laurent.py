"""Exact Laurent polynomials in one and several commuting variables.

Coefficients are Python ints throughout.  Values are immutable; every
operation returns a new object.

Canonical text form (used by the CLI, golden files and the cache) lists
terms in graded-lexicographic order of exponents, lowest first::

    >>> str(Laurent({0: 1, 1: 1, 2: 2}))
    '1 + q + 2*q^2'
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from operator import add, sub
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError, NotDivisible

__all__ = [
    "Laurent",
    "MultiLaurent",
    "laurent_eval_at_one",
    "parse_expression",
    "glex_key",
]


def glex_key(exps: Sequence[int]):
    """Graded lexicographic sort key for an exponent vector."""
    return (sum(exps), tuple(exps))


def _clean(d):
    return {k: v for k, v in d.items() if v}


class Laurent:
    """Laurent polynomial in one formal variable with integer coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int | None = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs} if coeffs else {}
        else:
            c = {int(k): int(v) for k, v in coeffs.items() if v}
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Laurent is immutable")

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_c", c)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "Laurent":
        return cls({exp: coeff})

    @classmethod
    def var(cls) -> "Laurent":
        return cls({1: 1})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def degree(self) -> int:
        if not self._c:
            raise DomainError("degree of the zero polynomial")
        return max(self._c)

    def valuation(self) -> int:
        if not self._c:
            raise DomainError("valuation of the zero polynomial")
        return min(self._c)

    def is_unit(self) -> bool:
        return len(self._c) == 1 and abs(next(iter(self._c.values()))) == 1

    # -- ring operations -------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, int):
            return Laurent(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return Laurent._raw(_clean(c))

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return Laurent._raw(_clean(c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if abs(c) == 1:
                    return Laurent._raw({e * n: c ** (-n)})
            raise DomainError("negative power of a non-unit Laurent polynomial")
        result = Laurent(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "Laurent":
        """Multiply by var**k."""
        return Laurent._raw({e + k: v for e, v in self._c.items()})

    def scale_exponents(self, k: int) -> "Laurent":
        """Substitute var -> var**k (k may be negative)."""
        if k == 0:
            return Laurent(sum(self._c.values()))
        return Laurent._raw({e * k: v for e, v in self._c.items()})

    def divmod(self, other: "Laurent"):
        """Long division by a Laurent polynomial; returns (quotient, remainder).

        The remainder is zero iff ``other`` divides ``self`` in Z[x, 1/x].
        """
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return Laurent(), Laurent()
        # normalise both to ordinary polynomials
        sv, ov = self.valuation(), other.valuation()
        num = {e - sv: v for e, v in self._c.items()}
        den = {e - ov: v for e, v in other._c.items()}
        dd = max(den)
        lead = den[dd]
        quo: dict[int, int] = {}
        while num:
            top = max(num)
            if top < dd:
                break
            c, r = divmod(num[top], lead)
            if r:
                break
            quo[top - dd] = c
            for e, v in den.items():
                k = e + top - dd
                nv = num.get(k, 0) - c * v
                if nv:
                    num[k] = nv
                else:
                    num.pop(k, None)
        shift = sv - ov
        return (Laurent._raw({e + shift: v for e, v in quo.items()}),
                Laurent._raw({e + sv: v for e, v in num.items()}))

    def divide_exact(self, other: "Laurent") -> "Laurent":
        q, r = self.divmod(other)
        if r:
            raise NotDivisible(f"{other} does not divide {self}")
        return q

    # -- evaluation ------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, int) and x == 1:
            return sum(self._c.values())
        x = Fraction(x)
        return sum((v * x ** e for e, v in self._c.items()), Fraction(0))

    def eval_at_one(self) -> int:
        return sum(self._c.values())

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._c.items())))
        return self._hash

    # -- text ------------------------------------------------------------
    def to_text(self, var: str = "q") -> str:
        return _format_terms(((( e,), c) for e, c in sorted(self._c.items())), [var])

    def __str__(self):
        return self.to_text("q")

    def __repr__(self):
        return f"Laurent({self.to_text('q')!r})"

    @classmethod
    def parse(cls, text: str, var: str = "q") -> "Laurent":
        return parse_expression(
            text,
            make_int=cls,
            make_var=lambda name: _expect_name(name, [var]) and cls.var(),
        )


def laurent_eval_at_one(p: Laurent) -> int:
    """Sum of coefficients, i.e. the value at var = 1."""
    return p.eval_at_one()


class MultiLaurent:
    """Commutative Laurent polynomial in ``nvars`` variables, integer coefficients.

    Terms map exponent tuples to nonzero ints.
    """

    __slots__ = ("nvars", "_c", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], int] | None = None):
        c = {}
        if terms:
            for e, v in terms.items():
                if v:
                    e = tuple(int(x) for x in e)
                    if len(e) != nvars:
                        raise DomainError(f"exponent {e} has length != {nvars}")
                    c[e] = c.get(e, 0) + int(v)
            c = _clean(c)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiLaurent is immutable")

    @classmethod
    def _raw(cls, nvars, c):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "_c", c)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def const(cls, nvars: int, c: int) -> "MultiLaurent":
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "MultiLaurent":
        exps = tuple(exps)
        return cls._raw(len(exps), {exps: coeff} if coeff else {})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiLaurent":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items(), key=lambda kv: glex_key(kv[0]))

    def coeff(self, exps: Sequence[int]) -> int:
        return self._c.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def _coerce(self, other):
        if isinstance(other, MultiLaurent):
            if other.nvars != self.nvars:
                raise DomainError("variable count mismatch")
            return other
        if isinstance(other, int):
            return MultiLaurent.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            nv = c.get(k, 0) + v
            if nv:
                c[k] = nv
            else:
                c.pop(k, None)
        return MultiLaurent._raw(self.nvars, c)

    __radd__ = __add__

    def __neg__(self):
        return MultiLaurent._raw(self.nvars, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self._c) * len(other._c) > 64:
            return MultiLaurent._raw(self.nvars, _packed_product(self._c, other._c, self.nvars))
        c: dict = {}
        get = c.get
        for e1, a in self._c.items():
            for e2, b in other._c.items():
                k = tuple(map(add, e1, e2))
                c[k] = get(k, 0) + a * b
        return MultiLaurent._raw(self.nvars, _clean(c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if abs(c) == 1:
                    return MultiLaurent._raw(self.nvars, {tuple(x * n for x in e): c ** (-n)})
            raise DomainError("negative power of a non-monomial")
        result = MultiLaurent.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiLaurent.const(self.nvars, other)
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        return self.nvars == other.nvars and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self._c.items()))))
        return self._hash

    # -- structure -------------------------------------------------------
    def min_exponents(self) -> tuple[int, ...]:
        return tuple(min(col) for col in zip(*self._c)) if self._c else (0,) * self.nvars

    def max_exponents(self) -> tuple[int, ...]:
        return tuple(max(col) for col in zip(*self._c)) if self._c else (0,) * self.nvars

    def is_polynomial_in(self, indices: Iterable[int]) -> bool:
        """True if no term has a negative exponent in any of ``indices``."""
        idx = list(indices)
        return all(e[i] >= 0 for e in self._c for i in idx)

    def specialize(self, values: Mapping[int, int]) -> "MultiLaurent":
        """Set the variables at the given indices to the given nonzero integers.

        The variable count is unchanged; specialised slots get exponent 0.
        Only the values 1 and -1 keep the result integral with negative
        exponents; other values require non-negative exponents.
        """
        c: dict = {}
        for e, v in self._c.items():
            e2 = list(e)
            for i, x in values.items():
                k = e2[i]
                e2[i] = 0
                if k:
                    if x in (1, -1):
                        v *= x ** abs(k)
                    elif k > 0:
                        v *= x ** k
                    else:
                        raise DomainError("non-unit specialisation of a negative power")
            key = tuple(e2)
            c[key] = c.get(key, 0) + v
        return MultiLaurent._raw(self.nvars, _clean(c))

    def drop(self, indices: Iterable[int]) -> "MultiLaurent":
        """Remove variables that no term depends on (exponent 0 everywhere)."""
        idx = sorted(set(indices))
        keep = [i for i in range(self.nvars) if i not in idx]
        c = {}
        for e, v in self._c.items():
            if any(e[i] for i in idx):
                raise DomainError("cannot drop a variable that occurs")
            c[tuple(e[i] for i in keep)] = v
        return MultiLaurent._raw(len(keep), c)

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiLaurent":
        """Place the variables of ``self`` at ``positions`` in a larger ring."""
        c = {}
        for e, v in self._c.items():
            e2 = [0] * nvars
            for p, x in zip(positions, e):
                e2[p] += x
            c[tuple(e2)] = c.get(tuple(e2), 0) + v
        return MultiLaurent._raw(nvars, _clean(c))

    def substitute(self, images: Sequence["MultiLaurent"]) -> "MultiLaurent":
        """Ring homomorphism sending variable i to ``images[i]``.

        Negative exponents require monomial images.
        """
        if len(images) != self.nvars:
            raise DomainError("need one image per variable")
        n = images[0].nvars if images else 0
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        out = MultiLaurent.const(n, 0)
        for e, v in self._c.items():
            term = MultiLaurent.const(n, v)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        point = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, v in self._c.items():
            t = Fraction(v)
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def divide_exact(self, other: "MultiLaurent") -> "MultiLaurent":
        """Exact division in the Laurent ring by leading-term elimination.

        Raises NotDivisible if ``other`` does not divide ``self``.  Quotient
        exponents are confined to the box ``[min(f)-min(g), max(f)-max(g)]``,
        which makes the elimination terminate.
        """
        if not other._c:
            raise ZeroDivisionError("division by zero")
        if not self._c:
            return MultiLaurent.const(self.nvars, 0)
        if len(other._c) == 1:
            (ge, gc), = other._c.items()
            c = {}
            for e, v in self._c.items():
                qv, r = divmod(v, gc)
                if r:
                    raise NotDivisible("coefficient not divisible")
                c[tuple(map(sub, e, ge))] = qv
            return MultiLaurent._raw(self.nvars, c)
        lo = tuple(map(sub, self.min_exponents(), other.min_exponents()))
        hi = tuple(map(sub, self.max_exponents(), other.max_exponents()))
        glead = max(other._c, key=glex_key)
        gcoef = other._c[glead]
        rem = dict(self._c)
        heap = [_neg_key(e) for e in rem]
        heapq.heapify(heap)
        quo = {}
        while rem:
            e = _from_neg_key(heapq.heappop(heap))
            if e not in rem:
                continue
            qe = tuple(map(sub, e, glead))
            if any(x < a or x > b for x, a, b in zip(qe, lo, hi)):
                raise NotDivisible("quotient term leaves the Newton box")
            qc, r = divmod(rem[e], gcoef)
            if r:
                raise NotDivisible("leading coefficient not divisible")
            quo[qe] = qc
            for ge, gv in other._c.items():
                k = tuple(map(add, qe, ge))
                old = rem.get(k)
                nv = (old or 0) - qc * gv
                if nv:
                    rem[k] = nv
                    if old is None:
                        heapq.heappush(heap, _neg_key(k))
                elif old is not None:
                    del rem[k]
        return MultiLaurent._raw(self.nvars, quo)

    # -- truncated-series support ----------------------------------------
    def weight(self, exps, weights) -> int:
        return sum(a * b for a, b in zip(exps, weights))

    def max_weight(self, weights) -> int:
        return max(sum(a * b for a, b in zip(e, weights)) for e in self._c)

    def truncate(self, weights, floor: int) -> "MultiLaurent":
        return MultiLaurent._raw(self.nvars, {
            e: v for e, v in self._c.items()
            if sum(a * b for a, b in zip(e, weights)) >= floor})

    def leading_split(self, weights):
        """Split into (max-weight part, remainder)."""
        top = self.max_weight(weights)
        lead, rest = {}, {}
        for e, v in self._c.items():
            (lead if sum(a * b for a, b in zip(e, weights)) == top else rest)[e] = v
        return MultiLaurent._raw(self.nvars, lead), MultiLaurent._raw(self.nvars, rest)

    def one(self) -> "MultiLaurent":
        return MultiLaurent.const(self.nvars, 1)

    def mul_truncated(self, other, weights, floor):
        """Product keeping only terms of weight >= floor."""
        ow = [(e, v, sum(a * b for a, b in zip(e, weights))) for e, v in other._c.items()]
        c: dict = {}
        get = c.get
        for e1, a in self._c.items():
            w1 = sum(x * y for x, y in zip(e1, weights))
            for e2, b, w2 in ow:
                if w1 + w2 >= floor:
                    k = tuple(map(add, e1, e2))
                    c[k] = get(k, 0) + a * b
        return MultiLaurent._raw(self.nvars, _clean(c))

    # -- text ------------------------------------------------------------
    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        return _format_terms(self.items(), names)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiLaurent({self.nvars}, {self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "MultiLaurent":
        names = list(names)
        n = len(names)
        return parse_expression(
            text,
            make_int=lambda k: cls.const(n, k),
            make_var=lambda name: cls.variable(_expect_name(name, names) - 1, n),
        )


def _packed_product(c1: dict, c2: dict, n: int) -> dict:
    """Sparse product with exponent vectors packed into single ints."""
    lo1 = [min(col) for col in zip(*c1)]
    lo2 = [min(col) for col in zip(*c2)]
    span = [max(col) - a + 1 for col, a in zip(zip(*c1), lo1)]
    span = [s + max(col) - a for s, col, a in zip(span, zip(*c2), lo2)]
    radix = [1] * n
    for i in range(1, n):
        radix[i] = radix[i - 1] * span[i - 1]

    def pack(c, lo):
        return [(sum((x - l) * r for x, l, r in zip(e, lo, radix)), v) for e, v in c.items()]

    p1, p2 = pack(c1, lo1), pack(c2, lo2)
    acc: dict = {}
    get = acc.get
    for k1, a in p1:
        for k2, b in p2:
            k = k1 + k2
            acc[k] = get(k, 0) + a * b
    base = [a + b for a, b in zip(lo1, lo2)]
    out = {}
    for k, v in acc.items():
        if v:
            e = []
            for s, l in zip(span, base):
                k, d = divmod(k, s)
                e.append(d + l)
            out[tuple(e)] = v
    return out


def _neg_key(e):
    return (-sum(e), tuple(-x for x in e))


def _from_neg_key(k):
    return tuple(-x for x in k[1])


# ---------------------------------------------------------------------------
# text formatting and parsing


def _format_monomial(exps, names):
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _format_terms(items, names) -> str:
    out = []
    for exps, c in items:
        mono = _format_monomial(exps, names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out) if out else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _expect_name(name, names):
    if name not in names:
        raise DomainError(f"unknown variable {name!r}")
    return names.index(name) + 1


def _tokenize(text):
    pos, toks = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            toks.append(("int", int(m.group(1))))
        elif m.group(2):
            toks.append(("name", m.group(2)))
        else:
            toks.append(("op", m.group(3)))
    return toks


def parse_expression(text: str, make_int: Callable, make_var: Callable):
    """Parse a sum of products of integers, names and powers.

    ``make_int`` and ``make_var`` build ring elements; the ring must
    support +, -, * and ** (negative powers of monomials).
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise DomainError(f"cannot parse polynomial text {text!r}")
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        val = term()
        if sign < 0:
            val = -val
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() == ("op", "*"):
            take()
            val = val * factor()
        return val

    def factor():
        kind, v = peek()
        if kind == "int":
            take()
            base = make_int(v)
        elif kind == "name":
            take()
            base = make_var(v)
        elif (kind, v) == ("op", "("):
            take()
            base = expr()
            take("op", ")")
        else:
            raise DomainError(f"cannot parse polynomial text {text!r}")
        if peek() == ("op", "^"):
            take()
            neg = False
            if peek() == ("op", "-"):
                take()
                neg = True
            k = take("int")[1]
            base = base ** (-k if neg else k)
        return base

    if not toks:
        raise DomainError("empty polynomial text")
    result = expr()
    if pos != len(toks):
        raise DomainError(f"trailing input in polynomial text {text!r}")
    return result
