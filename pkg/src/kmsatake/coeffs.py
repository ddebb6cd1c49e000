"""Exact Laurent polynomials in the parameter variables.

A :class:`ParamCoeff` is a sparse map from integer exponent tuples (aligned to a
sorted tuple of variable names) to integer or rational coefficients.

>>> s = ParamCoeff.var("σ")
>>> (s - s**-1) * (s + s**-1) == s**2 - s**-2
True
>>> str(ParamCoeff.var("√q", 2) - 1)
'q - 1'
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class ParamCoeff:
    """Laurent polynomial over the integers (rationals after numeric specialization)."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple, Number] | None = None, vars: Iterable[str] = ()):
        vars = tuple(vars)
        if list(vars) != sorted(set(vars)):
            order = sorted(range(len(vars)), key=lambda k: vars[k])
            if len(set(vars)) != len(vars):
                raise ValueError(f"repeated variable in {vars}")
            terms = {tuple(m[k] for k in order): c for m, c in (terms or {}).items()}
            vars = tuple(vars[k] for k in order)
        self.vars = vars
        self.terms = {}
        for m, c in (terms or {}).items():
            if len(m) != len(vars):
                raise ValueError("exponent length does not match variables")
            if c:
                self.terms[tuple(m)] = _norm(c)

    @classmethod
    def _raw(cls, vars, terms):
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    # constructors

    @classmethod
    def const(cls, c: Number, vars: Iterable[str] = ()) -> "ParamCoeff":
        vars = tuple(sorted(vars))
        return cls._raw(vars, {(0,) * len(vars): _norm(c)} if c else {})

    @classmethod
    def zero(cls, vars: Iterable[str] = ()) -> "ParamCoeff":
        return cls._raw(tuple(sorted(vars)), {})

    @classmethod
    def one(cls, vars: Iterable[str] = ()) -> "ParamCoeff":
        return cls.const(1, vars)

    @classmethod
    def var(cls, name: str, exp: int = 1, vars: Iterable[str] = ()) -> "ParamCoeff":
        return cls.monomial({name: exp}, 1, vars)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Number = 1,
                 vars: Iterable[str] = ()) -> "ParamCoeff":
        allv = tuple(sorted(set(vars) | set(exps)))
        m = tuple(exps.get(v, 0) for v in allv)
        return cls._raw(allv, {m: _norm(coeff)} if coeff else {})

    @classmethod
    def coerce(cls, x, vars: Iterable[str] = ()) -> "ParamCoeff":
        if isinstance(x, ParamCoeff):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x, vars)
        if isinstance(x, Rational):
            return cls.const(Fraction(x), vars)
        raise TypeError(f"cannot coerce {type(x).__name__} to ParamCoeff")

    # variable alignment

    def with_vars(self, vars: tuple) -> "ParamCoeff":
        """Re-express over a sorted superset of variables (or drop unused ones)."""
        if vars == self.vars:
            return self
        pos = {v: k for k, v in enumerate(vars)}
        for k, v in enumerate(self.vars):
            if v not in pos and any(m[k] for m in self.terms):
                raise ValueError(f"variable {v} is in use")
        idx = [(k, pos[v]) for k, v in enumerate(self.vars) if v in pos]
        out = {}
        n = len(vars)
        for m, c in self.terms.items():
            e = [0] * n
            for k, p in idx:
                e[p] = m[k]
            out[tuple(e)] = c
        return ParamCoeff._raw(vars, out)

    def used_vars(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vars) if any(m[k] for m in self.terms))

    def trim(self) -> "ParamCoeff":
        return self.with_vars(self.used_vars())

    @staticmethod
    def _align(a: "ParamCoeff", b: "ParamCoeff"):
        if a.vars == b.vars:
            return a, b
        vars = tuple(sorted(set(a.vars) | set(b.vars)))
        return a.with_vars(vars), b.with_vars(vars)

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, ParamCoeff):
            if not other:
                return self
            other = ParamCoeff.const(other, self.vars)
        a, b = ParamCoeff._align(self, other)
        out = dict(a.terms)
        for m, c in b.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return ParamCoeff._raw(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamCoeff._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ParamCoeff):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ParamCoeff._raw(self.vars, {})
                return ParamCoeff._raw(self.vars, {m: _norm(c * other) for m, c in self.terms.items()})
            return NotImplemented
        a, b = ParamCoeff._align(self, other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        if len(b.terms) == 1:
            ((mb, cb),) = b.terms.items()
            if not any(mb):
                return ParamCoeff._raw(a.vars, {m: c * cb for m, c in a.terms.items()})
            return ParamCoeff._raw(
                a.vars, {tuple(x + y for x, y in zip(m, mb)): c * cb for m, c in a.terms.items()})
        for mb, cb in b.terms.items():
            for ma, ca in a.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        return ParamCoeff._raw(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ParamCoeff.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_unit(self) -> bool:
        """A single monomial with coefficient ±1 (or any nonzero rational constant multiple)."""
        return len(self.terms) == 1

    def inverse(self) -> "ParamCoeff":
        if len(self.terms) != 1:
            raise ZeroDivisionError(f"{self} is not a unit monomial")
        ((m, c),) = self.terms.items()
        inv = Fraction(1, 1) / c
        if isinstance(c, int) and c not in (1, -1):
            raise ZeroDivisionError(f"{self} is not a unit over the integers")
        return ParamCoeff._raw(self.vars, {tuple(-x for x in m): _norm(inv)})

    def exact_div(self, other: "ParamCoeff", max_steps: int = 100000) -> "ParamCoeff":
        """Exact quotient ``self / other`` by lexicographic leading-term division."""
        other = ParamCoeff.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        a, d = ParamCoeff._align(self, other)
        dm = max(d.terms)
        dc = d.terms[dm]
        quot = ParamCoeff.zero(a.vars)
        rem = a
        if rem.is_zero():
            return quot
        # lex order is a group order, so every quotient monomial is >= min(a) - min(d)
        floor = tuple(x - y for x, y in zip(min(a.terms), min(d.terms)))
        for _ in range(max_steps):
            if rem.is_zero():
                return quot
            rm = max(rem.terms)
            rc = rem.terms[rm]
            tm = tuple(x - y for x, y in zip(rm, dm))
            if tm < floor or (isinstance(rc, int) and isinstance(dc, int) and rc % dc):
                raise ArithmeticError(f"{self} is not divisible by {other}")
            t = ParamCoeff._raw(a.vars, {tm: _norm(Fraction(rc) / dc)})
            quot = quot + t
            rem = rem - t * d
        raise ArithmeticError(f"{self} is not divisible by {other}")

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, ParamCoeff):
            try:
                other = ParamCoeff.coerce(other)
            except TypeError:
                return NotImplemented
        a, b = ParamCoeff._align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items())))

    # structure

    def degree_range(self, names: Iterable[str] | None = None) -> tuple[int, int]:
        """(min, max) total degree in the given variables (all by default)."""
        names = set(self.vars if names is None else names)
        idx = [k for k, v in enumerate(self.vars) if v in names]
        degs = [sum(m[k] for k in idx) for m in self.terms]
        if not degs:
            return (0, 0)
        return (min(degs), max(degs))

    def truncate_degree(self, names: Iterable[str], dmax: int) -> "ParamCoeff":
        """Drop monomials whose total degree in ``names`` exceeds ``dmax``."""
        names = set(names)
        idx = [k for k, v in enumerate(self.vars) if v in names]
        return ParamCoeff._raw(self.vars, {m: c for m, c in self.terms.items()
                                           if sum(m[k] for k in idx) <= dmax})

    def substitute(self, mapping: Mapping[str, object]) -> "ParamCoeff":
        """Replace variables by ParamCoeffs or rationals; negative powers need units."""
        for v in mapping:
            if v not in self.vars:
                raise KeyError(f"unknown variable {v!r}; have {self.vars}")
        keep = tuple(v for v in self.vars if v not in mapping)
        kidx = [k for k, v in enumerate(self.vars) if v not in mapping]
        sidx = [(k, ParamCoeff.coerce(mapping[v]) if not isinstance(mapping[v], (int, Fraction))
                 else mapping[v]) for k, v in enumerate(self.vars) if v in mapping]
        out = ParamCoeff.zero(keep)
        powcache: dict = {}
        for m, c in self.terms.items():
            term = ParamCoeff._raw(keep, {tuple(m[k] for k in kidx): c})
            for k, val in sidx:
                e = m[k]
                if e == 0:
                    continue
                key = (k, e)
                if key not in powcache:
                    if isinstance(val, ParamCoeff):
                        powcache[key] = val ** e
                    else:
                        if val == 0 and e < 0:
                            raise ZeroDivisionError("negative power of zero")
                        powcache[key] = Fraction(val) ** e
                term = term * powcache[key]
            out = out + term
        return out

    def rename_square(self, name: str, new: str) -> "ParamCoeff":
        """Rewrite ``name**2`` as ``new``; all exponents of ``name`` must be even."""
        if name not in self.vars:
            raise KeyError(f"unknown variable {name!r}")
        k = self.vars.index(name)
        if any(m[k] % 2 for m in self.terms):
            raise ValueError(f"odd power of {name} cannot be renamed to {new}")
        if new in self.vars and new != name:
            raise ValueError(f"variable {new} already present")
        vars = list(self.vars)
        vars[k] = new
        terms = {}
        for m, c in self.terms.items():
            e = list(m)
            e[k] //= 2
            terms[tuple(e)] = c
        return ParamCoeff(terms, vars)

    def evaluate(self, values: Mapping[str, Number]) -> Number:
        v = self.substitute({k: values[k] for k in self.vars if k in values})
        return v.constant_value()

    def coefficients(self) -> list:
        return [self.terms[m] for m in sorted(self.terms)]

    # serialization

    def to_json(self) -> list:
        out = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = {v: e for v, e in zip(self.vars, m) if e}
            out.append({"mono": mono, "int": c if isinstance(c, int) else f"{c.numerator}/{c.denominator}"})
        return out

    @classmethod
    def from_json(cls, data: list, vars: Iterable[str] = ()) -> "ParamCoeff":
        allv = set(vars)
        for t in data:
            allv |= set(t["mono"])
        allv = tuple(sorted(allv))
        terms = {}
        for t in data:
            c = t["int"]
            c = Fraction(c) if isinstance(c, str) else c
            terms[tuple(t["mono"].get(v, 0) for v in allv)] = c
        return cls(terms, allv)

    # display

    def __repr__(self):
        return f"ParamCoeff({self})"

    def __str__(self):
        return format_coeff(self)


def _fmt_power(name: str, e: int) -> str:
    if name.startswith("√"):
        base = name[1:]
        if e % 2 == 0:
            p = e // 2
            return base if p == 1 else f"{base}^{p}" if p > 0 else f"{base}^({p})"
        return f"{base}^({e}/2)"
    if e == 1:
        return name
    return f"{name}^{e}" if e > 0 else f"{name}^({e})"


def format_coeff(pc: ParamCoeff) -> str:
    """Human-readable form, highest monomials first."""
    if not pc.terms:
        return "0"
    parts = []
    for m in sorted(pc.terms, reverse=True):
        c = pc.terms[m]
        mono = "·".join(_fmt_power(v, e) for v, e in zip(pc.vars, m) if e)
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if mono:
            body = mono if a == 1 else f"{a}·{mono}"
        else:
            body = str(a)
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
