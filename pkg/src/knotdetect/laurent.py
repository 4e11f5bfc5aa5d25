"""Exact Laurent polynomials in one and two variables with integer coefficients.

Values are immutable and hashable.  ``canonical_string`` is the bucketing key
used by the detection harness, so it must be injective on values.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping


class VariableMismatch(ValueError):
    pass


def _clean(terms: Iterable[tuple[object, int]]) -> dict:
    out: dict = {}
    for e, c in terms:
        if c:
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _fmt_coef_sep(first: bool, c: int) -> str:
    if first:
        return str(c)
    return f"+{c}" if c > 0 else str(c)


class LaurentPoly1:
    """Laurent polynomial in a single variable, stored as ``{exponent: coefficient}``."""

    __slots__ = ("var", "_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = (), var: str = "q"):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self._terms = _clean((int(e), int(c)) for e, c in items)
        self.var = var
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coef: int = 1, var: str = "q") -> "LaurentPoly1":
        return cls({exp: coef}, var)

    @classmethod
    def constant(cls, c: int, var: str = "q") -> "LaurentPoly1":
        return cls({0: c}, var)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def _coerce(self, other) -> "LaurentPoly1":
        if isinstance(other, LaurentPoly1):
            if other.var != self.var and other._terms and self._terms:
                # constants carry no variable information
                if not (other.is_constant() or self.is_constant()):
                    raise VariableMismatch(f"{self.var} vs {other.var}")
            return other
        if isinstance(other, int):
            return LaurentPoly1({0: other}, self.var)
        return NotImplemented

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._terms)

    def _result_var(self, other: "LaurentPoly1") -> str:
        if self.is_constant() and not other.is_constant():
            return other.var
        return self.var

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly1(list(self._terms.items()) + list(other._terms.items()), self._result_var(other))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly1":
        return LaurentPoly1({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly1(out, self._result_var(other))

    __rmul__ = __mul__

    def scalar_mul(self, k: int) -> "LaurentPoly1":
        return LaurentPoly1({e: k * c for e, c in self._terms.items()}, self.var)

    def __pow__(self, n: int) -> "LaurentPoly1":
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("monomial coefficient is not a unit")
            return LaurentPoly1({-e * (-n): c ** (-n)}, self.var)
        result = LaurentPoly1({0: 1}, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly1":
        """Multiply by ``var**k``."""
        return LaurentPoly1({e + k: c for e, c in self._terms.items()}, self.var)

    def substitute(self, sign: int = 1, power: int = 1, var: str | None = None) -> "LaurentPoly1":
        """Apply ``var -> sign * newvar**power``; ``power=-1`` is the bar involution."""
        return LaurentPoly1(
            {e * power: c * (sign ** (e % 2)) for e, c in self._terms.items()},
            self.var if var is None else var,
        )

    def evaluate(self, x):
        """Evaluate at a number; negative exponents need an invertible ``x`` (int or Fraction)."""
        from fractions import Fraction

        total = Fraction(0)
        for e, c in self._terms.items():
            total += c * Fraction(x) ** e
        return total

    def divide_exact(self, divisor: "LaurentPoly1") -> "LaurentPoly1":
        """Exact division; raises ``ValueError`` if ``divisor`` does not divide ``self``."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly1({}, self.var)
        rem = dict(self._terms)
        dlead = divisor.max_exp()
        dmin = divisor.min_exp()
        lc = divisor._terms[dlead]
        quot: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top - dlead < min(rem) - dmin:
                break
            c = rem[top]
            if c % lc:
                raise ValueError("not divisible over the integers")
            qc = c // lc
            qe = top - dlead
            quot[qe] = qc
            for e, dc in divisor._terms.items():
                k = e + qe
                v = rem.get(k, 0) - qc * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        if rem:
            raise ValueError("not divisible")
        return LaurentPoly1(quot, self.var)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        if not isinstance(other, LaurentPoly1):
            return NotImplemented
        if self._terms != other._terms:
            return False
        return self.var == other.var or self.is_constant()

    def __hash__(self) -> int:
        if self._hash is None:
            key = frozenset(self._terms.items())
            self._hash = hash((self.var if not self.is_constant() else None, key))
        return self._hash

    def canonical_string(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.items()):
            parts.append(f"{_fmt_coef_sep(i == 0, c)}*{self.var}^{e}")
        return "".join(parts)

    def to_json(self) -> str:
        return json.dumps({"var": self.var, "terms": [[e, str(c)] for e, c in self.items()]})

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly1":
        obj = json.loads(text)
        return cls({int(e): int(c) for e, c in obj["terms"]}, obj["var"])

    def __repr__(self) -> str:
        return f"LaurentPoly1({self.canonical_string()!r})"


class LaurentPoly2:
    """Laurent polynomial in two variables, stored as ``{(i, j): coefficient}``."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = (), vars: tuple[str, str] = ("a", "q")):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self._terms = _clean(((int(e[0]), int(e[1])), int(c)) for e, c in items)
        self.vars = tuple(vars)
        self._hash = None

    @classmethod
    def monomial(cls, i: int, j: int, coef: int = 1, vars=("a", "q")) -> "LaurentPoly2":
        return cls({(i, j): coef}, vars)

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, i: int, j: int) -> int:
        return self._terms.get((i, j), 0)

    def _coerce(self, other) -> "LaurentPoly2":
        if isinstance(other, LaurentPoly2):
            if other.vars != self.vars:
                raise VariableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, int):
            return LaurentPoly2({(0, 0): other}, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly2(list(self._terms.items()) + list(other._terms.items()), self.vars)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({e: -c for e, c in self._terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly2(out, self.vars)

    __rmul__ = __mul__

    def scalar_mul(self, k: int) -> "LaurentPoly2":
        return LaurentPoly2({e: k * c for e, c in self._terms.items()}, self.vars)

    def __pow__(self, n: int) -> "LaurentPoly2":
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPoly2({(0, 0): 1}, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, var: str, sign: int = 1, power: int = 1) -> LaurentPoly1:
        """Eliminate ``var`` via ``var -> sign * other**power``, returning a polynomial in the other variable."""
        if var not in self.vars:
            raise VariableMismatch(f"{var} not in {self.vars}")
        k = self.vars.index(var)
        other = self.vars[1 - k]
        out: dict[int, int] = {}
        for e, c in self._terms.items():
            ev, eo = e[k], e[1 - k]
            exp = eo + power * ev
            out[exp] = out.get(exp, 0) + c * (sign ** (ev % 2))
        return LaurentPoly1(out, other)

    def map_exponents(self, fi: int = 1, fj: int = 1, si: int = 1, sj: int = 1) -> "LaurentPoly2":
        """Apply ``x -> si * x**fi``, ``y -> sj * y**fj`` for the two variables."""
        return LaurentPoly2(
            {(i * fi, j * fj): c * (si ** (i % 2)) * (sj ** (j % 2)) for (i, j), c in self._terms.items()},
            self.vars,
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({(0, 0): other} if other else {})
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def canonical_string(self) -> str:
        if not self._terms:
            return "0"
        x, y = self.vars
        parts = []
        for n, ((i, j), c) in enumerate(self.items()):
            parts.append(f"{_fmt_coef_sep(n == 0, c)}*{x}^{i}*{y}^{j}")
        return "".join(parts)

    def to_json(self) -> str:
        return json.dumps({"var": list(self.vars), "terms": [[i, j, str(c)] for (i, j), c in self.items()]})

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly2":
        obj = json.loads(text)
        return cls({(int(i), int(j)): int(c) for i, j, c in obj["terms"]}, tuple(obj["var"]))

    def __repr__(self) -> str:
        return f"LaurentPoly2({self.canonical_string()!r})"


def canonical_string(p) -> str:
    return p.canonical_string()
