"""
Sparse multivariate Laurent polynomials with integer coefficients
Elements of the group ring Z[Q] of a free abelian group Q of finite rank
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import InputError, RankMismatchError

Monomial = Tuple[int, ...]


def default_variable_names(rank: int) -> List[str]:
    """Names used when a polynomial is rendered without a name table"""
    if rank == 1:
        return ["s"]
    if rank == 2:
        return ["s", "t"]
    return [f"q{i}" for i in range(rank)]


class LaurentPoly:
    """Immutable Laurent polynomial over Z in `rank` invertible variables.

    Terms are kept as a map from exponent vectors to nonzero integers, with
    keys stored in lexicographic order so that equal polynomials have equal
    term maps.
    """

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Optional[Dict[Monomial, int]] = None):
        if rank < 0:
            raise InputError(f"rank must be non-negative, got {rank}")
        clean: Dict[Monomial, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != rank:
                raise InputError(f"monomial {exps} does not have rank {rank}")
            if coeff:
                clean[exps] = clean.get(exps, 0) + int(coeff)
        self.rank = rank
        self.terms = {k: clean[k] for k in sorted(clean) if clean[k] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, rank: int, terms: Dict[Monomial, int]) -> "LaurentPoly":
        """Build from an already validated term map, dropping zeros"""
        poly = object.__new__(cls)
        poly.rank = rank
        poly.terms = {k: terms[k] for k in sorted(terms) if terms[k] != 0}
        poly._hash = None
        return poly

    # Constructors

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, value: int, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {(0,) * rank: int(value)})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(1, rank)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        exps = tuple(int(e) for e in exps)
        return cls._raw(len(exps), {exps: int(coeff)})

    @classmethod
    def variable(cls, index: int, rank: int) -> "LaurentPoly":
        if not 0 <= index < rank:
            raise InputError(f"variable index {index} out of range for rank {rank}")
        exps = [0] * rank
        exps[index] = 1
        return cls.monomial(exps)

    @classmethod
    def univariate(cls, coeffs: Dict[int, int], var: int, rank: int) -> "LaurentPoly":
        """Polynomial sum(c * x_var^k) from a degree -> coefficient map"""
        terms = {}
        for k, c in coeffs.items():
            exps = [0] * rank
            exps[var] = k
            terms[tuple(exps)] = c
        return cls(rank, terms)

    # Predicates

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (len(self.terms) == 1 and (0,) * self.rank in self.terms)

    @property
    def is_unit(self) -> bool:
        """Units of Z[Q] are exactly the monomials with coefficient +1 or -1"""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.rank, 0)

    def variables(self) -> List[int]:
        """Indices of variables occurring with a nonzero exponent"""
        used = set()
        for exps in self.terms:
            used.update(i for i, e in enumerate(exps) if e)
        return sorted(used)

    def is_univariate_in(self, var: int) -> bool:
        return all(e == 0 for exps in self.terms for i, e in enumerate(exps) if i != var)

    # Arithmetic

    def _check_rank(self, other: "LaurentPoly"):
        if self.rank != other.rank:
            raise RankMismatchError(f"rank mismatch: {self.rank} vs {other.rank}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check_rank(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.rank)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return LaurentPoly._raw(self.rank, terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly._raw(self.rank, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        terms: Dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return LaurentPoly._raw(self.rank, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit:
                raise InputError("only units have negative powers")
            (exps, c), = self.terms.items()
            return LaurentPoly.monomial([e * n for e in exps], c ** (-n))
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector `exps`"""
        return LaurentPoly._raw(
            self.rank,
            {tuple(a + b for a, b in zip(k, exps)): c for k, c in self.terms.items()})

    def unit_inverse(self) -> "LaurentPoly":
        return self ** -1

    def invert_variable(self, var: int) -> "LaurentPoly":
        """Apply the ring automorphism x_var -> x_var^-1"""
        return LaurentPoly._raw(
            self.rank,
            {tuple(-e if i == var else e for i, e in enumerate(k)): c
             for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_constant and self.constant_term() == other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # Degree data

    def degree_bounds(self, var: int) -> Tuple[int, int]:
        if self.is_zero:
            raise InputError("the zero polynomial has no degree")
        degrees = [k[var] for k in self.terms]
        return min(degrees), max(degrees)

    def span(self, var: int) -> int:
        lo, hi = self.degree_bounds(var)
        return hi - lo

    def total_span(self) -> int:
        return sum(self.span(v) for v in range(self.rank)) if self.terms else 0

    def min_exponents(self) -> Monomial:
        return tuple(min(k[i] for k in self.terms) for i in range(self.rank))

    def slice(self, var: int, degree: int) -> "LaurentPoly":
        """Coefficient of x_var^degree, a polynomial in the other variables"""
        out = {}
        for k, c in self.terms.items():
            if k[var] == degree:
                out[k[:var] + (0,) + k[var + 1:]] = c
        return LaurentPoly._raw(self.rank, out)

    def support(self) -> Dict[Monomial, int]:
        return dict(self.terms)

    def extremal_coeff(self, var: int, end: str) -> int:
        """Leading or trailing coefficient of a polynomial univariate in `var`"""
        if self.is_zero:
            raise InputError("extremal coefficient of the zero polynomial")
        if not self.is_univariate_in(var):
            raise InputError(f"polynomial is not univariate in variable {var}")
        lo, hi = self.degree_bounds(var)
        if end == "leading":
            return self.slice(var, hi).constant_term()
        if end == "trailing":
            return self.slice(var, lo).constant_term()
        raise InputError(f"unknown end '{end}', expected 'leading' or 'trailing'")

    # Division

    def divide_exact(self, den: "LaurentPoly") -> Optional["LaurentPoly"]:
        """Return q with q * den == self, or None when den does not divide self"""
        self._check_rank(den)
        if den.is_zero:
            raise InputError("division by the zero polynomial")
        if self.is_zero:
            return LaurentPoly.zero(self.rank)
        num_lo = self.min_exponents()
        den_lo = den.min_exponents()
        remainder = dict(self.shift([-e for e in num_lo]).terms)
        divisor = den.shift([-e for e in den_lo]).terms
        lead = max(divisor)
        lead_coeff = divisor[lead]
        quotient: Dict[Monomial, int] = {}
        while remainder:
            top = max(remainder)
            coeff = remainder[top]
            delta = tuple(a - b for a, b in zip(top, lead))
            if any(d < 0 for d in delta) or coeff % lead_coeff:
                return None
            factor = coeff // lead_coeff
            quotient[delta] = factor
            for exps, c in divisor.items():
                key = tuple(a + b for a, b in zip(exps, delta))
                value = remainder.get(key, 0) - factor * c
                if value:
                    remainder[key] = value
                else:
                    remainder.pop(key, None)
        result = LaurentPoly._raw(self.rank, quotient)
        return result.shift([a - b for a, b in zip(num_lo, den_lo)])

    def div_rem(self, divisor: "LaurentPoly", var: int) -> Tuple["LaurentPoly", "LaurentPoly"]:
        """Division with remainder in `var` by a divisor whose top coefficient is a unit.

        Returns (q, r) with self == q * divisor + r and r zero or of smaller
        span in `var` than the divisor.
        """
        self._check_rank(divisor)
        if divisor.is_zero:
            raise InputError("division by the zero polynomial")
        lo, hi = divisor.degree_bounds(var)
        lead = divisor.slice(var, hi)
        if not lead.is_unit:
            raise InputError("leading coefficient of the divisor is not a unit")
        lead_inv = lead.unit_inverse()
        width = hi - lo
        quotient = LaurentPoly.zero(self.rank)
        remainder = self
        while remainder:
            r_lo, r_hi = remainder.degree_bounds(var)
            if r_hi - r_lo < width:
                break
            exps = [0] * self.rank
            exps[var] = r_hi - hi
            term = (remainder.slice(var, r_hi) * lead_inv).shift(exps)
            quotient = quotient + term
            remainder = remainder - term * divisor
        return quotient, remainder

    def eliminate(self, var: int, root: "LaurentPoly") -> List["LaurentPoly"]:
        """Reduce modulo a unit-extremal polynomial univariate in `var`.

        The quotient by `root` is free over the remaining variables with basis
        1, x, ..., x^(m-1), m the span of `root`; the result lists the
        coefficients of self in that basis.
        """
        self._check_rank(root)
        if root.is_zero or not root.is_univariate_in(var):
            raise InputError(f"elimination polynomial must be univariate in variable {var}")
        lo, hi = root.degree_bounds(var)
        lead = root.slice(var, hi).constant_term()
        trail = root.slice(var, lo).constant_term()
        if abs(lead) != 1 or abs(trail) != 1:
            raise InputError("elimination polynomial has non-unit extremal coefficients")
        width = hi - lo
        if width == 0:
            return []
        base = root.shift([-lo if i == var else 0 for i in range(self.rank)])
        reduced = self
        while reduced:
            r_lo, r_hi = reduced.degree_bounds(var)
            if r_hi >= width:
                degree, factor = r_hi, lead
                offset = r_hi - width
            elif r_lo < 0:
                degree, factor = r_lo, trail
                offset = r_lo
            else:
                break
            exps = [0] * self.rank
            exps[var] = offset
            reduced = reduced - (reduced.slice(var, degree) * factor).shift(exps) * base
        return [reduced.slice(var, i) for i in range(width)]

    # Rendering

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = list(names) if names is not None else default_variable_names(self.rank)
        if len(names) < self.rank:
            raise InputError(f"need {self.rank} variable names, got {len(names)}")
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        pieces = []
        for position, (exps, coeff) in enumerate(ordered):
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            magnitude = abs(coeff)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if position == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()!r}, rank={self.rank})"


def arith(a: LaurentPoly, b: Optional[LaurentPoly], kind: str) -> LaurentPoly:
    """Ring operation by name: add, sub, mul or neg"""
    if kind == "neg":
        return -a
    if b is None:
        raise InputError(f"operation '{kind}' needs two operands")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise InputError(f"unknown ring operation '{kind}'")


def divide_exact(num: LaurentPoly, den: LaurentPoly) -> Optional[LaurentPoly]:
    return num.divide_exact(den)


def support(f: LaurentPoly) -> Dict[Monomial, int]:
    return f.support()


def extremal_coeff(f: LaurentPoly, var: int, end: str) -> int:
    return f.extremal_coeff(var, end)


def eliminate(f: LaurentPoly, var: int, unit_root_poly: LaurentPoly) -> List[LaurentPoly]:
    return f.eliminate(var, unit_root_poly)


def poly_sum(polys: Iterable[LaurentPoly], rank: int) -> LaurentPoly:
    total = LaurentPoly.zero(rank)
    for p in polys:
        total = total + p
    return total
