"""Modified complex conjugation on a closed family of analytic functions.

Functions are finite sums of terms

    c * prod_v v**k_v * exp(Q)

where ``Q`` is a polynomial of degree one or two without constant part and the
variables ``v`` are named parameters or their conjugates (written ``q*``).
The family is closed under addition, multiplication, differentiation and the
modified conjugate ``*_A``, which conjugates the numeric coefficients and
replaces every parameter outside ``A`` by its conjugate.  Parameters in ``A``
keep their analytic dependence.

Equality is equality of the canonical form: like terms merged, zero terms
dropped, terms sorted by monomial and exponent.
"""

from __future__ import annotations

import numbers
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

Monomial = tuple  # ((var, power), ...) sorted by var


class ConjugationError(ValueError):
    pass


def base_name(var: str) -> str:
    return var[:-1] if var.endswith("*") else var


def partner(var: str) -> str:
    return var[:-1] if var.endswith("*") else var + "*"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers = dict(a)
    for v, k in b:
        powers[v] = powers.get(v, 0) + k
    return tuple(sorted((v, k) for v, k in powers.items() if k))


def _mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def _mono_rename(m: Monomial, keep: frozenset) -> Monomial:
    return tuple(sorted((v if base_name(v) in keep else partner(v), k) for v, k in m))


def _mono_diff(m: Monomial, var: str):
    """(factor, monomial) of d/dvar, or None when var is absent."""
    powers = dict(m)
    k = powers.get(var, 0)
    if not k:
        return None
    powers[var] = k - 1
    return k, tuple(sorted((v, p) for v, p in powers.items() if p))


def _clean(c: complex) -> complex:
    # -0.0 and 0.0 must canonicalise identically
    return complex(c.real + 0.0, c.imag + 0.0)


def _poly_canonical(items: Iterable) -> tuple:
    acc: dict = {}
    for m, c in items:
        acc[m] = acc.get(m, 0j) + c
    return tuple(sorted((m, _clean(c)) for m, c in acc.items() if c != 0))


def _poly_key(p: tuple) -> tuple:
    return tuple((m, (c.real, c.imag)) for m, c in p)


@dataclass(frozen=True)
class Term:
    coeff: complex
    mono: Monomial = ()
    expo: tuple = ()  # ((monomial, coeff), ...), degree 1..2

    def key(self):
        return (self.mono, _poly_key(self.expo))


class AnalyticFunction:
    """Immutable element of the polynomial-times-Gaussian family."""

    __slots__ = ("terms", "_params")

    def __init__(self, terms: Iterable[Term] = (), params: Iterable[str] = ()):
        acc: dict = {}
        for t in terms:
            k = (t.mono, t.expo)
            acc[k] = acc.get(k, 0j) + complex(t.coeff)
        merged = [Term(_clean(c), m, e) for (m, e), c in acc.items() if c != 0]
        merged.sort(key=Term.key)
        self.terms = tuple(merged)
        names = set(params)
        for t in self.terms:
            names.update(base_name(v) for v, _ in t.mono)
            for m, _ in t.expo:
                names.update(base_name(v) for v, _ in m)
        self._params = tuple(sorted(names))

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, c: complex, params: Iterable[str] = ()) -> "AnalyticFunction":
        return cls([Term(complex(c))], params)

    @classmethod
    def var(cls, name: str) -> "AnalyticFunction":
        return cls([Term(1 + 0j, ((name, 1),))])

    @classmethod
    def exp(cls, exponent: "AnalyticFunction") -> "AnalyticFunction":
        """exp of a polynomial of degree <= 2 (no exponential factors)."""
        exponent = _lift(exponent)
        const = 0j
        items = []
        for t in exponent.terms:
            if t.expo:
                raise ConjugationError("exponent must be a polynomial")
            deg = _mono_degree(t.mono)
            if deg > 2:
                raise ConjugationError("exponent must have degree <= 2")
            if deg == 0:
                const += t.coeff
            else:
                items.append((t.mono, t.coeff))
        return cls([Term(complex(np.exp(const)), (), _poly_canonical(items))], exponent.parameters)

    # structure --------------------------------------------------------
    @property
    def parameters(self) -> tuple:
        return self._params

    @property
    def variables(self) -> tuple:
        names = set()
        for t in self.terms:
            names.update(v for v, _ in t.mono)
            for m, _ in t.expo:
                names.update(v for v, _ in m)
        return tuple(sorted(names))

    def canonical(self) -> tuple:
        return tuple((t.mono, t.expo, (t.coeff.real, t.coeff.imag)) for t in self.terms)

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = AnalyticFunction.constant(other)
        if not isinstance(other, AnalyticFunction):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def almost_equal(self, other: "AnalyticFunction", tol: float = 1e-12) -> bool:
        """Same term structure with coefficients within ``tol`` (relative)."""
        other = _lift(other)
        if len(self.terms) != len(other.terms):
            return False
        for a, b in zip(self.terms, other.terms):
            if a.mono != b.mono or len(a.expo) != len(b.expo):
                return False
            if abs(a.coeff - b.coeff) > tol * max(1.0, abs(a.coeff)):
                return False
            for (ma, ca), (mb, cb) in zip(a.expo, b.expo):
                if ma != mb or abs(ca - cb) > tol * max(1.0, abs(ca)):
                    return False
        return True

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        return AnalyticFunction(self.terms + other.terms, self._params + other._params)

    __radd__ = __add__

    def __neg__(self):
        return AnalyticFunction([Term(-t.coeff, t.mono, t.expo) for t in self.terms], self._params)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(Term(a.coeff * b.coeff, _mono_mul(a.mono, b.mono),
                                _poly_canonical(a.expo + b.expo)))
        return AnalyticFunction(out, self._params + other._params)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, numbers.Number):
            raise TypeError("only division by numbers is supported")
        return self * (1 / other)

    def __pow__(self, n: int):
        if not isinstance(n, numbers.Integral) or n < 0:
            raise ConjugationError("only non-negative integer powers")
        out = AnalyticFunction.constant(1, self._params)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, var: str) -> "AnalyticFunction":
        """Partial derivative in ``var`` (a parameter or a conjugate name)."""
        out = []
        for t in self.terms:
            d = _mono_diff(t.mono, var)
            if d is not None:
                out.append(Term(t.coeff * d[0], d[1], t.expo))
            for m, c in t.expo:
                dq = _mono_diff(m, var)
                if dq is not None:
                    out.append(Term(t.coeff * c * dq[0], _mono_mul(t.mono, dq[1]), t.expo))
        return AnalyticFunction(out, self._params)

    # evaluation -------------------------------------------------------
    def evaluate(self, **values):
        """Numeric value; ``x*`` evaluates to conj(values['x']).  Broadcasts."""
        missing = [p for p in self._params if p not in values]
        if missing:
            raise ConjugationError(f"missing parameter values: {missing}")

        def val(v):
            x = np.asarray(values[base_name(v)], dtype=complex)
            return np.conj(x) if v.endswith("*") else x

        total = 0j
        for t in self.terms:
            term = t.coeff
            for v, k in t.mono:
                term = term * val(v) ** k
            if t.expo:
                e = 0j
                for m, c in t.expo:
                    f = c
                    for v, k in m:
                        f = f * val(v) ** k
                    e = e + f
                term = term * np.exp(e)
            total = total + term
        return total

    def __call__(self, **values):
        return self.evaluate(**values)

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(_term_str(t) for t in self.terms)

    def __repr__(self):
        return f"AnalyticFunction({self})"

    def to_prefix(self) -> str:
        parts = [_term_prefix(t) for t in self.terms]
        if not parts:
            return "0"
        return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def _lift(x) -> AnalyticFunction:
    if isinstance(x, AnalyticFunction):
        return x
    if isinstance(x, numbers.Number):
        return AnalyticFunction.constant(complex(x))
    raise TypeError(f"cannot use {type(x).__name__} in an analytic expression")


def _num(c: complex) -> str:
    c = _clean(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}j"
    return f"({c.real!r}{c.imag:+}j)"


def _mono_str(m: Monomial) -> str:
    # conjugate names are bracketed so "a*(q*)^2" stays readable
    names = [f"({v})" if v.endswith("*") else v for v, _ in m]
    return "*".join(n if k == 1 else f"{n}^{k}" for n, (_, k) in zip(names, m))


def _term_str(t: Term) -> str:
    parts = [_num(t.coeff)]
    if t.mono:
        parts.append(_mono_str(t.mono))
    if t.expo:
        parts.append("exp(" + " + ".join(f"{_num(c)}*{_mono_str(m)}" for m, c in t.expo) + ")")
    return "*".join(parts)


def _mono_prefix(m: Monomial) -> list:
    return [v if k == 1 else f"(^ {v} {k})" for v, k in m]


def _prefix_num(c: complex) -> str:
    c = _clean(c)
    return repr(c.real) if c.imag == 0 else repr(c).strip("()")


def _term_prefix(t: Term) -> str:
    factors = [_prefix_num(t.coeff)] + _mono_prefix(t.mono)
    if t.expo:
        inner = []
        for m, c in t.expo:
            inner.append("(* " + " ".join([_prefix_num(c)] + _mono_prefix(m)) + ")")
        factors.append("(exp " + (inner[0] if len(inner) == 1 else "(+ " + " ".join(inner) + ")") + ")")
    return factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")"


def var(name: str) -> AnalyticFunction:
    return AnalyticFunction.var(name)


def exp(e) -> AnalyticFunction:
    return AnalyticFunction.exp(e)


def mod_conjugate(f: AnalyticFunction, A: Iterable[str] = ()) -> AnalyticFunction:
    """Modified conjugate keeping the parameters in ``A`` analytic.

    Coefficients are conjugated; every variable whose parameter is outside
    ``A`` is swapped with its conjugate partner.
    """
    keep = frozenset(A)
    unknown = keep - set(f.parameters)
    if unknown:
        raise ConjugationError(f"unknown parameter(s) in analytic set: {sorted(unknown)}")
    out = []
    for t in f.terms:
        expo = _poly_canonical((_mono_rename(m, keep), np.conj(c)) for m, c in t.expo)
        out.append(Term(np.conj(t.coeff), _mono_rename(t.mono, keep), expo))
    return AnalyticFunction(out, f.parameters)


# --- component vectors ---------------------------------------------------

@dataclass(frozen=True)
class ComponentVector:
    """Ket components in a discrete basis, each an analytic function."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(_lift(e) for e in self.entries))

    @property
    def parameters(self) -> tuple:
        names = set()
        for e in self.entries:
            names.update(e.parameters)
        return tuple(sorted(names))

    def __len__(self):
        return len(self.entries)

    def evaluate(self, **values) -> np.ndarray:
        return np.array([np.asarray(e.evaluate(**{k: v for k, v in values.items() if k in e.parameters}))
                         for e in self.entries], dtype=complex)


def mod_bra(ket: ComponentVector, A: Iterable[str] = ()) -> ComponentVector:
    """Row vector of the modified hermitian conjugate of ``ket``."""
    keep = frozenset(A)
    unknown = keep - set(ket.parameters)
    if unknown:
        raise ConjugationError(f"unknown parameter(s) in analytic set: {sorted(unknown)}")
    return ComponentVector(tuple(mod_conjugate(e, keep & set(e.parameters)) for e in ket.entries))


def sandwich(bra: ComponentVector, matrix, ket: ComponentVector) -> AnalyticFunction:
    """sum_ij bra_i M_ij ket_j as an analytic function."""
    M = np.asarray(matrix)
    if M.shape != (len(bra), len(ket)):
        raise ConjugationError(f"dimension mismatch: {len(bra)} x {M.shape} x {len(ket)}")
    total = AnalyticFunction()
    for j, kj in enumerate(ket.entries):
        col = AnalyticFunction()
        for i, bi in enumerate(bra.entries):
            if M[i, j] != 0:
                col = col + bi * complex(M[i, j])
        total = total + col * kj
    return total


@dataclass(frozen=True)
class SandwichReport:
    analytic_set: tuple
    max_discrepancy: float
    samples: int


def sandwich_identity_check(u_ket: ComponentVector, v_ket: ComponentVector, matrix,
                            A: Iterable[str] = (), *, samples: int = 10, seed: int = 0,
                            points: Iterable[Mapping] | None = None) -> SandwichReport:
    """Compare  {A}<u|M|v>^{*A}  with  {A}<v|M^dag|u>  at sampled parameters."""
    keep = frozenset(A)
    M = np.asarray(matrix, dtype=complex)
    if M.shape != (len(u_ket), len(v_ket)):
        raise ConjugationError("dimension mismatch between kets and matrix")
    lhs = mod_conjugate(sandwich(mod_bra(u_ket, keep & set(u_ket.parameters)), M, v_ket),
                        keep & (set(u_ket.parameters) | set(v_ket.parameters)))
    rhs = sandwich(mod_bra(v_ket, keep & set(v_ket.parameters)), M.conj().T, u_ket)
    names = sorted(set(lhs.parameters) | set(rhs.parameters))
    if points is None:
        rng = np.random.default_rng(seed)
        points = [{n: complex(*rng.uniform(-1, 1, 2)) for n in names} for _ in range(samples)]
    points = list(points)
    worst = 0.0
    for p in points:
        a = lhs.evaluate(**{k: p[k] for k in lhs.parameters})
        b = rhs.evaluate(**{k: p[k] for k in rhs.parameters})
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return SandwichReport(tuple(sorted(keep)), float(worst), len(points))


# --- prefix syntax --------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse(text: str) -> AnalyticFunction:
    """Parse the prefix syntax, e.g. ``(+ (* 1+2j (^ q 2)) (* 3 (^ p 2)))``.

    Operators: ``+``, ``-``, ``*``, ``^`` (integer power), ``exp``.
    Atoms: Python complex literals or names (``q``, ``p*``).
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ConjugationError("empty expression")
    expr, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ConjugationError(f"trailing input after position {pos}")
    return _lift(expr)


def _atom(tok: str):
    try:
        return AnalyticFunction.constant(complex(tok.replace("i", "j")) if tok[-1] in "ij" else float(tok))
    except ValueError:
        pass
    if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*\*?", tok):
        return AnalyticFunction.var(tok)
    raise ConjugationError(f"bad token {tok!r}")


def _parse(tokens, pos):
    tok = tokens[pos]
    if tok == ")":
        raise ConjugationError("unexpected ')'")
    if tok != "(":
        return _atom(tok), pos + 1
    if pos + 1 >= len(tokens):
        raise ConjugationError("missing operator after '('")
    op = tokens[pos + 1]
    pos += 2
    args = []
    while pos < len(tokens) and tokens[pos] != ")":
        if op == "^" and len(args) == 1:
            if not re.fullmatch(r"\d+", tokens[pos]):
                raise ConjugationError(f"exponent must be a non-negative integer, got {tokens[pos]!r}")
            args.append(int(tokens[pos]))
            pos += 1
            continue
        a, pos = _parse(tokens, pos)
        args.append(a)
    if pos >= len(tokens):
        raise ConjugationError("missing ')'")
    pos += 1
    arity = {"^": (2, 2), "exp": (1, 1), "-": (1, None), "+": (1, None), "*": (1, None)}
    if op in arity:
        lo, hi = arity[op]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ConjugationError(f"wrong number of arguments for {op!r}")
    if op == "+":
        out = AnalyticFunction()
        for a in args:
            out = out + a
    elif op == "*":
        out = AnalyticFunction.constant(1)
        for a in args:
            out = out * a
    elif op == "-":
        out = -args[0] if len(args) == 1 else args[0] - sum(args[1:], AnalyticFunction())
    elif op == "^":
        out = args[0] ** args[1]
    elif op == "exp":
        out = AnalyticFunction.exp(args[0])
    else:
        raise ConjugationError(f"unknown operator {op!r}")
    return out, pos
