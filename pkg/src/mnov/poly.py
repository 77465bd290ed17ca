"""Bivariate complex polynomials and rational maps.

Polynomials are sparse maps from exponent pairs (a, b) to complex
coefficients; rational maps are quotients P/Q of them. Evaluation accepts
scalars or numpy arrays. Derivatives are exact (term-by-term), so downstream
Newton solvers get analytic Jacobians.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import DegreeCapError, InputSyntaxError, PoleError

DEGREE_CAP = 64

FINITE = "finite"
INFINITY = "infinity"
INDETERMINATE = "indeterminate"

# Absolute tolerance for zero tests during tagged evaluation, scaled by the
# magnitude of the largest coefficient of the polynomial being tested.
EVAL_ZERO_TOL = 1e-14


class Poly2:
    """A polynomial in z and w with complex coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (a, b), coeff in (terms or {}).items():
            c = complex(coeff)
            if c == 0:
                continue
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            if a > DEGREE_CAP or b > DEGREE_CAP:
                raise DegreeCapError(
                    f"degree {max(a, b)} exceeds the cap {DEGREE_CAP}"
                )
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise ValueError("non-finite coefficient")
            clean[(a, b)] = c
        self.terms = clean

    @classmethod
    def constant(cls, value):
        return cls({(0, 0): value})

    @classmethod
    def variable(cls, name):
        if name == "z":
            return cls({(1, 0): 1.0})
        if name == "w":
            return cls({(0, 1): 1.0})
        raise ValueError(f"unknown variable {name!r}")

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly2({self.unparse()!r})"

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0) + c
        return Poly2(out)

    def __neg__(self):
        return Poly2({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Poly2({key: c * other for key, c in self.terms.items()})
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly2.constant(1.0)
        for _ in range(n):
            result = result * self
        return result

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(key == (0, 0) for key in self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(a + b for a, b in self.terms)

    def max_coeff_magnitude(self):
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def eval(self, z, w):
        """Evaluate at scalars or numpy arrays (broadcasting)."""
        acc = None
        for (a, b), c in self.terms.items():
            term = c * z**a * w**b if (a or b) else c * np.ones_like(z * w)
            acc = term if acc is None else acc + term
        if acc is None:
            return np.zeros_like(z * w)
        return acc

    def dz(self):
        return Poly2(
            {(a - 1, b): a * c for (a, b), c in self.terms.items() if a > 0}
        )

    def dw(self):
        return Poly2(
            {(a, b - 1): b * c for (a, b), c in self.terms.items() if b > 0}
        )

    def unparse(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda ab: (-(ab[0] + ab[1]), -ab[0], -ab[1]))
        parts = []
        for key in keys:
            sign, text = _format_term(key, self.terms[key])
            if not parts:
                parts.append(text if sign >= 0 else "-" + text)
            else:
                parts.append(("+" if sign >= 0 else "-") + text)
        return "".join(parts)


def _format_number(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _format_term(key, coeff):
    """Return (sign, text) for one monomial, sign folded out when real/imaginary."""
    a, b = key
    mono = []
    if a == 1:
        mono.append("z")
    elif a > 1:
        mono.append(f"z^{a}")
    if b == 1:
        mono.append("w")
    elif b > 1:
        mono.append(f"w^{b}")
    mono_text = "*".join(mono)

    re_, im = coeff.real, coeff.imag
    if im == 0:
        sign = 1 if re_ >= 0 else -1
        coeff_text = _format_number(abs(re_))
        trivial = abs(re_) == 1
    elif re_ == 0:
        sign = 1 if im >= 0 else -1
        coeff_text = ("i" if abs(im) == 1 else _format_number(abs(im)) + "*i")
        trivial = abs(im) == 1 and not mono_text
        if abs(im) == 1 and mono_text:
            coeff_text = "i"
    else:
        sign = 1
        im_sign = "+" if im >= 0 else "-"
        im_text = "i" if abs(im) == 1 else _format_number(abs(im)) + "*i"
        coeff_text = f"({_format_number(re_)}{im_sign}{im_text})"
        trivial = False
    if not mono_text:
        return sign, coeff_text
    if im == 0 and trivial:
        return sign, mono_text
    return sign, f"{coeff_text}*{mono_text}"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)"
    r"|(?P<sym>[zwi+\-*^()/]))"
)


class _Parser:
    """Recursive-descent parser for the rational-function grammar.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := 'z' | 'w' | 'i' | decimal | '(' expr ')'
    rational := expr ('/' expr)?     (single top-level '/')

    A leading '+' or '-' on an expression is accepted as a convenience.
    """

    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip() == "":
                    break
                raise InputSyntaxError(
                    f"unexpected character {text[pos]!r}", position=pos
                )
            if m.group("num") is not None:
                self.tokens.append(("num", m.group("num"), m.start()))
            else:
                self.tokens.append((m.group("sym"), m.group("sym"), m.start()))
            pos = m.end()
        self.idx = 0

    def peek(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx][0]
        return None

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind):
        if self.peek() != kind:
            raise InputSyntaxError(
                f"expected {kind!r}", position=self._position()
            )
        return self.next()

    def _position(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx][2]
        return len(self.text)

    def parse_expr(self):
        sign = 1.0
        if self.peek() in ("+", "-"):
            if self.next()[0] == "-":
                sign = -1.0
        poly = self.parse_term() * sign
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            term = self.parse_term()
            poly = poly + term if op == "+" else poly - term
        return poly

    def parse_term(self):
        poly = self.parse_factor()
        while self.peek() == "*":
            self.next()
            poly = poly * self.parse_factor()
        return poly

    def parse_factor(self):
        base = self.parse_base()
        if self.peek() == "^":
            self.next()
            tok = self.peek()
            if tok != "num":
                raise InputSyntaxError("expected exponent", position=self._position())
            text = self.next()[1]
            if not text.isdigit():
                raise InputSyntaxError(
                    f"exponent must be a non-negative integer, got {text!r}",
                    position=self._position(),
                )
            n = int(text)
            if n > DEGREE_CAP:
                raise DegreeCapError(
                    f"exponent {n} exceeds the cap {DEGREE_CAP}"
                )
            return base**n
        return base

    def parse_base(self):
        tok = self.peek()
        if tok == "num":
            return Poly2.constant(float(self.next()[1]))
        if tok in ("z", "w"):
            return Poly2.variable(self.next()[0])
        if tok == "i":
            self.next()
            return Poly2.constant(1j)
        if tok == "(":
            self.next()
            poly = self.parse_expr()
            self.expect(")")
            return poly
        raise InputSyntaxError("expected a value", position=self._position())


def parse_poly(text):
    """Parse a single polynomial (no '/' allowed)."""
    parser = _Parser(text)
    poly = parser.parse_expr()
    if parser.peek() is not None:
        raise InputSyntaxError(
            f"unexpected token {parser.peek()!r}", position=parser._position()
        )
    return poly


class RationalMap:
    """A quotient P/Q of two-variable polynomials.

    The denominator must be nonzero and the two polynomials must not both be
    constant. squarefree_checked records whether the squarefree heuristic
    has run and passed.
    """

    def __init__(self, num, den=None):
        if den is None:
            den = Poly2.constant(1.0)
        if den.is_zero():
            raise InputSyntaxError("zero denominator polynomial")
        if num.is_constant() and den.is_constant():
            raise InputSyntaxError(
                "numerator and denominator must not both be constant"
            )
        self.num = num
        self.den = den
        self.squarefree_checked = False

    def __eq__(self, other):
        return (
            isinstance(other, RationalMap)
            and self.num == other.num
            and self.den == other.den
        )

    def __repr__(self):
        return f"RationalMap({self.unparse()!r})"

    def unparse(self):
        if self.den == Poly2.constant(1.0):
            return self.num.unparse()
        return f"({self.num.unparse()})/({self.den.unparse()})"

    def eval_tagged(self, z, w):
        """Evaluate with a {finite, infinity, indeterminate} tag (scalars only)."""
        p = complex(self.num.eval(z, w))
        q = complex(self.den.eval(z, w))
        p_zero = abs(p) <= EVAL_ZERO_TOL * max(1e-300, self.num.max_coeff_magnitude())
        q_zero = abs(q) <= EVAL_ZERO_TOL * max(1e-300, self.den.max_coeff_magnitude())
        if q_zero and p_zero:
            return INDETERMINATE, None
        if q_zero:
            return INFINITY, None
        return FINITE, p / q

    def eval(self, z, w):
        """Plain value P/Q without zero guarding (arrays allowed)."""
        return self.num.eval(z, w) / self.den.eval(z, w)

    def wirtinger_grad(self, z, w):
        """(dF/dz, dF/dw) by the quotient rule; error at poles."""
        q = complex(self.den.eval(z, w))
        if abs(q) <= EVAL_ZERO_TOL * max(1e-300, self.den.max_coeff_magnitude()):
            raise PoleError(f"denominator vanishes at ({z}, {w})")
        p = complex(self.num.eval(z, w))
        pz = complex(self.num.dz().eval(z, w))
        pw = complex(self.num.dw().eval(z, w))
        qz = complex(self.den.dz().eval(z, w))
        qw = complex(self.den.dw().eval(z, w))
        return ((pz * q - p * qz) / q**2, (pw * q - p * qw) / q**2)


def parse_rational(text):
    """Parse 'P' or 'P/Q' with a single top-level '/'."""
    parser = _Parser(text)
    num = parser.parse_expr()
    den = None
    if parser.peek() == "/":
        parser.next()
        den = parser.parse_expr()
    if parser.peek() is not None:
        if parser.peek() == "/":
            raise InputSyntaxError(
                "only one top-level '/' is allowed", position=parser._position()
            )
        raise InputSyntaxError(
            f"unexpected token {parser.peek()!r}", position=parser._position()
        )
    return RationalMap(num, den)


def _poly_singular_roots(poly, rng, seeds=64, ball_radius=4.0):
    """Distinct common roots of (poly, dz, dw) found by Gauss-Newton.

    Returns the deduplicated list of converged roots. Seeds are drawn
    uniformly from the complex 2-ball of the given radius.
    """
    fz, fw = poly.dz(), poly.dw()
    scale = max(1.0, poly.max_coeff_magnitude())
    tol = 1e-8 * scale
    polys = [poly, fz, fw]
    d_polys = [(p.dz(), p.dw()) for p in polys]

    g = rng.standard_normal((seeds, 4))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    radii = ball_radius * rng.random(seeds) ** 0.25
    pts = g / norms[:, None] * radii[:, None]

    roots = []
    for k in range(seeds):
        x = pts[k].copy()
        converged = False
        for _ in range(60):
            z = complex(x[0], x[1])
            w = complex(x[2], x[3])
            vals = [complex(p.eval(z, w)) for p in polys]
            if max(abs(v) for v in vals) < tol:
                converged = True
                break
            res = np.empty(6)
            jac = np.empty((6, 4))
            for i, ((pz, pw), v) in enumerate(zip(d_polys, vals)):
                gz = complex(pz.eval(z, w))
                gw = complex(pw.eval(z, w))
                res[2 * i] = v.real
                res[2 * i + 1] = v.imag
                # holomorphic: d/dx = g', d/dy = i*g'
                jac[2 * i] = (gz.real, -gz.imag, gw.real, -gw.imag)
                jac[2 * i + 1] = (gz.imag, gz.real, gw.imag, gw.real)
            step, *_ = np.linalg.lstsq(jac, res, rcond=None)
            step_norm = np.linalg.norm(step)
            if step_norm > 10.0:
                step *= 10.0 / step_norm
            x = x - step
            if not np.all(np.isfinite(x)) or np.linalg.norm(x) > 1e6:
                break
        if converged:
            # Coarse dedup radius: a degenerate isolated singularity yields a
            # tight cloud of approximate roots that must count once, while a
            # positive-dimensional singular locus spreads across the ball.
            if not any(np.linalg.norm(x - r) < 1e-2 for r in roots):
                roots.append(x)
    return roots


def squarefree_heuristic(F, rng_seed=0):
    """Advisory check that neither P nor Q has a repeated factor.

    A repeated factor forces a positive-dimensional singular locus, so the
    64-seed search then finds many distinct common roots of (poly, dz, dw).
    Finitely many hits (isolated curve singularities) are compatible with a
    squarefree polynomial and report True.
    """
    result = True
    for poly in (F.num, F.den):
        if poly.is_constant() and not poly.is_zero():
            continue
        rng = np.random.default_rng(rng_seed)
        roots = _poly_singular_roots(poly, rng)
        if len(roots) >= 12:
            result = False
    F.squarefree_checked = result
    return result
