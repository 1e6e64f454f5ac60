"""Expression trees for smooth functions of z_1..z_n and conj(z_1)..conj(z_n).

The expression language is deliberately small: rational operations, integer
powers, and exp, over variables and their conjugates.  Every expression can be
evaluated to a second-order Wirtinger jet (value, both gradient blocks, all
three second-derivative blocks) by exact forward-mode propagation, treating
z and conj(z) as independent coordinates.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expr", "Const", "Var", "CVar", "Add", "Sub", "Mul", "Div", "Pow", "Exp",
    "Neg", "Jet2", "ParseError", "EvalError", "parse", "to_text", "conjugate",
    "eval_value", "eval_batch", "eval_jet2", "finite_diff_jet",
]

# Denominators with modulus at or below this abort evaluation.
EPS_DIV = 1e-300


class ParseError(ValueError):
    """Syntax or validity error in expression text, with character offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (offset {pos})")
        self.pos = pos


class EvalError(ValueError):
    """Numeric failure during evaluation (near-zero division, overflow)."""


@dataclass(frozen=True, slots=True)
class Expr:
    """Base node.  All nodes carry the ambient dimension n and are immutable."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be a positive integer")

    def _check_same_n(self, other):
        if not isinstance(other, Expr):
            raise TypeError(f"expected Expr, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def _lift(self, value):
        if isinstance(value, Expr):
            self._check_same_n(value)
            return value
        return Const(self.n, complex(value))

    def __add__(self, other):
        return Add(self.n, self, self._lift(other))

    def __radd__(self, other):
        return Add(self.n, self._lift(other), self)

    def __sub__(self, other):
        return Sub(self.n, self, self._lift(other))

    def __rsub__(self, other):
        return Sub(self.n, self._lift(other), self)

    def __mul__(self, other):
        return Mul(self.n, self, self._lift(other))

    def __rmul__(self, other):
        return Mul(self.n, self._lift(other), self)

    def __truediv__(self, other):
        return Div(self.n, self, self._lift(other))

    def __rtruediv__(self, other):
        return Div(self.n, self._lift(other), self)

    def __pow__(self, k):
        return Pow(self.n, self, k)

    def __neg__(self):
        return Neg(self.n, self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        Expr.__post_init__(self)
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"constant must be finite, got {v}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int  # 1-based

    def __post_init__(self):
        Expr.__post_init__(self)
        if not 1 <= self.index <= self.n:
            raise ValueError(f"variable index {self.index} out of range 1..{self.n}")


@dataclass(frozen=True, slots=True)
class CVar(Expr):
    """Conjugated variable conj(z_index)."""

    index: int

    def __post_init__(self):
        Expr.__post_init__(self)
        if not 1 <= self.index <= self.n:
            raise ValueError(f"variable index {self.index} out of range 1..{self.n}")


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.left)
        self._check_same_n(self.right)


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.left)
        self._check_same_n(self.right)


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.left)
        self._check_same_n(self.right)


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.left)
        self._check_same_n(self.right)


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.base)
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise ValueError("exponent must be an integer")
        if self.exponent < 0:
            raise ValueError("negative integer exponent not allowed; use division")


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    arg: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.arg)


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr

    def __post_init__(self):
        Expr.__post_init__(self)
        self._check_same_n(self.arg)


# ---------------------------------------------------------------------------
# Conjugation

def conjugate(e: Expr) -> Expr:
    """Syntactic conjugate: constants conjugated, z_k and conj(z_k) swapped.

    Evaluating the result at any point gives the complex conjugate of
    evaluating e at that point.
    """
    t = type(e)
    if t is Const:
        return Const(e.n, e.value.conjugate())
    if t is Var:
        return CVar(e.n, e.index)
    if t is CVar:
        return Var(e.n, e.index)
    if t is Neg:
        return Neg(e.n, conjugate(e.arg))
    if t is Exp:
        return Exp(e.n, conjugate(e.arg))
    if t is Pow:
        return Pow(e.n, conjugate(e.base), e.exponent)
    if t is Add:
        return Add(e.n, conjugate(e.left), conjugate(e.right))
    if t is Sub:
        return Sub(e.n, conjugate(e.left), conjugate(e.right))
    if t is Mul:
        return Mul(e.n, conjugate(e.left), conjugate(e.right))
    if t is Div:
        return Div(e.n, conjugate(e.left), conjugate(e.right))
    raise TypeError(f"not an Expr node: {e!r}")


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([a-z][a-z0-9]*)|([+\-*/^()]))")

_FUNCTIONS = ("conj", "re", "im", "abs2", "exp")
_VAR_RE = re.compile(r"z([0-9]+)$")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # Only whitespace may remain unmatched.
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.group(1) is not None:
            toks.append(("num", float(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        else:
            toks.append((m.group(3), m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    """Recursive descent over the grammar

        expr   := term (("+"|"-") term)*
        term   := factor (("*"|"/") factor)*
        factor := base ("^" uint)?
        base   := number | "i" | ident | ident "(" expr ")" | "(" expr ")" | "-" base

    Subtrees whose leaves are all constants fold into a single constant for
    +, -, *, / and unary minus, so complex literals like (2+3*i) parse to one
    Const node and the printer round-trips.
    """

    def __init__(self, toks, n):
        self.toks = toks
        self.n = n
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def advance(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expect(self, kind, what):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return tok

    def parse_expr(self):
        e = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.parse_term()
            e = self._fold2(Add if op == "+" else Sub, e, rhs)
        return e

    def parse_term(self):
        e = self.parse_factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.parse_factor()
            e = self._fold2(Mul if op == "*" else Div, e, rhs)
        return e

    def parse_factor(self):
        e = self.parse_base()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.advance()
            if tok[0] != "num" or tok[1] != int(tok[1]):
                raise ParseError("expected a nonnegative integer exponent", tok[2])
            e = Pow(self.n, e, int(tok[1]))
        return e

    def parse_base(self):
        kind, value, pos = self.advance()
        if kind == "num":
            return Const(self.n, complex(value))
        if kind == "-":
            inner = self.parse_base()
            if type(inner) is Const:
                return Const(self.n, -inner.value)
            return Neg(self.n, inner)
        if kind == "(":
            e = self.parse_expr()
            self.expect(")", "')'")
            return e
        if kind == "ident":
            return self.parse_ident(value, pos)
        raise ParseError("expected a number, identifier, or '('", pos)

    def parse_ident(self, name, pos):
        if name == "i":
            return Const(self.n, 1j)
        m = _VAR_RE.match(name)
        if m is not None:
            if self.peek()[0] == "(":
                raise ParseError(f"'{name}' is not callable", self.peek()[2])
            index = int(m.group(1))
            if not 1 <= index <= self.n:
                raise ParseError(
                    f"variable index out of range: {name} with n={self.n}", pos)
            return Var(self.n, index)
        if name in _FUNCTIONS:
            self.expect("(", f"'(' after '{name}'")
            arg = self.parse_expr()
            self.expect(")", "')'")
            return self._apply(name, arg)
        raise ParseError(f"unknown identifier '{name}'", pos)

    def _apply(self, name, arg):
        if name == "exp":
            return Exp(self.n, arg)
        if name == "conj":
            return conjugate(arg)
        # re, im, abs2 desugar into z / conj(z) algebra.
        if name == "abs2":
            return self._fold2(Mul, arg, conjugate(arg))
        if name == "re":
            return self._fold2(Div, self._fold2(Add, arg, conjugate(arg)),
                               Const(self.n, 2))
        # im(e) = (e - conj e) / 2i
        return self._fold2(Div, self._fold2(Sub, arg, conjugate(arg)),
                           Const(self.n, 2j))

    def _fold2(self, node, a, b):
        if type(a) is Const and type(b) is Const:
            if node is Add:
                return Const(self.n, a.value + b.value)
            if node is Sub:
                return Const(self.n, a.value - b.value)
            if node is Mul:
                return Const(self.n, a.value * b.value)
            if node is Div and b.value != 0:
                return Const(self.n, a.value / b.value)
        return node(self.n, a, b)


def parse(text: str, n: int) -> Expr:
    """Parse expression text over variables z1..zn.

    Raises ParseError (with .pos, a 0-based character offset) on malformed
    input, out-of-range variable indices, or non-integer exponents.
    """
    if not isinstance(text, str) or text.strip() == "":
        raise ParseError("empty expression", 0)
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    p = _Parser(_tokenize(text), n)
    e = p.parse_expr()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError("unexpected trailing input", tok[2])
    return e


# ---------------------------------------------------------------------------
# Printer

def _float_text(x):
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return np.format_float_positional(x, unique=True, trim="-")


def _const_text(c):
    """Literal text for a complex constant plus its operator tightness
    (negations and the b*i shorthand carry product-level precedence)."""
    re_, im_ = c.real, c.imag
    if im_ == 0:
        if re_ < 0:
            return "-" + _float_text(-re_), 2
        return _float_text(re_), 4
    if re_ == 0:
        if im_ == 1:
            return "i", 4
        if im_ == -1:
            return "-i", 2
        sign = "-" if im_ < 0 else ""
        return f"{sign}{_float_text(abs(im_))}*i", 2
    op = "-" if im_ < 0 else "+"
    im_txt = "i" if abs(im_) == 1 else f"{_float_text(abs(im_))}*i"
    re_txt, _ = _const_text(complex(re_, 0))
    return f"({re_txt}{op}{im_txt})", 4


# Operator tightness used for minimal parenthesization.  A child is wrapped
# when its own level is below the level its slot requires.
_LEVEL = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 2, Pow: 3}


def to_text(e: Expr) -> str:
    """Render to parseable text; parse(to_text(e), e.n) rebuilds e for every
    tree whose constant-only subtrees are already folded (as parse produces)."""
    return _fmt(e, 0)


def _fmt(e, ctx):
    t = type(e)
    if t is Const:
        txt, level = _const_text(e.value)
        return f"({txt})" if level < ctx else txt
    if t is Var:
        txt = f"z{e.index}"
    elif t is CVar:
        txt = f"conj(z{e.index})"
    elif t is Exp:
        txt = f"exp({_fmt(e.arg, 0)})"
    elif t is Neg:
        txt = "-" + _fmt(e.arg, 4)
    elif t is Pow:
        txt = f"{_fmt(e.base, 4)}^{e.exponent}"
    elif t is Add:
        txt = f"{_fmt(e.left, 1)}+{_fmt(e.right, 2)}"
    elif t is Sub:
        txt = f"{_fmt(e.left, 1)}-{_fmt(e.right, 2)}"
    elif t is Mul:
        txt = f"{_fmt(e.left, 2)}*{_fmt(e.right, 3)}"
    elif t is Div:
        txt = f"{_fmt(e.left, 2)}/{_fmt(e.right, 3)}"
    else:
        raise TypeError(f"not an Expr node: {e!r}")
    if _LEVEL.get(t, 4) < ctx:
        return f"({txt})"
    return txt


# ---------------------------------------------------------------------------
# Evaluation

def _as_point(z, n):
    z = np.asarray(z, dtype=complex)
    if z.shape != (n,):
        raise ValueError(f"point has shape {z.shape}, expected ({n},)")
    if not np.all(np.isfinite(z)):
        raise ValueError("point has non-finite coordinates")
    return z


def eval_value(e: Expr, z) -> complex:
    """Evaluate just the value of e at point z (length-n complex vector)."""
    z = _as_point(z, e.n)
    # overflow surfaces as a raised EvalError below, not a warning
    with np.errstate(over="ignore", invalid="ignore"):
        v = complex(_eval_batch(e, z[None, :])[0])
    if not (np.isfinite(v.real) and np.isfinite(v.imag)):
        raise EvalError(f"non-finite value while evaluating '{to_text(e)}'")
    return v


def eval_batch(e: Expr, pts) -> np.ndarray:
    """Evaluate values of e at many points at once; pts has shape (m, n)."""
    pts = np.asarray(pts, dtype=complex)
    if pts.ndim != 2 or pts.shape[1] != e.n:
        raise ValueError(f"points have shape {pts.shape}, expected (m, {e.n})")
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval_batch(e, pts)
    if not np.all(np.isfinite(out)):
        raise EvalError(f"non-finite value while evaluating '{to_text(e)}'")
    return out


def _eval_batch(e, pts):
    t = type(e)
    if t is Const:
        return np.full(pts.shape[0], e.value, dtype=complex)
    if t is Var:
        return pts[:, e.index - 1].copy()
    if t is CVar:
        return np.conj(pts[:, e.index - 1])
    if t is Neg:
        return -_eval_batch(e.arg, pts)
    if t is Add:
        return _eval_batch(e.left, pts) + _eval_batch(e.right, pts)
    if t is Sub:
        return _eval_batch(e.left, pts) - _eval_batch(e.right, pts)
    if t is Mul:
        return _eval_batch(e.left, pts) * _eval_batch(e.right, pts)
    if t is Div:
        num = _eval_batch(e.left, pts)
        den = _eval_batch(e.right, pts)
        small = np.abs(den) <= EPS_DIV
        if np.any(small):
            raise EvalError(f"division by near-zero in '{to_text(e)}'")
        return num / den
    if t is Pow:
        return _eval_batch(e.base, pts) ** e.exponent
    if t is Exp:
        return np.exp(_eval_batch(e.arg, pts))
    raise TypeError(f"not an Expr node: {e!r}")


@dataclass(frozen=True, slots=True)
class Jet2:
    """Second-order Wirtinger jet at a point.

    value: f(z); g_z[i] = df/dz_i; g_zb[j] = df/dconj(z_j);
    h_zz[i,j] = d2f/dz_i dz_j (symmetric); h_zzb[i,j] = d2f/dz_i dconj(z_j);
    h_zbzb[i,j] = d2f/dconj(z_i) dconj(z_j) (symmetric).
    """

    value: complex
    g_z: np.ndarray
    g_zb: np.ndarray
    h_zz: np.ndarray
    h_zzb: np.ndarray
    h_zbzb: np.ndarray

    @property
    def n(self):
        return self.g_z.shape[0]

    def is_real_valued(self, tol=1e-9):
        return abs(self.value.imag) <= tol * max(1.0, abs(self.value.real))


def _jet_zero(n):
    return (0j, np.zeros(n, complex), np.zeros(n, complex),
            np.zeros((n, n), complex), np.zeros((n, n), complex),
            np.zeros((n, n), complex))


def _jet_mul(a, b):
    av, agz, agzb, azz, azzb, azbzb = a
    bv, bgz, bgzb, bzz, bzzb, bzbzb = b
    v = av * bv
    gz = agz * bv + av * bgz
    gzb = agzb * bv + av * bgzb
    zz = azz * bv + np.outer(agz, bgz) + np.outer(bgz, agz) + av * bzz
    zzb = azzb * bv + np.outer(agz, bgzb) + np.outer(bgz, agzb) + av * bzzb
    zbzb = azbzb * bv + np.outer(agzb, bgzb) + np.outer(bgzb, agzb) + av * bzbzb
    return (v, gz, gzb, zz, zzb, zbzb)


def _jet_recip(b, node):
    bv, bgz, bgzb, bzz, bzzb, bzbzb = b
    if abs(bv) <= EPS_DIV:
        raise EvalError(f"division by near-zero in '{to_text(node)}'")
    iv = 1.0 / bv
    iv2 = iv * iv
    iv3 = iv2 * iv
    v = iv
    gz = -bgz * iv2
    gzb = -bgzb * iv2
    zz = 2.0 * np.outer(bgz, bgz) * iv3 - bzz * iv2
    zzb = 2.0 * np.outer(bgz, bgzb) * iv3 - bzzb * iv2
    zbzb = 2.0 * np.outer(bgzb, bgzb) * iv3 - bzbzb * iv2
    return (v, gz, gzb, zz, zzb, zbzb)


def _jet(e, z):
    n = e.n
    t = type(e)
    if t is Const:
        out = _jet_zero(n)
        return (e.value,) + out[1:]
    if t is Var:
        v, gz, gzb, zz, zzb, zbzb = _jet_zero(n)
        gz = gz.copy()
        gz[e.index - 1] = 1.0
        return (z[e.index - 1], gz, gzb, zz, zzb, zbzb)
    if t is CVar:
        v, gz, gzb, zz, zzb, zbzb = _jet_zero(n)
        gzb = gzb.copy()
        gzb[e.index - 1] = 1.0
        return (z[e.index - 1].conjugate(), gz, gzb, zz, zzb, zbzb)
    if t is Neg:
        return tuple(-part for part in _jet(e.arg, z))
    if t is Add:
        a = _jet(e.left, z)
        b = _jet(e.right, z)
        return tuple(x + y for x, y in zip(a, b))
    if t is Sub:
        a = _jet(e.left, z)
        b = _jet(e.right, z)
        return tuple(x - y for x, y in zip(a, b))
    if t is Mul:
        return _jet_mul(_jet(e.left, z), _jet(e.right, z))
    if t is Div:
        return _jet_mul(_jet(e.left, z), _jet_recip(_jet(e.right, z), e))
    if t is Pow:
        a = _jet(e.base, z)
        av, agz, agzb, azz, azzb, azbzb = a
        k = e.exponent
        if k == 0:
            out = _jet_zero(n)
            return (1.0 + 0j,) + out[1:]
        if k == 1:
            return a
        v = av ** k
        c1 = k * av ** (k - 1)
        c2 = k * (k - 1) * av ** (k - 2)
        gz = c1 * agz
        gzb = c1 * agzb
        zz = c2 * np.outer(agz, agz) + c1 * azz
        zzb = c2 * np.outer(agz, agzb) + c1 * azzb
        zbzb = c2 * np.outer(agzb, agzb) + c1 * azbzb
        return (v, gz, gzb, zz, zzb, zbzb)
    if t is Exp:
        a = _jet(e.arg, z)
        av, agz, agzb, azz, azzb, azbzb = a
        u = np.exp(av)
        gz = u * agz
        gzb = u * agzb
        zz = u * (np.outer(agz, agz) + azz)
        zzb = u * (np.outer(agz, agzb) + azzb)
        zbzb = u * (np.outer(agzb, agzb) + azbzb)
        return (u, gz, gzb, zz, zzb, zbzb)
    raise TypeError(f"not an Expr node: {e!r}")


def eval_jet2(e: Expr, z) -> Jet2:
    """Exact forward-mode second-order Wirtinger jet of e at point z."""
    z = _as_point(z, e.n)
    with np.errstate(over="ignore", invalid="ignore"):
        v, gz, gzb, zz, zzb, zbzb = _jet(e, z)
    v = complex(v)
    blocks = (gz, gzb, zz, zzb, zbzb)
    if not (np.isfinite(v.real) and np.isfinite(v.imag)
            and all(np.all(np.isfinite(b)) for b in blocks)):
        raise EvalError(f"non-finite jet while evaluating '{to_text(e)}'")
    for b in blocks:
        b.flags.writeable = False
    return Jet2(v, *blocks)


# ---------------------------------------------------------------------------
# Finite-difference oracle

def finite_diff_jet(f, z, h: float = 1e-4, n: int | None = None) -> Jet2:
    """Central-difference approximation of the second-order Wirtinger jet.

    f is an Expr or a callable accepting a length-n complex vector (callables
    may also accept an (m, n) batch and return (m,) values; that path is
    tried first).  The full real Hessian in the 2n coordinates (x, y) is
    assembled from shared stencils, so the symmetry of the derived complex
    blocks is exact.  Used as an independent oracle for eval_jet2 and for
    functions outside the expression language.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if isinstance(f, Expr):
        n = f.n
    elif n is None:
        z_arr = np.asarray(z, dtype=complex)
        if z_arr.ndim != 1:
            raise ValueError("point must be a vector")
        n = z_arr.shape[0]
    z = _as_point(z, n)
    m = 2 * n

    offsets = [np.zeros(m)]
    for a in range(m):
        ea = np.zeros(m)
        ea[a] = h
        offsets.append(ea)
        offsets.append(-ea)
    pair_index = {}
    for a in range(m):
        for b in range(a + 1, m):
            ea = np.zeros(m)
            ea[a] = h
            eb = np.zeros(m)
            eb[b] = h
            pair_index[(a, b)] = len(offsets)
            offsets.extend([ea + eb, ea - eb, -ea + eb, -ea - eb])
    offsets = np.array(offsets)
    pts = z[None, :] + offsets[:, :n] + 1j * offsets[:, n:]

    vals = _call_points(f, pts, n)

    f0 = vals[0]
    d1 = np.empty(m, dtype=complex)
    r = np.empty((m, m), dtype=complex)
    for a in range(m):
        fp = vals[1 + 2 * a]
        fm = vals[2 + 2 * a]
        d1[a] = (fp - fm) / (2 * h)
        r[a, a] = (fp - 2 * f0 + fm) / (h * h)
    for (a, b), base in pair_index.items():
        fpp, fpm, fmp, fmm = vals[base:base + 4]
        v = (fpp - fpm - fmp + fmm) / (4 * h * h)
        r[a, b] = v
        r[b, a] = v

    rxx = r[:n, :n]
    rxy = r[:n, n:]
    ryx = r[n:, :n]
    ryy = r[n:, n:]
    gz = (d1[:n] - 1j * d1[n:]) / 2
    gzb = (d1[:n] + 1j * d1[n:]) / 2
    h_zz = (rxx - 1j * rxy - 1j * ryx - ryy) / 4
    h_zzb = (rxx + 1j * rxy - 1j * ryx + ryy) / 4
    h_zbzb = (rxx + 1j * rxy + 1j * ryx - ryy) / 4
    for b in (gz, gzb, h_zz, h_zzb, h_zbzb):
        b.flags.writeable = False
    return Jet2(complex(f0), gz, gzb, h_zz, h_zzb, h_zbzb)


def _call_points(f, pts, n):
    if isinstance(f, Expr):
        return eval_batch(f, pts)
    try:
        vals = np.asarray(f(pts), dtype=complex)
        if vals.shape == (pts.shape[0],):
            return vals
    except (TypeError, ValueError, IndexError):
        pass
    return np.array([complex(f(p)) for p in pts], dtype=complex)
