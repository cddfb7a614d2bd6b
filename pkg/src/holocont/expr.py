"""A small expression language for the functions fed to the engines.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom (('^' | '**') ['-'] INT)?
    atom    := NUMBER ['i' | 'j'] | 'z' | 'zeta' | 'i' | 'j' | 'pi' | 'e'
             | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Functions: ``exp(w)``, ``log(w[, theta])``, ``pow(w, s[, theta])``,
``sqrt(w)``, ``recip(w)``, ``rgamma(w)`` (1/Gamma) and ``li2(w)``.  ``log``
and ``pow`` use the branch with arguments in ``[theta, theta + 2*pi)``; without
``theta`` (and for ``sqrt``) the principal branch ``(-pi, pi]`` is used.
Constant subexpressions are folded while parsing.

Evaluation is done in scaled form ``value = phase * exp(scale)`` so that the
log-modulus of things like ``exp(z^2)`` stays available far beyond the
floating point range.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass

import numpy as np
from scipy import special

from .branches import arg_branch
from .exceptions import EvaluationError, ExpressionSyntaxError, ParameterError
from .special import dilog


# --------------------------------------------------------------------------
# tree


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class IntPow:
    base: object
    n: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: object
    s: complex | None = None  # exponent of pow
    theta: float | None = None  # branch cut angle; None = principal


_ARITY = {
    "exp": (1, 1),
    "log": (1, 2),
    "pow": (2, 3),
    "sqrt": (1, 1),
    "recip": (1, 1),
    "rgamma": (1, 1),
    "li2": (1, 1),
}


# --------------------------------------------------------------------------
# scaled evaluation: (phase, log-modulus); zero is (0, -inf)


def _norm(v):
    mag = np.abs(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        phase = np.where(mag > 0, v / np.where(mag > 0, mag, 1.0), 0.0)
        return phase.astype(complex), np.log(mag)


def _unscale(p, s):
    with np.errstate(over="ignore", invalid="ignore"):
        return np.where(p == 0, 0.0, p * np.exp(np.where(p == 0, 0.0, s)))


def _add(a, b, sign=1):
    (p1, s1), (p2, s2) = a, b
    s = np.maximum(s1, s2)
    fin = np.isfinite(s)
    sref = np.where(fin, s, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        v = p1 * np.exp(np.where(p1 == 0, -np.inf, s1 - sref)) + sign * p2 * np.exp(
            np.where(p2 == 0, -np.inf, s2 - sref)
        )
    p, ds = _norm(v)
    return p, np.where(fin, sref + ds, s)


def _eval(node, z):
    if isinstance(node, Var):
        return _norm(z)
    if isinstance(node, Const):
        return _norm(np.full(z.shape, node.value, dtype=complex))
    if isinstance(node, Neg):
        p, s = _eval(node.arg, z)
        return -p, s
    if isinstance(node, BinOp):
        a, b = _eval(node.left, z), _eval(node.right, z)
        if node.op == "+":
            return _add(a, b)
        if node.op == "-":
            return _add(a, b, -1)
        if node.op == "*":
            return a[0] * b[0], a[1] + b[1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return a[0] / b[0], a[1] - b[1]
    if isinstance(node, IntPow):
        if node.n == 0:
            return np.ones(z.shape, dtype=complex), np.zeros(z.shape)
        p, s = _eval(node.base, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return p ** node.n, node.n * s
    if isinstance(node, Call):
        return _eval_call(node, z)
    raise TypeError(f"unknown node {node!r}")


def _log_parts(p, s, theta):
    """Real and imaginary parts of the chosen logarithm of phase*exp(s)."""
    if theta is None:
        ang = np.angle(p.real + 1j * (p.imag + 0.0))
    else:
        safe = np.where(p == 0, 1.0, p)
        ang = np.asarray(arg_branch(safe, theta))
    return s, ang


def _eval_call(node, z):
    p, s = _eval(node.arg, z)
    name = node.name
    if name == "exp":
        w = _unscale(p, s)
        return np.exp(1j * w.imag), w.real
    if name == "recip":
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 / p, -s
    if name in ("log", "pow", "sqrt"):
        re_, ang = _log_parts(p, s, node.theta)
        if name == "log":
            with np.errstate(invalid="ignore"):
                return _norm(re_ + 1j * ang)
        expo = 0.5 if name == "sqrt" else node.s
        with np.errstate(invalid="ignore"):
            w = expo * (re_ + 1j * ang)
            return np.exp(1j * w.imag), np.where(p == 0, -np.inf, w.real)
    w = _unscale(p, s)
    if name == "rgamma":
        with np.errstate(all="ignore"):
            lg = special.loggamma(w)
        pole = ~np.isfinite(lg)
        lg = np.where(pole, 0.0, lg)
        return np.where(pole, 0.0, np.exp(-1j * lg.imag)), np.where(pole, -np.inf, -lg.real)
    if name == "li2":
        return _norm(dilog(w))
    raise ValueError(f"unknown function {name}")


def _direct(node, z):
    """Plain complex evaluation (may overflow; see ``_eval`` for the safe path)."""
    if isinstance(node, Var):
        return z
    if isinstance(node, Const):
        return np.full(z.shape, node.value, dtype=complex)
    if isinstance(node, Neg):
        return -_direct(node.arg, z)
    if isinstance(node, BinOp):
        a, b = _direct(node.left, z), _direct(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, IntPow):
        return _direct(node.base, z) ** node.n
    w = _direct(node.arg, z)
    name = node.name
    if name == "exp":
        return np.exp(w)
    if name == "recip":
        return 1.0 / w
    if name == "rgamma":
        return special.rgamma(w)
    if name == "li2":
        return dilog(w)
    if name == "sqrt" or node.theta is None:
        lw = np.log(w.real + 1j * (w.imag + 0.0))
    else:
        safe = np.where(w == 0, 1.0, w)
        lw = np.where(w == 0, -np.inf, np.log(np.abs(safe)) + 1j * np.asarray(arg_branch(safe, node.theta)))
    if name == "log":
        return lw
    expo = 0.5 if name == "sqrt" else node.s
    return np.exp(expo * lw)


# --------------------------------------------------------------------------
# structure


def _affine(node):
    """``(c, d)`` with node == c*z + d, or None."""
    if isinstance(node, Const):
        return 0j, node.value
    if isinstance(node, Var):
        return 1 + 0j, 0j
    if isinstance(node, Neg):
        a = _affine(node.arg)
        return None if a is None else (-a[0], -a[1])
    if isinstance(node, BinOp):
        a, b = _affine(node.left), _affine(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a[0] + b[0], a[1] + b[1]
        if node.op == "-":
            return a[0] - b[0], a[1] - b[1]
        if node.op == "*":
            if a[0] == 0:
                return a[1] * b[0], a[1] * b[1]
            if b[0] == 0:
                return b[1] * a[0], b[1] * a[1]
            return None
        if node.op == "/" and b[0] == 0 and b[1] != 0:
            return a[0] / b[1], a[1] / b[1]
    return None


def _zeros(node):
    """Zeros of a product of affine factors (with repetition), or None if unknown."""
    aff = _affine(node)
    if aff is not None:
        c, d = aff
        if c == 0:
            return [] if d != 0 else None
        return [-d / c]
    if isinstance(node, BinOp) and node.op == "*":
        a, b = _zeros(node.left), _zeros(node.right)
        return None if a is None or b is None else a + b
    if isinstance(node, IntPow) and node.n > 0:
        a = _zeros(node.base)
        return None if a is None else a * node.n
    if isinstance(node, Neg):
        return _zeros(node.arg)
    if isinstance(node, Call) and node.name in ("exp",):
        return []
    return None


def _walk(node):
    yield node
    for child in ("left", "right", "arg", "base"):
        if hasattr(node, child):
            yield from _walk(getattr(node, child))


@dataclass(frozen=True)
class CutRay:
    """Declared branch cut ``origin + t*exp(i*angle)``, t >= 0.  ``origin`` None means unknown."""

    origin: complex | None
    angle: float | None


class FunctionExpr:
    """A parsed expression, callable on complex scalars or arrays."""

    def __init__(self, node, text=None):
        self.node = node
        self.text = text if text is not None else render(node)

    # evaluation -----------------------------------------------------------

    def scaled(self, z):
        """``(phase, log_modulus)`` arrays with value = phase*exp(log_modulus)."""
        z = np.asarray(z, dtype=complex)
        p, s = _eval(self.node, np.atleast_1d(z))
        if np.ndim(z) == 0:
            return complex(p[0]), float(s[0])
        return p, s

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            out = _direct(self.node, np.atleast_1d(z))
        bad = ~np.isfinite(out)
        if bad.any():
            # overflow in an intermediate: redo those points in scaled form
            p, s = _eval(self.node, np.atleast_1d(z)[bad])
            out[bad] = _unscale(p, s)
        return complex(out[0]) if np.ndim(z) == 0 else out

    def logabs(self, z):
        """``log|f(z)|`` without overflow; ``-inf`` at zeros."""
        z = np.asarray(z, dtype=complex)
        p, s = _eval(self.node, np.atleast_1d(z))
        s = np.where(p == 0, -np.inf, s)
        return float(s[0]) if np.ndim(z) == 0 else s

    def checked(self, z):
        """Like ``__call__`` but raises :class:`EvaluationError` on non-finite values."""
        out = self(z)
        if not np.all(np.isfinite(out)):
            bad = np.atleast_1d(np.asarray(z))[~np.isfinite(np.atleast_1d(out))]
            raise EvaluationError(f"{self.text}: non-finite value at {bad[0]!r}")
        return out

    # metadata -------------------------------------------------------------

    @property
    def cuts(self) -> list[CutRay]:
        out = []
        for n in _walk(self.node):
            if not isinstance(n, Call):
                continue
            if n.name in ("log", "pow", "sqrt", "li2"):
                aff = _affine(n.arg)
                if aff is None or aff[0] == 0:
                    if aff is None:
                        out.append(CutRay(None, None))
                    continue
                c, d = aff
                if n.name == "li2":
                    origin, ang = (1 - d) / c, 0.0
                else:
                    ang = np.pi if n.theta is None else n.theta
                    origin = -d / c
                out.append(CutRay(complex(origin), float(ang - cmath.phase(c))))
        return out

    @property
    def poles(self) -> list[complex] | None:
        """Declared poles, or None when a denominator is not a product of affine factors."""
        out = []
        for n in _walk(self.node):
            den = None
            if isinstance(n, BinOp) and n.op == "/":
                den = n.right
            elif isinstance(n, Call) and n.name == "recip":
                den = n.arg
            elif isinstance(n, IntPow) and n.n < 0:
                den = n.base
            if den is None:
                continue
            zs = _zeros(den)
            if zs is None:
                return None
            out.extend(complex(v.real + 0.0, v.imag + 0.0) for v in zs)
        return sorted(set(out), key=lambda w: (w.real, w.imag))

    @property
    def entire(self) -> bool:
        return not self.cuts and self.poles == []

    # misc -----------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FunctionExpr) and self.node == other.node

    def __hash__(self):
        return hash(self.node)

    def __repr__(self):
        return f"FunctionExpr({self.text!r})"

    def __str__(self):
        return self.text


# --------------------------------------------------------------------------
# rendering


def _fmt_const(v: complex) -> str:
    v = complex(v)
    if v.imag == 0:
        return repr(v.real) if v.real >= 0 else f"({v.real!r})"
    if v.real == 0:
        return f"({v.imag!r}i)"
    return f"({v.real!r}+{v.imag!r}i)"


def render(node) -> str:
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{render(node.arg)})"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, IntPow):
        return f"{render(node.base)}^{node.n}" if isinstance(node.base, (Var, Call)) else f"({render(node.base)})^{node.n}"
    if isinstance(node, Call):
        args = [render(node.arg)]
        if node.name == "pow":
            args.append(_fmt_const(node.s))
        if node.theta is not None:
            args.append(repr(float(node.theta)) if node.theta >= 0 else f"({node.theta!r})")
        return f"{node.name}({', '.join(args)})"
    raise TypeError(f"unknown node {node!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>[ij](?![A-Za-z_0-9]))?"
    r"|(?P<name>[A-Za-z_ζ][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup) if m.lastgroup != "imag" else m.start("num")
        if m.group("num") is not None:
            v = float(m.group("num"))
            out.append(("num", v * 1j if m.group("imag") else v, start))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), start))
        else:
            out.append(("op", "^" if m.group("op") == "**" else m.group("op"), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _fold(node):
    """Evaluate variable-free subtrees to constants."""
    if isinstance(node, (Const, Var)):
        return node
    if not any(isinstance(n, Var) for n in _walk(node)):
        with np.errstate(all="ignore"):
            v = complex(_direct(node, np.zeros(1, dtype=complex))[0])
        if np.isfinite(v):
            return Const(complex(v))
    return node


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExpressionSyntaxError(f"expected {want!r}, got {got}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ExpressionSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = _fold(BinOp(op, node, self.term()))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = _fold(BinOp(op, node, self.unary()))
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return _fold(Neg(self.unary()))
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            tok = self.take("num")
            v = tok[1]
            if isinstance(v, complex) or v != int(v):
                raise ExpressionSyntaxError("exponent must be an integer (use pow() for others)", tok[2])
            return _fold(IntPow(base, sign * int(v)))
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Const(complex(val))
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "name":
            self.take()
            if val in ("z", "zeta", "ζ"):
                return Var()
            if val in ("i", "j"):
                return Const(1j)
            if val == "pi":
                return Const(complex(np.pi))
            if val == "e":
                return Const(complex(np.e))
            if val not in _ARITY:
                raise ExpressionSyntaxError(f"unknown identifier {val!r}", pos)
            self.take("op", "(")
            args = [self.expr()]
            while self.peek()[:2] == ("op", ","):
                self.take()
                args.append(self.expr())
            self.take("op", ")")
            lo, hi = _ARITY[val]
            if not lo <= len(args) <= hi:
                raise ExpressionSyntaxError(f"{val}() takes {lo}..{hi} arguments, got {len(args)}", pos)
            return _fold(self._call(val, args, pos))
        got = "end of input" if kind == "end" else repr(val)
        raise ExpressionSyntaxError(f"unexpected {got}", pos)

    def _const_arg(self, node, pos, what):
        if not isinstance(node, Const):
            raise ExpressionSyntaxError(f"{what} must be a constant", pos)
        return node.value

    def _call(self, name, args, pos):
        s = theta = None
        if name == "pow":
            s = self._const_arg(args[1], pos, "pow exponent")
            if len(args) == 3:
                theta = self._const_arg(args[2], pos, "cut angle").real
        elif name == "log" and len(args) == 2:
            theta = self._const_arg(args[1], pos, "cut angle").real
        if theta is not None and not -np.pi <= theta < np.pi:
            raise ExpressionSyntaxError("cut angle must lie in [-pi, pi)", pos)
        return Call(name, args[0], s=s, theta=theta)


def parse_expr(text: str) -> FunctionExpr:
    """Parse ``text`` into a :class:`FunctionExpr`."""
    if not isinstance(text, str):
        raise ParameterError("expression must be a string")
    return FunctionExpr(_Parser(text).parse(), text=text.strip())


def as_function(f):
    """Coerce strings to :class:`FunctionExpr`; pass callables through."""
    if isinstance(f, str):
        return parse_expr(f)
    if callable(f):
        return f
    if np.isscalar(f):
        return FunctionExpr(Const(complex(f)))
    raise ParameterError(f"cannot interpret {f!r} as a function")


def logabs_of(f, z):
    """``log|f(z)|`` using the overflow-safe path when ``f`` offers one."""
    if hasattr(f, "logabs"):
        return np.asarray(f.logabs(z), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(f(z), dtype=complex)))
