"""Textual bra-ket expressions: lexer, recursive-descent parser, evaluator.

The accepted grammar (whitespace-insensitive):

    expr   := term (('+'|'-') term)*
    term   := factor (('*')? factor)* ('/' scalar)?
    factor := scalar | ket | '(' expr ')' | '-' factor
    scalar := number | 'sqrt' '(' number ')' | 'i'
    ket    := '|' [01]+ '>'

Products are written by juxtaposition ("0.5|00>") or with '*'.  Every ket in
one expression must use the same bitstring width; ``|b1 b2 ... bn>`` maps to
basis index sum(b_j * 2^(n-j)), leftmost bit most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InputError, KetParseError

ZERO_NORM_TOL = 1e-12
NORM_DRIFT_TOL = 1e-9


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class StateVector:
    """Pure state of ``qubits`` qubits in computational-basis order.

    ``norm_drift`` records how far the pre-normalization amplitudes were from
    unit norm; ``drifted`` flags drift beyond 1e-9.
    """

    qubits: int
    amplitudes: np.ndarray
    norm_drift: float = 0.0

    def __post_init__(self):
        if self.qubits < 1:
            raise InputError(f"state needs at least one qubit, got {self.qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.qubits,):
            raise InputError(
                f"amplitude count {amps.shape} does not match {self.qubits} qubits"
            )
        if not np.isfinite(amps).all():
            raise InputError("amplitudes must be finite")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-9:
            raise InputError("amplitudes must be normalized")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        """Normalize raw amplitudes, recording the drift; rejects zero vectors."""
        a = np.asarray(amps, dtype=np.complex128).ravel()
        n = a.size.bit_length() - 1
        if a.size < 2 or a.size != 2**n:
            raise InputError(f"amplitude count must be a power of two >= 2, got {a.size}")
        if not np.isfinite(a).all():
            raise InputError("amplitudes must be finite")
        norm = float(np.linalg.norm(a))
        if norm < ZERO_NORM_TOL:
            raise InputError("state is the zero vector")
        return cls(n, a / norm, abs(norm - 1.0))

    @property
    def drifted(self) -> bool:
        return self.norm_drift > NORM_DRIFT_TOL


@dataclass(frozen=True)
class Partition:
    """Bipartition of an n-qubit register: the first k qubits form side A."""

    k: int
    qubits: int

    def __post_init__(self):
        if not 1 <= self.k <= self.qubits - 1:
            raise InputError(
                f"partition k must satisfy 1 <= k <= {self.qubits - 1}, got {self.k}"
            )

    @property
    def dim_a(self) -> int:
        return 2**self.k

    @property
    def dim_b(self) -> int:
        return 2 ** (self.qubits - self.k)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class ScalarLit:
    value: complex
    text: str


@dataclass(frozen=True)
class Ket:
    bits: str


@dataclass(frozen=True)
class Neg:
    operand: "KetExpr"


@dataclass(frozen=True)
class Add:
    left: "KetExpr"
    right: "KetExpr"


@dataclass(frozen=True)
class Sub:
    left: "KetExpr"
    right: "KetExpr"


@dataclass(frozen=True)
class Mul:
    left: "KetExpr"
    right: "KetExpr"


@dataclass(frozen=True)
class Div:
    left: "KetExpr"
    right: "KetExpr"


@dataclass(frozen=True)
class Paren:
    inner: "KetExpr"


KetExpr = Union[ScalarLit, Ket, Neg, Add, Sub, Mul, Div, Paren]


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER SQRT IMAG KET PLUS MINUS STAR SLASH LPAREN RPAREN END
    text: str
    pos: int


_PUNCT = {"+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH", "(": "LPAREN", ")": "RPAREN"}
_DIGITS = set("0123456789")


def _is_letter(ch: str) -> bool:
    # ASCII only: str.isalpha/isdigit accept Unicode lookalikes that the
    # grammar does not admit and float() cannot always parse
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch == "|":
            start = i
            i += 1
            j = i
            while j < n and text[j] in "01":
                j += 1
            if j == i:
                bad = text[j] if j < n else "end of input"
                raise KetParseError(
                    f"lexical error at position {j}: expected '0' or '1' after '|', got {bad!r}",
                    position=j,
                )
            if j >= n or text[j] != ">":
                bad = text[j] if j < n else "end of input"
                raise KetParseError(
                    f"lexical error at position {j}: expected '0', '1' or '>' in ket, got {bad!r}",
                    position=j,
                )
            tokens.append(Token("KET", text[i:j], start))
            i = j + 1
            continue
        if ch in _DIGITS:
            start = i
            while i < n and text[i] in _DIGITS:
                i += 1
            if i < n and text[i] == ".":
                i += 1
                if i >= n or text[i] not in _DIGITS:
                    raise KetParseError(
                        f"lexical error at position {i}: expected digits after decimal point",
                        position=i,
                    )
                while i < n and text[i] in _DIGITS:
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j] in _DIGITS:
                    while j < n and text[j] in _DIGITS:
                        j += 1
                    i = j
            tokens.append(Token("NUMBER", text[start:i], start))
            continue
        if _is_letter(ch):
            start = i
            while i < n and _is_letter(text[i]):
                i += 1
            word = text[start:i]
            if word == "sqrt":
                tokens.append(Token("SQRT", word, start))
            elif word == "i":
                tokens.append(Token("IMAG", word, start))
            else:
                raise KetParseError(
                    f"lexical error at position {start}: unknown word {word!r}",
                    position=start,
                )
            continue
        raise KetParseError(
            f"lexical error at position {i}: unexpected character {ch!r}", position=i
        )
    tokens.append(Token("END", "", n))
    return tokens


# ---------------------------------------------------------------------------
# parser

_FACTOR_START = ("NUMBER", "SQRT", "IMAG", "KET", "LPAREN")


@dataclass
class _Parser:
    tokens: list[Token]
    pos: int = 0
    ket_width: int | None = field(default=None)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            got = tok.text or "end of input"
            raise KetParseError(
                f"syntax error at position {tok.pos}: expected {what}, got {got!r}",
                position=tok.pos,
            )
        return self.advance()

    def expr(self) -> KetExpr:
        node = self.term()
        while self.peek().kind in ("PLUS", "MINUS"):
            op = self.advance()
            rhs = self.term()
            node = Add(node, rhs) if op.kind == "PLUS" else Sub(node, rhs)
        return node

    def term(self) -> KetExpr:
        node = self.factor()
        while True:
            kind = self.peek().kind
            if kind == "STAR":
                self.advance()
                node = Mul(node, self.factor())
            elif kind == "SLASH":
                self.advance()
                node = Div(node, self.scalar())
            elif kind in _FACTOR_START:
                node = Mul(node, self.factor())
            else:
                return node

    def factor(self) -> KetExpr:
        tok = self.peek()
        if tok.kind == "MINUS":
            self.advance()
            return Neg(self.factor())
        if tok.kind == "KET":
            self.advance()
            width = len(tok.text)
            if self.ket_width is None:
                self.ket_width = width
            elif width != self.ket_width:
                raise KetParseError(
                    f"ket width mismatch at position {tok.pos} "
                    f"({self.ket_width} vs {width})",
                    position=tok.pos,
                )
            return Ket(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.expr()
            self.expect("RPAREN", "')'")
            return Paren(inner)
        if tok.kind in ("NUMBER", "SQRT", "IMAG"):
            return self.scalar()
        got = tok.text or "end of input"
        raise KetParseError(
            f"syntax error at position {tok.pos}: expected a number, 'sqrt', 'i', "
            f"a ket, '(' or '-', got {got!r}",
            position=tok.pos,
        )

    def scalar(self) -> KetExpr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return ScalarLit(complex(float(tok.text)), tok.text)
        if tok.kind == "SQRT":
            self.advance()
            self.expect("LPAREN", "'(' after 'sqrt'")
            num = self.expect("NUMBER", "a number inside sqrt(...)")
            self.expect("RPAREN", "')'")
            value = float(num.text)
            if value <= 0.0:
                raise KetParseError(
                    f"syntax error at position {num.pos}: sqrt argument must be positive",
                    position=num.pos,
                )
            return ScalarLit(complex(math.sqrt(value)), f"sqrt({num.text})")
        if tok.kind == "IMAG":
            self.advance()
            return ScalarLit(1j, "i")
        got = tok.text or "end of input"
        raise KetParseError(
            f"syntax error at position {tok.pos}: expected a scalar "
            f"(number, sqrt(...) or 'i'), got {got!r}",
            position=tok.pos,
        )


def parse(text: str) -> KetExpr:
    """Parse an expression; raises KetParseError with a position on failure."""
    parser = _Parser(_lex(text))
    node = parser.expr()
    tok = parser.peek()
    if tok.kind != "END":
        raise KetParseError(
            f"syntax error at position {tok.pos}: unexpected {tok.text!r} after expression",
            position=tok.pos,
        )
    return node


# ---------------------------------------------------------------------------
# evaluation


def _eval(node: KetExpr):
    # returns complex for scalar subexpressions, ndarray for ket-valued ones
    if isinstance(node, ScalarLit):
        return node.value
    if isinstance(node, Ket):
        amps = np.zeros(2 ** len(node.bits), dtype=np.complex128)
        amps[int(node.bits, 2)] = 1.0
        return amps
    if isinstance(node, Paren):
        return _eval(node.inner)
    if isinstance(node, Neg):
        return -_eval(node.operand)
    if isinstance(node, (Add, Sub)):
        left, right = _eval(node.left), _eval(node.right)
        sign = 1.0 if isinstance(node, Add) else -1.0
        scalars = isinstance(left, complex), isinstance(right, complex)
        if scalars == (True, True):
            return left + sign * right
        if scalars == (False, False):
            if left.shape != right.shape:
                raise InputError(
                    f"ket width mismatch ({left.size.bit_length() - 1} vs "
                    f"{right.size.bit_length() - 1})"
                )
            return left + sign * right
        raise InputError("cannot add a scalar and a ket")
    if isinstance(node, Mul):
        left, right = _eval(node.left), _eval(node.right)
        if not isinstance(left, complex) and not isinstance(right, complex):
            raise InputError("cannot multiply two kets")
        return left * right
    if isinstance(node, Div):
        left, right = _eval(node.left), _eval(node.right)
        if not isinstance(right, complex):
            raise InputError("divisor must be a scalar")
        if abs(right) == 0.0:
            raise InputError("division by zero")
        return left / right
    raise InputError(f"unknown AST node {type(node).__name__}")


def evaluate(expr: KetExpr) -> StateVector:
    """Evaluate an AST to a normalized StateVector.

    Scalar-only expressions, zero vectors (full cancellation) and mixed ket
    widths are rejected.  Off-unit input norms are corrected and recorded in
    ``norm_drift``.
    """
    value = _eval(expr)
    if isinstance(value, complex):
        raise InputError("expression contains no ket")
    return StateVector.from_amplitudes(value)


def state_from_text(text: str) -> StateVector:
    return evaluate(parse(text))


# ---------------------------------------------------------------------------
# formatting


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_coefficient(z: complex) -> tuple[str, str]:
    # returns (sign, body): sign is "+" or "-", body never starts with '-'
    if abs(z.imag) < 1e-12:
        sign = "-" if z.real < 0 else "+"
        return sign, _fmt(abs(z.real))
    if abs(z.real) < 1e-12:
        sign = "-" if z.imag < 0 else "+"
        return sign, f"{_fmt(abs(z.imag))}i"
    op = "+" if z.imag >= 0 else "-"
    return "+", f"({_fmt(z.real)}{op}{_fmt(abs(z.imag))}i)"


def format_state(s: StateVector, tolerance: float = 1e-9) -> str:
    """Canonical text form: terms with |amplitude| > tolerance, 6 significant
    digits, global phase fixed so the first kept amplitude is real positive.
    """
    amps = s.amplitudes
    kept = [k for k in range(amps.size) if abs(amps[k]) > tolerance]
    if not kept:
        kept = [int(np.argmax(np.abs(amps)))]
    lead = amps[kept[0]]
    phased = amps * (np.conj(lead) / abs(lead))
    parts: list[str] = []
    for pos, k in enumerate(kept):
        bits = format(k, f"0{s.qubits}b")
        sign, body = _fmt_coefficient(complex(phased[k]))
        term = f"{body}|{bits}>"
        if pos == 0:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f" {sign} {term}")
    return "".join(parts)
