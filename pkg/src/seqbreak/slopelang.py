"""Slope signatures and a small regular-expression language over them.

A represented sequence is quantized segment by segment into ``P`` (rising
faster than ``phi``), ``N`` (falling faster than ``phi``) or ``Z``
(anything in between).  Shape queries are regular expressions over that
alphabet::

    alt  := cat ('|' cat)*
    cat  := rep+
    rep  := atom ('*' | '?')?
    atom := 'P' | 'N' | 'Z' | '(' alt ')'

``+``, ``-`` and ``0`` are accepted as aliases for ``P``, ``N`` and ``Z``
so that ``0*(+)(-)0*(+)(-)0*`` is a valid query.  There is deliberately no
Kleene plus; write ``PP*``.  Patterns compile to a Thompson NFA which is
simulated state-set by state-set, so matching is linear in the signature
length.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

from .errors import PatternSyntaxError
from .segmenter import RepresentedSequence

ALPHABET = "PNZ"
ALIASES = {"P": "P", "N": "N", "Z": "Z", "+": "P", "-": "N", "0": "Z"}


@dataclass(frozen=True)
class SlopeConfig:
    phi: float = 0.3

    def __post_init__(self):
        if not (self.phi >= 0 and self.phi != float("inf")):
            raise ValueError(f"phi must be finite and >= 0, got {self.phi}")


@dataclass(frozen=True)
class SlopeSignature:
    symbols: str
    segment_spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.symbols) != len(self.segment_spans):
            raise ValueError("one span per symbol required")
        if set(self.symbols) - set(ALPHABET):
            raise ValueError(f"symbols outside {ALPHABET}: {self.symbols!r}")

    def __str__(self):
        return self.symbols

    def __len__(self):
        return len(self.symbols)


def quantize(slope: float, phi: float) -> str:
    if slope > phi:
        return "P"
    if slope < -phi:
        return "N"
    return "Z"


def signature(rep: RepresentedSequence, cfg: SlopeConfig = SlopeConfig()) -> SlopeSignature:
    """Quantize each segment's stored (``rep_line``) slope."""
    return SlopeSignature(
        "".join(quantize(seg.rep_line.slope, cfg.phi) for seg in rep.segments),
        tuple((seg.start, seg.end) for seg in rep.segments),
    )


# -- AST ---------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    symbol: str


@dataclass(frozen=True)
class Cat:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    options: tuple


@dataclass(frozen=True)
class Star:
    child: object


@dataclass(frozen=True)
class Opt:
    child: object


PatternAST = Union[Lit, Cat, Alt, Star, Opt]


def depth(node: PatternAST) -> int:
    if isinstance(node, Lit):
        return 1
    if isinstance(node, (Star, Opt)):
        return 1 + depth(node.child)
    children = node.parts if isinstance(node, Cat) else node.options
    return 1 + max(depth(c) for c in children)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        offset = len(self.text[: self.pos].encode("utf-8"))
        raise PatternSyntaxError(message, self.text, offset)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self):
        node = self.alt()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.peek()!r}")
        return node

    def alt(self):
        options = [self.cat()]
        while self.peek() == "|":
            self.pos += 1
            options.append(self.cat())
        return options[0] if len(options) == 1 else Alt(tuple(options))

    def cat(self):
        parts = [self.rep()]
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.rep())
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def rep(self):
        node = self.atom()
        ch = self.peek()
        if ch == "*":
            self.pos += 1
            node = Star(node)
        elif ch == "?":
            self.pos += 1
            node = Opt(node)
        return node

    def atom(self):
        ch = self.peek()
        if ch is None:
            self.error("unexpected end of pattern")
        if ch in ALIASES:
            self.pos += 1
            return Lit(ALIASES[ch])
        if ch == "(":
            self.pos += 1
            node = self.alt()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return node
        self.error(f"unexpected {ch!r}")


def parse_pattern(text: str) -> PatternAST:
    if not text:
        raise PatternSyntaxError("empty pattern", text, 0)
    return _Parser(text).parse()


def unparse(node: PatternAST) -> str:
    """Canonical text for an AST, using the P/N/Z letters."""
    if isinstance(node, Lit):
        return node.symbol
    if isinstance(node, Alt):
        return "|".join(unparse(o) for o in node.options)
    if isinstance(node, Cat):
        return "".join(f"({unparse(p)})" if isinstance(p, Alt) else unparse(p) for p in node.parts)
    inner = unparse(node.child)
    if not isinstance(node.child, Lit):
        inner = f"({inner})"
    return inner + ("*" if isinstance(node, Star) else "?")


# -- Thompson NFA ------------------------------------------------------

class Pattern:
    """Compiled NFA for one pattern; immutable once built."""

    def __init__(self, ast: PatternAST):
        self.ast = ast
        self._eps: list[list[int]] = []
        self._sym: list[tuple[str, int] | None] = []
        self.start_state, self.accept_state = self._build(ast)
        self._closures = [self._closure_of(s) for s in range(len(self._eps))]
        self.initial = self._closures[self.start_state]

    def _new(self) -> int:
        self._eps.append([])
        self._sym.append(None)
        return len(self._eps) - 1

    def _build(self, node) -> tuple[int, int]:
        if isinstance(node, Lit):
            s, a = self._new(), self._new()
            self._sym[s] = (node.symbol, a)
            return s, a
        if isinstance(node, Cat):
            first_s, prev_a = self._build(node.parts[0])
            for part in node.parts[1:]:
                s, a = self._build(part)
                self._eps[prev_a].append(s)
                prev_a = a
            return first_s, prev_a
        if isinstance(node, Alt):
            s, a = self._new(), self._new()
            for opt in node.options:
                os_, oa = self._build(opt)
                self._eps[s].append(os_)
                self._eps[oa].append(a)
            return s, a
        if isinstance(node, (Star, Opt)):
            s, a = self._new(), self._new()
            cs, ca = self._build(node.child)
            self._eps[s] += [cs, a]
            self._eps[ca].append(a)
            if isinstance(node, Star):
                self._eps[ca].append(cs)
            return s, a
        raise TypeError(f"not a pattern node: {node!r}")

    def _closure_of(self, state: int) -> frozenset:
        seen = {state}
        todo = [state]
        while todo:
            for nxt in self._eps[todo.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return frozenset(seen)

    def step(self, states: frozenset, symbol: str) -> frozenset:
        out = set()
        for s in states:
            edge = self._sym[s]
            if edge is not None and edge[0] == symbol:
                out |= self._closures[edge[1]]
        return frozenset(out)

    def accepts(self, states: frozenset) -> bool:
        return self.accept_state in states

    def full_match(self, symbols: str) -> bool:
        states = self.initial
        for ch in symbols:
            states = self.step(states, ch)
            if not states:
                return False
        return self.accepts(states)

    def longest_from(self, symbols: str, start: int) -> int | None:
        """End (inclusive) of the longest non-empty match starting at ``start``."""
        states = self.initial
        end = None
        for pos in range(start, len(symbols)):
            states = self.step(states, symbols[pos])
            if not states:
                break
            if self.accepts(states):
                end = pos
        return end


@lru_cache(maxsize=256)
def _compile_cached(ast) -> Pattern:
    return Pattern(ast)


def compile_pattern(pattern) -> Pattern:
    """Accepts pattern text, an AST or an already compiled pattern."""
    if isinstance(pattern, Pattern):
        return pattern
    if isinstance(pattern, str):
        pattern = parse_pattern(pattern)
    return _compile_cached(pattern)


def _symbols(sig) -> str:
    return sig.symbols if isinstance(sig, SlopeSignature) else str(sig)


def full_match(pattern, sig) -> bool:
    """Anchored match of the whole signature."""
    return compile_pattern(pattern).full_match(_symbols(sig))


class Occurrence(NamedTuple):
    start_symbol: int
    end_symbol: int
    start_index: int | None
    end_index: int | None


def find_occurrences(pattern, sig) -> list[Occurrence]:
    """Longest non-empty match for every start position that has one.

    When ``sig`` is a :class:`SlopeSignature` the spans are also mapped back
    to series indices; for a plain string those fields are ``None``.
    """
    compiled = compile_pattern(pattern)
    symbols = _symbols(sig)
    spans = sig.segment_spans if isinstance(sig, SlopeSignature) else None
    found = []
    for start in range(len(symbols)):
        end = compiled.longest_from(symbols, start)
        if end is None:
            continue
        if spans is None:
            found.append(Occurrence(start, end, None, None))
        else:
            found.append(Occurrence(start, end, spans[start][0], spans[end][1]))
    return found
