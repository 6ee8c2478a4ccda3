"""Reduced free-group words and the Lead-or-Delay bookkeeping built on them.

A :class:`Delta` is an element of ``B* u B̄*``: a plain word (a lead) or the
inverse of a plain word (a delay). ``ZERO`` marks prefix-incomparable outputs,
``DROPPED`` marks a difference removed by a length bound.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

Signed = tuple[str, int]  # (letter, +1 or -1)
GroupWord = tuple[Signed, ...]


def reduce(seq: Iterable[Signed]) -> GroupWord:
    stack: list[Signed] = []
    for letter, sign in seq:
        if stack and stack[-1] == (letter, -sign):
            stack.pop()
        else:
            stack.append((letter, sign))
    return tuple(stack)


def inverse(w: Sequence[Signed]) -> GroupWord:
    return tuple((letter, -sign) for letter, sign in reversed(w))


def plain(word: str) -> GroupWord:
    return tuple((c, 1) for c in word)


class Delta:
    """``word`` itself when ``neg`` is false, its inverse otherwise.

    Values are interned, so equal elements are the same object and compare
    by identity; this keeps the large vector sets of the coverings cheap.
    """

    __slots__ = ("neg", "word", "_hash")
    _pool: dict = {}

    def __new__(cls, neg: bool, word: str):
        key = (bool(neg and word), word)
        d = cls._pool.get(key)
        if d is None:
            d = object.__new__(cls)
            object.__setattr__(d, "neg", key[0])
            object.__setattr__(d, "word", word)
            object.__setattr__(d, "_hash", hash(key))
            cls._pool[key] = d
        return d

    def __setattr__(self, name, value):
        raise AttributeError("Delta is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (Delta, (self.neg, self.word))

    def __repr__(self) -> str:
        return f"Delta(neg={self.neg}, word={self.word!r})"

    def __len__(self) -> int:
        return len(self.word)

    def group_word(self) -> GroupWord:
        w = plain(self.word)
        return inverse(w) if self.neg else w

    def __str__(self) -> str:
        return render(self)


class _Marker:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


ZERO = _Marker("ZERO")
DROPPED = _Marker("DROPPED")
EPS = Delta(False, "")

DeltaElem = Union[Delta, _Marker]


def pos(word: str) -> Delta:
    return Delta(False, word)


def neg(word: str) -> Delta:
    return Delta(True, word)


def rho(w: Sequence[Signed], bound: Optional[int] = None) -> DeltaElem:
    """Map a reduced word to Delta.

    Unbounded: mixed signs give ``ZERO``. Bounded by ``N``: anything outside
    ``B^{<=N} u B̄^{<=N}`` (mixed signs included) gives ``DROPPED``.
    """
    signs = {s for _, s in w}
    if len(signs) > 1:
        return ZERO if bound is None else DROPPED
    if bound is not None and len(w) > bound:
        return DROPPED
    if signs == {-1}:
        return neg("".join(letter for letter, _ in reversed(w)))
    return pos("".join(letter for letter, _ in w))


def ld_action(w: DeltaElem, x: str, y: str) -> DeltaElem:
    """``w . (x, y)``: reduce ``x̄ w y``; ``ZERO`` is absorbing."""
    if w is ZERO:
        return ZERO
    if not isinstance(w, Delta):
        raise TypeError(f"cannot act on {w!r}")
    return rho(reduce(inverse(plain(x)) + w.group_word() + plain(y)))


def ld(x: str, y: str) -> DeltaElem:
    """Lead or delay of output ``y`` relative to output ``x``."""
    return ld_action(EPS, x, y)


def lag(xs: Sequence[str], ys: Sequence[str]) -> int:
    """Largest ``|LD|`` over equal-length prefixes of two same-input computations."""
    if len(xs) != len(ys):
        raise ValueError("computations of different lengths")
    x = y = ""
    best = 0
    for step in range(len(xs) + 1):
        d = ld(x, y)
        if d is ZERO:
            # once incomparable, every longer prefix stays incomparable
            raise ValueError("incomparable outputs: lag undefined")
        best = max(best, len(d))
        if step < len(xs):
            x += xs[step]
            y += ys[step]
    return best


def sort_key(d: Delta) -> tuple:
    return (d.neg, len(d.word), d.word)


def render(d: DeltaElem) -> str:
    if d is ZERO:
        return "0"
    if not isinstance(d, Delta):
        raise TypeError(f"cannot render {d!r}")
    if not d.word:
        return "_"
    body = ".".join(d.word)
    return "~" + body if d.neg else body


def parse_delta(text: str) -> DeltaElem:
    if text == "0":
        return ZERO
    if text == "_":
        return EPS
    if text.startswith("~"):
        return neg(text[1:].replace(".", ""))
    return pos(text.replace(".", ""))


def render_set(items: Iterable[Delta]) -> str:
    return ",".join(render(d) for d in sorted(items, key=sort_key))
