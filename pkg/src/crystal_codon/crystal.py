"""Crystal-basis combinatorics for tensor powers of the (1/2, 1/2) irrep.

Each letter of a word carries one sign per sl(2) factor (axis ``"H"`` and
axis ``"V"``).  The crystal operators act on one axis at a time through the
signature rule: adjacent ``(+, -)`` pairs cancel, the lowering operator flips
the leftmost surviving ``+`` and the raising operator flips the rightmost
surviving ``-``.  Connected components under these operators are the
irreducible constituents of the tensor power.
"""

from collections import defaultdict
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from types import MappingProxyType

__all__ = [
    "Sign",
    "TensorWord",
    "Weight",
    "IrrepLabel",
    "NUCLEOTIDE_SIGNS",
    "COPY_ORDER",
    "reduce_signature",
    "word_weight",
    "lowering",
    "raising",
    "decompose",
    "format_half",
]

AXES = ("H", "V")


class Sign(IntEnum):
    MINUS = -1
    PLUS = 1

    def flip(self):
        return Sign(-self)

    def __str__(self):
        return "+" if self is Sign.PLUS else "-"


PLUS, MINUS = Sign.PLUS, Sign.MINUS

# (H sign, V sign) of each nucleotide
NUCLEOTIDE_SIGNS = {
    "C": (PLUS, PLUS),
    "U": (MINUS, PLUS),
    "G": (PLUS, MINUS),
    "A": (MINUS, MINUS),
}
_LETTER_OF = {signs: letter for letter, signs in NUCLEOTIDE_SIGNS.items()}

# Order used to rank repeated irreps by their highest-weight word.
COPY_ORDER = "CGUA"


@dataclass(frozen=True)
class TensorWord:
    """A basis word: one H-sign sequence and one V-sign sequence."""

    h: tuple
    v: tuple

    def __post_init__(self):
        h = tuple(Sign(s) for s in self.h)
        v = tuple(Sign(s) for s in self.v)
        if len(h) != len(v) or not h:
            raise ValueError(
                f"sign sequences must be nonempty and of equal length, got {len(h)} and {len(v)}"
            )
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_letters(cls, letters):
        """Build the word of a nucleotide string such as ``"CCU"``."""
        try:
            pairs = [NUCLEOTIDE_SIGNS[ch] for ch in letters.upper().replace("T", "U")]
        except KeyError as exc:
            raise ValueError(f"unknown nucleotide {exc.args[0]!r} in {letters!r}") from None
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def letters(self):
        return "".join(_LETTER_OF[pair] for pair in zip(self.h, self.v))

    def __len__(self):
        return len(self.h)

    def axis(self, axis):
        if axis == "H":
            return self.h
        if axis == "V":
            return self.v
        raise ValueError(f"axis must be 'H' or 'V', got {axis!r}")

    def replace_axis(self, axis, signs):
        if axis == "H":
            return TensorWord(signs, self.v)
        return TensorWord(self.h, signs)

    def __str__(self):
        return self.letters


@dataclass(frozen=True, order=True)
class Weight:
    j3_h: Fraction
    j3_v: Fraction


@dataclass(frozen=True, order=True)
class IrrepLabel:
    j_h: Fraction
    j_v: Fraction
    copy: int = 1

    def __str__(self):
        return f"({format_half(self.j_h)},{format_half(self.j_v)})^{self.copy}"


def format_half(x):
    """``3/2`` style text for a half-integer."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def reduce_signature(signs):
    """Cancel adjacent ``(+, -)`` pairs until none remain.

    Returns
    -------
    a : int
        Number of surviving minus signs.
    b : int
        Number of surviving plus signs.
    survivors : tuple of int
        Zero-based positions of the surviving signs; all minuses precede all
        pluses.
    """
    if len(signs) == 0:
        raise ValueError("signature of an empty sequence")
    # stack of unmatched plus positions; a minus cancels the nearest one
    open_plus = []
    minus = []
    for pos, s in enumerate(signs):
        if s == PLUS:
            open_plus.append(pos)
        elif open_plus:
            open_plus.pop()
        else:
            minus.append(pos)
    return len(minus), len(open_plus), tuple(minus + open_plus)


def word_weight(word):
    return Weight(Fraction(sum(word.h), 2), Fraction(sum(word.v), 2))


def lowering(word, axis):
    """Flip the leftmost surviving plus on ``axis``; ``None`` if none survives."""
    signs = word.axis(axis)
    a, b, survivors = reduce_signature(signs)
    if b == 0:
        return None
    pos = survivors[a]
    flipped = signs[:pos] + (MINUS,) + signs[pos + 1:]
    return word.replace_axis(axis, flipped)


def raising(word, axis):
    """Flip the rightmost surviving minus on ``axis``; ``None`` if none survives."""
    signs = word.axis(axis)
    a, b, survivors = reduce_signature(signs)
    if a == 0:
        return None
    pos = survivors[a - 1]
    flipped = signs[:pos] + (PLUS,) + signs[pos + 1:]
    return word.replace_axis(axis, flipped)


def _copy_key(word):
    return tuple(COPY_ORDER.index(ch) for ch in word.letters)


@lru_cache(maxsize=None)
def decompose(n):
    """Split all ``4**n`` words into irreducible components.

    Returns a read-only mapping from every word to its ``(IrrepLabel,
    Weight)``.  Copies of a repeated irrep are numbered by the rank of their
    highest-weight word under the nucleotide order ``C < G < U < A``.
    """
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    words = [TensorWord.from_letters("".join(t)) for t in product("CUGA", repeat=n)]
    component_of = {}
    components = []
    for start in words:
        if start in component_of:
            continue
        idx = len(components)
        members = []
        stack = [start]
        component_of[start] = idx
        while stack:
            w = stack.pop()
            members.append(w)
            for axis in AXES:
                for op in (lowering, raising):
                    nb = op(w, axis)
                    if nb is not None and nb not in component_of:
                        component_of[nb] = idx
                        stack.append(nb)
        components.append(members)

    by_irrep = defaultdict(list)
    for idx, members in enumerate(components):
        tops = [w for w in members if raising(w, "H") is None and raising(w, "V") is None]
        if len(tops) != 1:
            raise AssertionError(f"component without a unique highest weight: {tops}")
        top_weight = word_weight(tops[0])
        by_irrep[(top_weight.j3_h, top_weight.j3_v)].append((_copy_key(tops[0]), idx))

    label_of_component = {}
    for (j_h, j_v), entries in by_irrep.items():
        for rank, (_, idx) in enumerate(sorted(entries), start=1):
            label_of_component[idx] = IrrepLabel(j_h, j_v, rank)

    return MappingProxyType(
        {w: (label_of_component[component_of[w]], word_weight(w)) for w in words}
    )
