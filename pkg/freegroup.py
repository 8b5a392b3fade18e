"""
Free groups and Fox calculus
Reduced words in syllable form, free differential calculus, abelianization and
exponent-sum normalizing changes of basis for two-generator relators
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import InputError
from laurent import LaurentPoly

logger = logging.getLogger(__name__)

Syllable = Tuple[int, int]


class FreeWord:
    """Freely reduced word stored as (generator index, nonzero exponent) syllables"""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[Syllable] = ()):
        stack: List[List[int]] = []
        for gen, exp in syllables:
            gen, exp = int(gen), int(exp)
            if gen < 0:
                raise InputError(f"generator index must be non-negative, got {gen}")
            if exp == 0:
                continue
            if stack and stack[-1][0] == gen:
                stack[-1][1] += exp
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([gen, exp])
        self.syllables: Tuple[Syllable, ...] = tuple((g, e) for g, e in stack)
        self._hash = None

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls()

    @classmethod
    def generator(cls, index: int, exp: int = 1) -> "FreeWord":
        return cls(((index, exp),))

    @classmethod
    def alternating(cls, first: int, second: int, length: int) -> "FreeWord":
        """Positive word first second first ... with `length` letters"""
        return cls((first if k % 2 == 0 else second, 1) for k in range(length))

    # Structure

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> List[Syllable]:
        out = []
        for gen, exp in self.syllables:
            sign = 1 if exp > 0 else -1
            out.extend([(gen, sign)] * abs(exp))
        return out

    def generators(self) -> List[int]:
        return sorted({g for g, _ in self.syllables})

    @property
    def is_positive(self) -> bool:
        return all(e > 0 for _, e in self.syllables)

    def exponent_sums(self, ngens: int) -> List[int]:
        sums = [0] * ngens
        for gen, exp in self.syllables:
            if gen >= ngens:
                raise InputError(f"generator {gen} outside the first {ngens} generators")
            sums[gen] += exp
        return sums

    # Group operations

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        return FreeWord(self.syllables + other.syllables)

    def concat(self, other: "FreeWord") -> "FreeWord":
        return self * other

    def inverse(self) -> "FreeWord":
        return FreeWord((g, -e) for g, e in reversed(self.syllables))

    def power(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.syllables * abs(n))

    def __pow__(self, n: int) -> "FreeWord":
        return self.power(n)

    def cyclic_reduce(self) -> "FreeWord":
        syllables = list(self.syllables)
        while len(syllables) > 1 and syllables[0][0] == syllables[-1][0]:
            gen, last = syllables.pop()
            merged = syllables[0][1] + last
            if merged:
                syllables[0] = (gen, merged)
            else:
                syllables.pop(0)
        return FreeWord(syllables)

    def substitute(self, images: Sequence["FreeWord"]) -> "FreeWord":
        """Image under the endomorphism sending generator i to images[i]"""
        out: List[Syllable] = []
        for gen, exp in self.syllables:
            if gen >= len(images):
                raise InputError(f"no image given for generator {gen}")
            out.extend(images[gen].power(exp).syllables)
        return FreeWord(out)

    def invert_generators(self) -> "FreeWord":
        """Image under the automorphism g -> g^-1 for every generator"""
        return FreeWord((g, -e) for g, e in self.syllables)

    def rotations(self) -> List["FreeWord"]:
        """All cyclic permutations of the letter sequence"""
        letters = self.letters()
        return [FreeWord(letters[k:] + letters[:k]) for k in range(max(len(letters), 1))]

    def is_cyclic_conjugate(self, other: "FreeWord") -> bool:
        u = self.cyclic_reduce()
        v = other.cyclic_reduce()
        if len(u) != len(v):
            return False
        return any(rotation == v for rotation in u.rotations())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.syllables == other.syllables

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.syllables)
        return self._hash

    def __lt__(self, other: "FreeWord") -> bool:
        return (len(self), self.syllables) < (len(other), other.syllables)

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.syllables:
            return "1"
        pieces = []
        for gen, exp in self.syllables:
            name = names[gen] if names is not None and gen < len(names) else f"x{gen}"
            pieces.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"FreeWord({self.format()!r})"


def word_ops(w1: FreeWord, w2: Optional[FreeWord], kind: str) -> FreeWord:
    """Word operation by name: concat, invert or cyclic_reduce (w2 only for concat)"""
    if kind == "concat":
        if w2 is None:
            raise InputError("concat needs two words")
        return w1 * w2
    if kind == "invert":
        return w1.inverse()
    if kind == "cyclic_reduce":
        return w1.cyclic_reduce()
    raise InputError(f"unknown word operation '{kind}'")


class GroupRingElem:
    """Element of the integral group ring of a free group"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[FreeWord, int]] = None):
        self.terms: Dict[FreeWord, int] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "GroupRingElem":
        return cls()

    @classmethod
    def from_word(cls, word: FreeWord, coeff: int = 1) -> "GroupRingElem":
        return cls({word: coeff})

    @classmethod
    def one(cls) -> "GroupRingElem":
        return cls.from_word(FreeWord.identity())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _accumulate(self, into: Dict[FreeWord, int], word: FreeWord, coeff: int):
        value = into.get(word, 0) + coeff
        if value:
            into[word] = value
        else:
            into.pop(word, None)

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            self._accumulate(terms, w, c)
        return GroupRingElem(terms)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElem":
        if isinstance(other, int):
            return GroupRingElem({w: c * other for w, c in self.terms.items()})
        if isinstance(other, FreeWord):
            other = GroupRingElem.from_word(other)
        terms: Dict[FreeWord, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                self._accumulate(terms, w1 * w2, c1 * c2)
        return GroupRingElem(terms)

    def __rmul__(self, other) -> "GroupRingElem":
        if isinstance(other, int):
            return self * other
        if isinstance(other, FreeWord):
            return GroupRingElem.from_word(other) * self
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        parts = [f"{c}*[{w}]" for w, c in sorted(self.terms.items())]
        return f"GroupRingElem({' + '.join(parts) or '0'})"


def fox_derivative(w: FreeWord, gen: int) -> GroupRingElem:
    """Fox derivative D_gen(w), expanded syllable by syllable"""
    terms: Dict[FreeWord, int] = {}
    prefix = FreeWord.identity()
    for g, e in w.syllables:
        if g == gen:
            if e > 0:
                for k in range(e):
                    word = prefix * FreeWord.generator(g, k)
                    terms[word] = terms.get(word, 0) + 1
            else:
                for k in range(1, -e + 1):
                    word = prefix * FreeWord.generator(g, -k)
                    terms[word] = terms.get(word, 0) - 1
        prefix = prefix * FreeWord.generator(g, e)
    return GroupRingElem(terms)


@dataclass(frozen=True)
class AbMap:
    """Homomorphism from a free group onto a free abelian group of rank `rank`"""
    rank: int
    images: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for index, image in enumerate(self.images):
            if len(image) != self.rank:
                raise InputError(f"image of generator {index} has length {len(image)}, expected {self.rank}")

    @property
    def ngens(self) -> int:
        return len(self.images)

    def image(self, gen: int) -> Tuple[int, ...]:
        if not 0 <= gen < len(self.images):
            raise InputError(f"generator {gen} is not covered by the abelianization map")
        return self.images[gen]

    def word_image(self, w: FreeWord) -> Tuple[int, ...]:
        total = [0] * self.rank
        for gen, exp in w.syllables:
            for i, x in enumerate(self.image(gen)):
                total[i] += exp * x
        return tuple(total)

    def monomial(self, gen: int) -> LaurentPoly:
        return LaurentPoly.monomial(self.image(gen))


def abelianize(e: GroupRingElem, m: AbMap) -> LaurentPoly:
    terms: Dict[Tuple[int, ...], int] = {}
    for word, coeff in e.terms.items():
        key = m.word_image(word)
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPoly(m.rank, terms)


def abelianized_fox(w: FreeWord, gen: int, m: AbMap) -> LaurentPoly:
    """abelianize(fox_derivative(w, gen), m) without building the group ring element"""
    terms: Dict[Tuple[int, ...], int] = {}
    prefix = [0] * m.rank
    for g, e in w.syllables:
        step = m.image(g)
        if g == gen:
            if e > 0:
                ks, sign = range(e), 1
            else:
                ks, sign = range(-1, e - 1, -1), -1
            for k in ks:
                key = tuple(p + k * x for p, x in zip(prefix, step))
                terms[key] = terms.get(key, 0) + sign
        prefix = [p + e * x for p, x in zip(prefix, step)]
    return LaurentPoly(m.rank, terms)


def exponent_sums(w: FreeWord, ngens: int) -> List[int]:
    return w.exponent_sums(ngens)


@dataclass(frozen=True)
class BasisChange:
    """New free basis (a, t) of a rank-two free group and the relator rewritten in it"""
    a: FreeWord
    t: FreeWord
    relator: FreeWord
    old_in_new: Tuple[FreeWord, FreeWord]
    divisor: int

    @property
    def basis(self) -> Tuple[FreeWord, FreeWord]:
        return self.a, self.t


def nielsen_normalize(w: FreeWord) -> BasisChange:
    """Drive the exponent sums of a two-generator word to (d, 0), d = gcd >= 0.

    Elementary Nielsen moves follow the Euclidean algorithm on the sums:
    g1 -> g1 g0^k lowers sigma_0 by k*sigma_1 and g0 -> g0 g1^k lowers
    sigma_1 by k*sigma_0.
    """
    if any(g > 1 for g in w.generators()):
        raise InputError("expected a word in two generators")
    s0, s1 = w.exponent_sums(2)
    basis = [FreeWord.generator(0), FreeWord.generator(1)]
    old = [FreeWord.generator(0), FreeWord.generator(1)]

    def rewrite(letter: int, image: FreeWord):
        images = [FreeWord.generator(0), FreeWord.generator(1)]
        images[letter] = image
        for i in range(2):
            old[i] = old[i].substitute(images)

    while s0 and s1:
        if abs(s0) >= abs(s1):
            k = s0 // s1
            basis[1] = basis[1] * basis[0].power(k)
            rewrite(1, FreeWord(((1, 1), (0, -k))))
            s0 -= k * s1
        else:
            k = s1 // s0
            basis[0] = basis[0] * basis[1].power(k)
            rewrite(0, FreeWord(((0, 1), (1, -k))))
            s1 -= k * s0

    if s0 == 0 and s1 != 0:
        basis.reverse()
        rewrite_swap = [FreeWord.generator(1), FreeWord.generator(0)]
        old = [word.substitute(rewrite_swap) for word in old]
        s0, s1 = s1, 0
    if s0 < 0:
        basis[0] = basis[0].inverse()
        old = [word.substitute([FreeWord.generator(0, -1), FreeWord.generator(1)]) for word in old]
        s0 = -s0

    relator = w.substitute(old)
    logger.debug(f"normalized {w} to {relator} with sums ({s0}, 0)")
    return BasisChange(a=basis[0], t=basis[1], relator=relator,
                       old_in_new=(old[0], old[1]), divisor=s0)


def normalize_two_gen_basis(w: FreeWord) -> Tuple[Tuple[FreeWord, FreeWord], FreeWord]:
    """Basis (a, t) in x, y and the relator rewritten with exponent sums (1, 0)"""
    if any(g > 1 for g in w.generators()):
        raise InputError("expected a word in two generators")
    s0, s1 = w.exponent_sums(2)
    if gcd(s0, s1) != 1:
        raise InputError(f"exponent sums ({s0}, {s1}) have gcd {gcd(s0, s1)}, expected 1")
    change = nielsen_normalize(w)
    return change.basis, change.relator
