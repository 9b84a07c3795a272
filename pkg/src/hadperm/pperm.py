"""Partial permutations of {1, ..., M} and the semigroups they generate.

A partial permutation is a bijection between two subsets of {1, ..., M},
encoded as a dense image array where entry j holds sigma(j) and 0 marks an
undefined point.  Composition follows function application: (sigma tau)(j) is
sigma(tau(j)) when both steps are defined and undefined otherwise.  The module
also provides exact counting, deterministic enumeration, breadth-first
semigroup closure, the order-preserving embedding into total permutations of a
larger ground set, and the exact transpose-map identity check for the 0/1
matrix picture u_ij(sigma) = [sigma(j) = i].
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import FormatError, LimitExceeded, SizeMismatch, TooManyUndefined

__all__ = [
    "PartialPermutation",
    "Semigroup",
    "compose",
    "invert",
    "count_all",
    "enumerate_all",
    "generate_semigroup",
    "embed_total",
    "verify_subantipode",
    "asymptotic_ratio",
    "parse_pperm",
    "format_pperm",
    "parse_semigroup",
    "format_semigroup",
]

DEFAULT_ENUM_LIMIT = 7


class PartialPermutation:
    """A partially defined injection on {1, ..., M}.

    ``image[j-1]`` holds sigma(j) with 0 meaning undefined; nonzero values
    are pairwise distinct.  Instances are immutable and hashable, with the
    image tuple as the canonical identity.
    """

    __slots__ = ("size", "image")

    def __init__(self, image: Sequence[int]):
        img = tuple(int(v) for v in image)
        m = len(img)
        if m == 0:
            raise ValueError("size must be positive")
        seen = set()
        for v in img:
            if not 0 <= v <= m:
                raise ValueError(f"image value {v} out of range for size {m}")
            if v and v in seen:
                raise ValueError(f"image value {v} repeated; not injective")
            if v:
                seen.add(v)
        self.size = m
        self.image = img

    @classmethod
    def identity(cls, size: int) -> "PartialPermutation":
        return cls(range(1, size + 1))

    @classmethod
    def empty(cls, size: int) -> "PartialPermutation":
        """The nowhere-defined map."""
        return cls([0] * size)

    @classmethod
    def from_pairs(cls, size: int, pairs: Mapping[int, int]) -> "PartialPermutation":
        """Build from a {j: sigma(j)} mapping with 1-based points."""
        img = [0] * size
        for j, i in pairs.items():
            if not (1 <= j <= size and 1 <= i <= size):
                raise ValueError(f"pair {j}->{i} out of range for size {size}")
            img[j - 1] = i
        return cls(img)

    def __call__(self, j: int) -> int | None:
        """sigma(j) for 1-based j, or None where undefined."""
        if not 1 <= j <= self.size:
            raise ValueError(f"point {j} out of range")
        v = self.image[j - 1]
        return v if v else None

    def domain(self) -> frozenset[int]:
        return frozenset(j for j, v in enumerate(self.image, start=1) if v)

    def image_set(self) -> frozenset[int]:
        return frozenset(v for v in self.image if v)

    @property
    def defect(self) -> int:
        """Number of undefined points."""
        return sum(1 for v in self.image if not v)

    @property
    def is_total(self) -> bool:
        return all(self.image)

    def matrix(self) -> np.ndarray:
        """0/1 matrix u with u[i-1, j-1] = 1 exactly when sigma(j) = i."""
        u = np.zeros((self.size, self.size), dtype=int)
        for j, v in enumerate(self.image):
            if v:
                u[v - 1, j] = 1
        return u

    def inverse(self) -> "PartialPermutation":
        return invert(self)

    def __mul__(self, other: "PartialPermutation") -> "PartialPermutation":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialPermutation):
            return NotImplemented
        return self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __str__(self) -> str:
        return format_pperm(self)

    def __repr__(self) -> str:
        return f"PartialPermutation({list(self.image)!r})"


def compose(sigma: PartialPermutation, tau: PartialPermutation) -> PartialPermutation:
    """(sigma tau)(j) = sigma(tau(j)) where both applications are defined."""
    if sigma.size != tau.size:
        raise SizeMismatch(f"sizes differ: {sigma.size} vs {tau.size}")
    s_img = sigma.image
    return PartialPermutation([s_img[t - 1] if t else 0 for t in tau.image])


def invert(sigma: PartialPermutation) -> PartialPermutation:
    """The inverse bijection: sigma^{-1}(i) = j exactly when sigma(j) = i."""
    img = [0] * sigma.size
    for j, v in enumerate(sigma.image, start=1):
        if v:
            img[v - 1] = j
    return PartialPermutation(img)


def count_all(n: int) -> int:
    """Number of partial permutations of {1, ..., n}: sum_k k! C(n,k)^2.

    Exact big-integer arithmetic; the sequence starts 1, 2, 7, 34, 209, ...
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(math.factorial(k) * math.comb(n, k) ** 2 for k in range(n + 1))


def enumerate_all(
    n: int, *, limit: int = DEFAULT_ENUM_LIMIT
) -> Iterator[PartialPermutation]:
    """Yield every partial permutation of {1, ..., n} exactly once.

    Order: by number of defined points, then lexicographically on the image
    array.  Guarded by ``limit`` because the count grows super-factorially.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise LimitExceeded(f"enumeration size {n} exceeds limit {limit}")
    for k in range(n + 1):
        batch = []
        for positions in itertools.combinations(range(n), k):
            for values in itertools.permutations(range(1, n + 1), k):
                img = [0] * n
                for pos, val in zip(positions, values):
                    img[pos] = val
                batch.append(tuple(img))
        batch.sort()
        for img in batch:
            yield PartialPermutation(img)


class Semigroup:
    """A finite composition-closed set of equal-size partial permutations.

    ``elements`` preserves the deterministic breadth-first closure order;
    ``generators`` records the deduplicated generating set.
    """

    __slots__ = ("size", "elements", "generators", "_members")

    def __init__(
        self,
        size: int,
        elements: Sequence[PartialPermutation],
        generators: Sequence[PartialPermutation],
    ):
        self.size = size
        self.elements = tuple(elements)
        self.generators = tuple(generators)
        self._members = frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        return item in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, Semigroup):
            return NotImplemented
        return self.size == other.size and self._members == other._members

    __hash__ = None

    def is_group(self) -> bool:
        """True when the elements form a group of total permutations."""
        if PartialPermutation.identity(self.size) not in self._members:
            return False
        return all(
            e.is_total and invert(e) in self._members for e in self.elements
        )

    def __repr__(self) -> str:
        return f"Semigroup(size={self.size}, order={len(self.elements)})"


def generate_semigroup(generators: Iterable[PartialPermutation]) -> Semigroup:
    """Smallest composition-closed set containing the generators.

    Breadth-first closure with a seen-set; element order is insertion order,
    so reports are reproducible.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    size = gens[0].size
    for g in gens:
        if g.size != size:
            raise SizeMismatch(f"generator sizes differ: {g.size} vs {size}")
    unique_gens = list(dict.fromkeys(gens))
    seen: set[PartialPermutation] = set(unique_gens)
    order: list[PartialPermutation] = list(unique_gens)
    idx = 0
    while idx < len(order):
        x = order[idx]
        idx += 1
        # Pair x against everything discovered so far; pairs with elements
        # found later are handled when those are dequeued.
        for y in list(order):
            for product in (compose(x, y), compose(y, x)):
                if product not in seen:
                    seen.add(product)
                    order.append(product)
    return Semigroup(size, order, unique_gens)


def embed_total(sigma: PartialPermutation, n: int) -> PartialPermutation:
    """Extend sigma to a total permutation of {1, ..., n}.

    With X = domain, Y = image, X^c = {x_1 < ... < x_L} and
    Y^c = {y_1 < ... < y_L} (complements inside {1, ..., M}), the extension
    maps x_r -> M + r, M + r -> y_r, and fixes every point above M + L.
    Restricted to points <= M the extension agrees with sigma exactly:
    sigma'(j) = i iff sigma(j) = i for i, j <= M.
    """
    m = sigma.size
    undefined = [j for j, v in enumerate(sigma.image, start=1) if not v]
    missing = sorted(set(range(1, m + 1)) - set(sigma.image))
    count = len(undefined)
    if m + count > n:
        raise TooManyUndefined(
            f"{count} undefined points need ground set of at least {m + count}, got {n}"
        )
    img = [0] * n
    for j, v in enumerate(sigma.image):
        img[j] = v
    for r, x in enumerate(undefined, start=1):
        img[x - 1] = m + r
    for r, y in enumerate(missing, start=1):
        img[m + r - 1] = y
    for idx in range(m + count, n):
        img[idx] = idx + 1
    return PartialPermutation(img)


def verify_subantipode(size: int, *, limit: int = DEFAULT_ENUM_LIMIT) -> bool:
    """Exactly verify the transpose-map identity on all partial permutations.

    For u_ij(sigma) = [sigma(j) = i] the identity reads
    ``sum_{k,l} u_ki u_kl u_jl = u_ji`` for all i, j, which in matrix form is
    ``u^T u u^T = u^T``.  Checked in exact integer arithmetic over every
    element of the given size.
    """
    for sigma in enumerate_all(size, limit=limit):
        u = sigma.matrix()
        if not np.array_equal(u.T @ u @ u.T, u.T):
            return False
    return True


def asymptotic_ratio(n: int) -> float:
    """count_all(n) divided by the closed-form large-n estimate
    ``n! * sqrt(exp(4*sqrt(n) - 1) / (4*pi*sqrt(n)))``, evaluated in log space
    so huge factorials stay exact."""
    if n < 1:
        raise ValueError("n must be positive")
    log_estimate = (
        math.log(math.factorial(n))
        + 0.5 * (4.0 * math.sqrt(n) - 1.0)
        - 0.5 * math.log(4.0 * math.pi * math.sqrt(n))
    )
    return math.exp(math.log(count_all(n)) - log_estimate)


# --------------------------------------------------------------------------
# Serialization: 'M: v1 v2 ... vM' with '_' for undefined points; semigroups
# as a 'semigroup M order' header followed by one element per line.

def format_pperm(sigma: PartialPermutation) -> str:
    body = " ".join(str(v) if v else "_" for v in sigma.image)
    return f"{sigma.size}: {body}"


def parse_pperm(text: str) -> PartialPermutation:
    head, _, body = text.partition(":")
    if not body:
        raise FormatError(f"expected 'M: v1 ... vM', got {text!r}")
    try:
        size = int(head.strip())
    except ValueError as exc:
        raise FormatError(f"bad size in {text!r}") from exc
    tokens = body.split()
    if len(tokens) != size:
        raise FormatError(f"expected {size} values, got {len(tokens)}")
    img = []
    for tok in tokens:
        if tok == "_":
            img.append(0)
            continue
        try:
            img.append(int(tok))
        except ValueError as exc:
            raise FormatError(f"bad value {tok!r}") from exc
    try:
        return PartialPermutation(img)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_semigroup(semigroup: Semigroup) -> str:
    lines = [f"semigroup {semigroup.size} {len(semigroup)}"]
    lines.extend(format_pperm(e) for e in semigroup)
    return "\n".join(lines) + "\n"


def parse_semigroup(text: str) -> Semigroup:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty semigroup document")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "semigroup":
        raise FormatError("expected 'semigroup M order' header")
    try:
        size, count = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FormatError("bad semigroup header") from exc
    elements = [parse_pperm(ln) for ln in lines[1:]]
    if len(elements) != count:
        raise FormatError(f"expected {count} elements, got {len(elements)}")
    members = set(elements)
    if len(members) != len(elements):
        raise FormatError("duplicate elements")
    for e in elements:
        if e.size != size:
            raise FormatError("element size disagrees with header")
    for a in elements:
        for b in elements:
            if compose(a, b) not in members:
                raise FormatError("element set is not closed under composition")
    return Semigroup(size, elements, elements)
