"""Chain basis of the truncated Hilbert space.

A basis state of the cutoff Hilbert space in ambient dimension D is labelled
by a chain of branching integers

    (l_d, l_{d-1}, ..., l_2, l_1),    d = D - 1,

with l_d >= l_{d-1} >= ... >= l_2 >= |l_1|.  The top entry l_d is the total
degree ("level") and runs from 0 to the cutoff.  Chains are plain tuples in
this descending order throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Chain = tuple  # alias for readability; a chain is a tuple of ints


def is_valid_chain(chain, D=None, cutoff=None):
    """True iff the tuple satisfies the branching inequalities."""
    if len(chain) < 2 or any(not isinstance(v, int) for v in chain):
        return False
    if D is not None and len(chain) != D - 1:
        return False
    top = chain[0]
    if top < 0 or (cutoff is not None and top > cutoff):
        return False
    for a, b in zip(chain, chain[1:-1]):
        if a < b or b < 0:
            return False
    return chain[-2] >= abs(chain[-1])


def chain_level(chain, j):
    """Entry l_j of a chain stored in descending order (j = 1 is last)."""
    return chain[len(chain) - j]


@dataclass(frozen=True)
class FuzzyConfig:
    """One fuzzy sphere build: ambient dimension D, cutoff level, well stiffness k.

    The cutoff energy must sit below the first radial excitation, which
    requires cutoff*(cutoff + D - 2) < 2*sqrt(2k).
    """

    D: int
    cutoff: int
    k: float

    def __post_init__(self):
        if not isinstance(self.D, int) or self.D < 3:
            raise ValueError(f"ambient dimension must be an integer >= 3, got {self.D}")
        if not isinstance(self.cutoff, int) or self.cutoff < 0:
            raise ValueError(f"cutoff must be an integer >= 0, got {self.cutoff}")
        if self.k <= 0:
            raise ValueError(f"stiffness k must be positive, got {self.k}")
        energy = self.cutoff * (self.cutoff + self.D - 2)
        if not energy < 2.0 * math.sqrt(2.0 * self.k):
            raise ValueError(
                f"cutoff energy {energy} violates the consistency bound "
                f"{energy} < 2*sqrt(2k) = {2.0 * math.sqrt(2.0 * self.k):.6g}"
            )

    @property
    def d(self):
        """Sphere dimension D - 1."""
        return self.D - 1


def dimension(D, cutoff):
    """Dimension of the cutoff Hilbert space.

    Closed form C(cutoff+D-2, cutoff-1) * (2*cutoff+D-1) / cutoff for
    cutoff >= 1; by convention 1 for cutoff = 0 (only the constant state).
    """
    if D < 3:
        raise ValueError(f"ambient dimension must be >= 3, got {D}")
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    if cutoff == 0:
        return 1
    num = math.comb(cutoff + D - 2, cutoff - 1) * (2 * cutoff + D - 1)
    q, r = divmod(num, cutoff)
    assert r == 0
    return q


def level_dimension(D, l):
    """Number of chains with fixed top entry l (dimension of one irrep block)."""
    if l == 0:
        return 1
    num = math.comb(D + l - 3, l - 1) * (D + 2 * l - 2)
    q, r = divmod(num, l)
    assert r == 0
    return q


def _extend(prefix, upper, entries_left):
    """Yield all descending continuations below `upper`, last entry signed."""
    if entries_left == 1:
        for m in range(-upper, upper + 1):
            yield prefix + (m,)
        return
    for m in range(upper + 1):
        yield from _extend(prefix + (m,), m, entries_left - 1)


def iter_chains(D, cutoff):
    """All chains for (D, cutoff) in canonical (ascending lexicographic) order."""
    if D < 3:
        raise ValueError(f"ambient dimension must be >= 3, got {D}")
    for top in range(cutoff + 1):
        yield from sorted(_extend((top,), top, D - 2))


@dataclass(frozen=True)
class BasisMap:
    """Immutable ordered chain basis with forward and reverse lookup."""

    D: int
    cutoff: int
    chains: tuple = field(repr=False)
    _index: dict = field(repr=False)

    def __len__(self):
        return len(self.chains)

    def chain_at(self, i):
        if not 0 <= i < len(self.chains):
            raise IndexError(f"basis ordinal {i} out of range [0, {len(self.chains)})")
        return self.chains[i]

    def index_of(self, chain):
        try:
            return self._index[tuple(chain)]
        except KeyError:
            raise KeyError(f"chain {chain} not in basis (D={self.D}, cutoff={self.cutoff})") from None

    def __contains__(self, chain):
        return tuple(chain) in self._index

    def levels(self):
        """Top entry of every chain, in basis order."""
        return [c[0] for c in self.chains]

    def to_json_obj(self):
        """JSON form: array of integer arrays, ordinal implicit by position."""
        return [list(c) for c in self.chains]


def enumerate_chains(D, cutoff):
    """Build the canonical BasisMap for (D, cutoff)."""
    chains = tuple(iter_chains(D, cutoff))
    index = {c: i for i, c in enumerate(chains)}
    bm = BasisMap(D=D, cutoff=cutoff, chains=chains, _index=index)
    assert len(bm) == dimension(D, cutoff)
    return bm


def basis_of(cfg):
    """BasisMap for a FuzzyConfig."""
    return enumerate_chains(cfg.D, cfg.cutoff)
