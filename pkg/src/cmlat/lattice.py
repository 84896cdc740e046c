"""Finite lattices given by cover relations.

Elements are integers ``0..n-1``.  General lattices carry explicit order,
join and meet tables and are capped at 4096 elements; Boolean lattices are
backed by bit operations (join = union, meet = intersection) so that ground
sets up to 20 points stay usable without materializing 2^40-entry tables.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BudgetExceeded,
    CyclicCovers,
    ElementOutOfRange,
    FormatError,
    NonCoverEdge,
    NotALattice,
    SizeLimitExceeded,
)

GENERAL_SIZE_CAP = 4096
BOOLEAN_GROUND_CAP = 20
DISTRIBUTIVITY_SIZE_CAP = 1024
SUBSET_JOIN_BUDGET = 1 << 20


class FiniteLattice:
    """Immutable lattice with explicit n-by-n order/join/meet tables.

    Construction validates the full lattice axioms: the order must be
    reflexive, antisymmetric and transitive, and every pair of elements must
    have a unique least upper bound and greatest lower bound (checked
    exhaustively via up-set intersection).
    """

    def __init__(self, leq, name=""):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise NotALattice(f"order table must be square, got {leq.shape}")
        if n < 1:
            raise NotALattice("a lattice needs at least one element")
        if n > GENERAL_SIZE_CAP:
            raise SizeLimitExceeded(f"{n} elements exceeds cap {GENERAL_SIZE_CAP}")
        self.n = n
        self.name = name
        self._leq = leq
        self._leq.setflags(write=False)
        self._validate_order()
        self._join, self._meet = self._build_tables()
        self._covers = self._extract_covers()
        self.top = int(np.flatnonzero(leq.all(axis=0))[0])
        self.bottom = int(np.flatnonzero(leq.all(axis=1))[0])

    # -- construction internals -------------------------------------------

    def _validate_order(self):
        leq = self._leq
        n = self.n
        if not leq.diagonal().all():
            raise NotALattice("order is not reflexive")
        both = leq & leq.T
        if both.sum() > n:
            i, j = np.argwhere(both & ~np.eye(n, dtype=bool))[0]
            raise NotALattice(f"order is not antisymmetric at ({i}, {j})")
        reach = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
        if (reach & ~leq).any():
            i, j = np.argwhere(reach & ~leq)[0]
            raise NotALattice(f"order is not transitive at ({i}, {j})")

    def _build_tables(self):
        # The AND of two up-set rows equals some element's up-set row exactly
        # when that element is the unique lub; same for down-sets and glb.
        leq = self._leq
        n = self.n
        join = np.zeros((n, n), dtype=np.int32)
        meet = np.zeros((n, n), dtype=np.int32)
        up_rows = {leq[i].tobytes(): i for i in range(n)}
        down_rows = {leq[:, i].tobytes(): i for i in range(n)}
        for i in range(n):
            join[i, i] = meet[i, i] = i
            for j in range(i + 1, n):
                lub = up_rows.get((leq[i] & leq[j]).tobytes())
                if lub is None:
                    raise NotALattice(f"elements {i} and {j} have no unique join")
                glb = down_rows.get((leq[:, i] & leq[:, j]).tobytes())
                if glb is None:
                    raise NotALattice(f"elements {i} and {j} have no unique meet")
                join[i, j] = join[j, i] = lub
                meet[i, j] = meet[j, i] = glb
        join.setflags(write=False)
        meet.setflags(write=False)
        return join, meet

    def _extract_covers(self):
        lt = self._leq & ~np.eye(self.n, dtype=bool)
        inbetween = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        child = lt & ~inbetween
        return tuple(tuple(int(j) for j in np.flatnonzero(child[i])) for i in range(self.n))

    # -- accessors ----------------------------------------------------------

    @property
    def elements(self):
        return range(self.n)

    def check_element(self, x):
        if not 0 <= x < self.n:
            raise ElementOutOfRange(f"element {x} not in 0..{self.n - 1}")

    def leq(self, x, y) -> bool:
        return bool(self._leq[x, y])

    def join(self, x, y) -> int:
        return int(self._join[x, y])

    def meet(self, x, y) -> int:
        return int(self._meet[x, y])

    def covers(self, x):
        """Elements covering x (immediately above it)."""
        return self._covers[x]

    def up_set(self, x):
        """All y with y >= x, ascending by index."""
        return tuple(int(j) for j in np.flatnonzero(self._leq[x]))

    def join_many(self, xs):
        acc = self.bottom
        for x in xs:
            acc = self.join(acc, x)
        return acc

    def cover_pairs(self):
        return [(x, y) for x in self.elements for y in self._covers[x]]

    def ranks_to_top(self):
        """Length of the longest chain from each element up to the top."""
        order = sorted(self.elements, key=lambda x: (self._leq[x].sum(), x))
        rank = [0] * self.n
        for x in order:  # every y > x precedes x in this order
            covs = self._covers[x]
            rank[x] = 1 + max(rank[y] for y in covs) if covs else 0
        return rank

    def mobius_order(self):
        """Deterministic top-down order: ascending chain-rank, ties by index."""
        rank = self.ranks_to_top()
        return sorted(self.elements, key=lambda x: (rank[x], x))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteLattice{label} n={self.n}>"


class BooleanLattice(FiniteLattice):
    """Subsets of [n] ordered by inclusion, encoded as bit masks.

    Join, meet and order are bitwise; nothing quadratic in 2^n is stored.
    """

    def __init__(self, ground_n, name=""):
        if not 1 <= ground_n <= BOOLEAN_GROUND_CAP:
            raise SizeLimitExceeded(
                f"boolean ground set must have 1..{BOOLEAN_GROUND_CAP} points, got {ground_n}"
            )
        # deliberately skip FiniteLattice.__init__: tables stay implicit
        self.ground_n = ground_n
        self.n = 1 << ground_n
        self.name = name or f"boolean{ground_n}"
        self.top = self.n - 1
        self.bottom = 0

    def leq(self, x, y) -> bool:
        return (x | y) == y

    def join(self, x, y) -> int:
        return x | y

    def meet(self, x, y) -> int:
        return x & y

    def covers(self, x):
        return tuple(x | (1 << i) for i in range(self.ground_n) if not x & (1 << i))

    def up_set(self, x):
        # supersets of x, ascending: iterate over subsets of the complement
        comp = self.top ^ x
        out = []
        m = 0
        while True:
            out.append(x | m)
            if m == comp:
                break
            m = (m - comp) & comp
        return tuple(sorted(out))

    def cover_pairs(self):
        return [(x, y) for x in self.elements for y in self.covers(x)]

    def ranks_to_top(self):
        return [self.ground_n - bin(x).count("1") for x in self.elements]

    def __repr__(self):
        return f"<BooleanLattice [{self.ground_n}] n={self.n}>"


# --- constructors ---------------------------------------------------------

def from_covers(n, cover_pairs, name="") -> FiniteLattice:
    """Build a lattice from its Hasse diagram.

    Raises CyclicCovers for cycles, NonCoverEdge for declared pairs that are
    transitively implied (canonical input is enforced, not repaired), and
    NotALattice when some pair has no unique lub/glb.
    """
    if n < 1:
        raise NotALattice("a lattice needs at least one element")
    if n > GENERAL_SIZE_CAP:
        raise SizeLimitExceeded(f"{n} elements exceeds cap {GENERAL_SIZE_CAP}")
    adj = np.zeros((n, n), dtype=bool)
    pairs = []
    for lower, upper in cover_pairs:
        if not (0 <= lower < n and 0 <= upper < n):
            raise ElementOutOfRange(f"cover pair ({lower}, {upper}) out of range")
        if lower == upper:
            raise CyclicCovers(f"self-loop at element {lower}")
        adj[lower, upper] = True
        pairs.append((lower, upper))
    reach = adj | np.eye(n, dtype=bool)
    while True:
        nxt = reach | ((reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0)
        if (nxt == reach).all():
            break
        reach = nxt
    cyc = reach & reach.T & ~np.eye(n, dtype=bool)
    if cyc.any():
        i, j = np.argwhere(cyc)[0]
        raise CyclicCovers(f"cover relation is cyclic through {i} and {j}")
    lt = reach & ~np.eye(n, dtype=bool)
    implied = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
    for lower, upper in pairs:
        if implied[lower, upper]:
            raise NonCoverEdge(f"pair ({lower}, {upper}) is implied transitively")
    return FiniteLattice(reach, name=name)


def chain_lattice(k, name="") -> FiniteLattice:
    """Total order on k elements."""
    if k < 1:
        raise NotALattice("a chain needs at least one element")
    leq = np.triu(np.ones((k, k), dtype=bool))
    return FiniteLattice(leq, name=name or f"chain{k}")


def boolean_lattice(ground_n) -> BooleanLattice:
    """Subsets of [ground_n] ordered by inclusion; element i is bit i."""
    return BooleanLattice(ground_n)


def diamond_lattice(k, name="") -> FiniteLattice:
    """Bottom, k pairwise incomparable atoms and a top; k=3 is M3."""
    if k < 1:
        raise NotALattice("need at least one atom")
    if k + 2 > GENERAL_SIZE_CAP:
        raise SizeLimitExceeded(f"{k + 2} elements exceeds cap {GENERAL_SIZE_CAP}")
    if k == 1:
        return chain_lattice(3, name=name or "diamond1")
    pairs = [(0, a) for a in range(1, k + 1)] + [(a, k + 1) for a in range(1, k + 1)]
    return from_covers(k + 2, pairs, name=name or f"diamond{k}")


def pentagon_lattice() -> FiniteLattice:
    """The five-element non-modular lattice N5: 0 < 1 < 2 < 4 and 0 < 3 < 4."""
    return from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], name="pentagon")


def product_lattice(a: FiniteLattice, b: FiniteLattice, name="") -> FiniteLattice:
    """Componentwise order on pairs; element (i, j) becomes index i*b.n + j."""
    if isinstance(a, BooleanLattice) or isinstance(b, BooleanLattice):
        a = materialize(a)
        b = materialize(b)
    leq = np.kron(a._leq, b._leq)
    return FiniteLattice(leq, name=name or f"({a.name}x{b.name})")


def materialize(lat: FiniteLattice) -> FiniteLattice:
    """Explicit-table copy of any lattice (small Boolean ones included)."""
    if not isinstance(lat, BooleanLattice):
        return lat
    n = lat.n
    if n > GENERAL_SIZE_CAP:
        raise SizeLimitExceeded("boolean lattice too large to materialize")
    masks = np.arange(n)
    leq = (masks[:, None] | masks[None, :]) == masks[None, :]
    return FiniteLattice(leq, name=lat.name)


# --- structural analysis ----------------------------------------------------

def cover_degree(lat: FiniteLattice, x) -> int:
    """Number of elements covering x."""
    lat.check_element(x)
    return len(lat.covers(x))


def d_max(lat: FiniteLattice) -> int:
    """Maximum cover degree over the lattice; the power threshold is d_max - 1."""
    if isinstance(lat, BooleanLattice):
        return lat.ground_n
    return max(cover_degree(lat, x) for x in lat.elements)


def is_distributive(lat: FiniteLattice) -> bool:
    """Whether join distributes over meet for every ordered triple.

    Evaluates both the distributive law and the cancellation characterization
    (x v y = x v z and x ^ y = x ^ z imply y = z) and asserts they agree.
    """
    if lat.n > DISTRIBUTIVITY_SIZE_CAP:
        raise BudgetExceeded(f"distributivity check is cubic; {lat.n} > {DISTRIBUTIVITY_SIZE_CAP}")
    if isinstance(lat, BooleanLattice):
        masks = np.arange(lat.n, dtype=np.int64)
        b = masks[:, None]
        c = masks[None, :]
        law = True
        cancel = True
        for a in masks:
            if ((a | (b & c)) != ((a | b) & (a | c))).any():
                law = False
                break
        for a in masks:
            keys = (a | masks) * lat.n + (a & masks)
            if len(np.unique(keys)) != lat.n:
                cancel = False
                break
    else:
        join = lat._join
        meet = lat._meet
        law = True
        cancel = True
        for a in lat.elements:
            ja = join[a]
            if (ja[meet] != meet[np.ix_(ja, ja)]).any():
                law = False
                break
        for a in lat.elements:
            keys = join[a].astype(np.int64) * lat.n + meet[a]
            if len(np.unique(keys)) != lat.n:
                cancel = False
                break
    assert law == cancel, "distributive law and cancellation check disagree"
    return law


def verify_distinct_joins(lat: FiniteLattice, x):
    """Check that joins of distinct nonempty cover subsets of x are distinct.

    Returns ``(True, None)`` or ``(False, (subset_a, subset_b))`` where the two
    cover subsets have the same join.  Holds for every x when the lattice is
    distributive.
    """
    lat.check_element(x)
    covs = lat.covers(x)
    d = len(covs)
    if 1 << d > SUBSET_JOIN_BUDGET:
        raise BudgetExceeded(f"2^{d} subset joins exceed budget")
    seen = {}
    joins = [x] * (1 << d)
    for mask in range(1, 1 << d):
        low = mask & -mask
        joins[mask] = lat.join(joins[mask ^ low], covs[low.bit_length() - 1])
        j = joins[mask]
        if j in seen:
            a = tuple(covs[i] for i in range(d) if seen[j] >> i & 1)
            b = tuple(covs[i] for i in range(d) if mask >> i & 1)
            return False, (a, b)
        seen[j] = mask
    return True, None


# --- built-in catalog -------------------------------------------------------

def catalog(max_size=None):
    """Named test lattices: chains, Booleans, diamonds, products, N5.

    ``max_size`` filters by element count (the exhaustive-oracle suites use 6).
    """
    entries = [
        chain_lattice(2),
        chain_lattice(3),
        chain_lattice(4),
        chain_lattice(6),
        from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], name="square"),
        diamond_lattice(3),
        diamond_lattice(4),
        pentagon_lattice(),
        product_lattice(chain_lattice(2), chain_lattice(3), name="chain2xchain3"),
        materialize(boolean_lattice(3)),
        product_lattice(
            chain_lattice(3),
            from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], name="square"),
            name="chain3xsquare",
        ),
        materialize(boolean_lattice(4)),
    ]
    if max_size is not None:
        entries = [lat for lat in entries if lat.n <= max_size]
    return entries


# --- text exchange format ---------------------------------------------------

def format_lattice_text(lat: FiniteLattice) -> str:
    """Serialize as 'n' followed by one 'lower upper' cover pair per line."""
    lines = [str(lat.n)]
    lines += [f"{lo} {hi}" for lo, hi in sorted(lat.cover_pairs())]
    return "\n".join(lines) + "\n"


def parse_lattice_text(text: str, name="") -> FiniteLattice:
    """Parse the cover-pair exchange format; reports 1-based line numbers."""
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise FormatError("expected the element count alone", line=lineno)
            try:
                n = int(fields[0])
            except ValueError:
                raise FormatError(f"bad element count {fields[0]!r}", line=lineno) from None
            continue
        if len(fields) != 2:
            raise FormatError("expected 'lower upper'", line=lineno)
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise FormatError(f"bad cover pair {line!r}", line=lineno) from None
    if n is None:
        raise FormatError("empty lattice document", line=1)
    return from_covers(n, pairs, name=name)


def write_lattice_file(lat: FiniteLattice, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_lattice_text(lat))


def read_lattice_file(path) -> FiniteLattice:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lattice_text(fh.read(), name=str(path))
