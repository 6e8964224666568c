"""Finite groups used throughout the package.

Three concrete group representations share one informal protocol:

    .order          number of elements
    .identity       the identity element
    .elements()     iterator over all elements in a fixed canonical order
    .mul(a, b)      group product
    .inv(a)         group inverse
    .quot(a, b)     inv(a) * b, the "difference" used by terrace checks

* AbelianSpec   -- direct product of cyclic groups, elements are int tuples
* SdSpec        -- semidirect product of Z_s acting on an AbelianSpec
* TableGroup    -- arbitrary finite group given by its Cayley table

Abelian elements are plain tuples of ints, one coordinate per cyclic
factor, always reduced mod the factor.  Semidirect elements are pairs
(u, v) with u an int mod s and v an abelian element.  Table elements are
the indices 0..n-1 into the table itself.

The JSON descriptor for a group is one of

    {"abelian": [n1, n2, ...]}
    {"semidirect": {"s": q, "base": [n1, ...], "alpha": {"blocks": [...]}}}
    {"table": {"n": n, "mul": [[...], ...], "id": i}}

where an alpha block is {"kind": "scalar", "modulus": m, "unit": r} or
{"kind": "matrix", "p": p, "rows": [[...], ...]}.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import (
    GroupFormatError,
    NotIndependent,
    OrderMismatch,
    ShapeMismatch,
)

AbElem = tuple[int, ...]
SdElem = tuple[int, AbElem]


# ---------------------------------------------------------------------------
# modular matrix helpers (used by matrix automorphism blocks)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int):
    """Product of two square matrices over Z_p, returned as tuple rows."""
    n = len(a)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(n)) % p for j in range(n))
        for i in range(n)
    )


def mat_identity(n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_pow(m: Sequence[Sequence[int]], e: int, p: int):
    result = mat_identity(len(m))
    base = tuple(tuple(row) for row in m)
    while e > 0:
        if e & 1:
            result = mat_mul(result, base, p)
        base = mat_mul(base, base, p)
        e >>= 1
    return result


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(m)
    if len(v) != n:
        raise ShapeMismatch(f"matrix is {n}x{n} but vector has length {len(v)}")
    return tuple(sum(m[i][j] * v[j] for j in range(n)) % p for i in range(n))


def mat_inv(m: Sequence[Sequence[int]], p: int):
    """Inverse of a square matrix over Z_p by Gauss-Jordan elimination.

    Raises ShapeMismatch if the matrix is singular mod p.
    """
    n = len(m)
    aug = [
        [x % p for x in row] + [1 if i == j else 0 for j in range(n)]
        for i, row in enumerate(m)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] % p != 0), None)
        if pivot is None:
            raise ShapeMismatch(f"matrix singular mod {p}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_piv = pow(aug[col][col], -1, p)
        aug[col] = [(x * inv_piv) % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [(x - factor * y) % p for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def extend_to_basis(vectors: Sequence[Sequence[int]], k: int, p: int):
    """Extend independent vectors in F_p^k to a full basis.

    Returns a k x k matrix whose first columns are the given vectors.
    Raises NotIndependent if the given vectors are already dependent.
    """
    basis: list[tuple[int, ...]] = []
    # row-echelon bookkeeping: pivots[i] = leading column of reduced basis[i]
    reduced: list[list[int]] = []
    pivots: list[int] = []

    def try_add(vec, required):
        row = [x % p for x in vec]
        for lead, red in zip(pivots, reduced):
            if row[lead]:
                factor = row[lead]
                row = [(x - factor * y) % p for x, y in zip(row, red)]
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            if required:
                raise NotIndependent("given vectors are linearly dependent")
            return False
        inv_lead = pow(row[lead], -1, p)
        reduced.append([(x * inv_lead) % p for x in row])
        pivots.append(lead)
        basis.append(tuple(x % p for x in vec))
        return True

    for vec in vectors:
        try_add(vec, required=True)
    for j in range(k):
        if len(basis) == k:
            break
        unit = tuple(1 if i == j else 0 for i in range(k))
        try_add(unit, required=False)
    if len(basis) != k:
        raise NotIndependent("could not complete basis")
    # columns of the result are the basis vectors
    return tuple(tuple(basis[j][i] for j in range(k)) for i in range(k))


# ---------------------------------------------------------------------------
# abelian groups


@dataclass(frozen=True)
class AbelianSpec:
    """Direct product Z_{m_1} x ... x Z_{m_k} with m_i >= 2.

    An empty factor list is the trivial group with single element ().
    Elements enumerate in mixed-radix order, leftmost coordinate most
    significant, so index_of is the mixed-radix value.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.factors, tuple):
            object.__setattr__(self, "factors", tuple(self.factors))
        for m in self.factors:
            if not isinstance(m, int) or m < 2:
                raise GroupFormatError(f"cyclic factor {m!r} must be an int >= 2")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def identity(self) -> AbElem:
        return (0,) * len(self.factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors) if self.factors else 1

    def elements(self) -> Iterator[AbElem]:
        return itertools.product(*(range(m) for m in self.factors))

    def reduce(self, v: Sequence[int]) -> AbElem:
        if len(v) != len(self.factors):
            raise ShapeMismatch(
                f"element of length {len(v)} in group with {len(self.factors)} factors"
            )
        return tuple(x % m for x, m in zip(v, self.factors))

    def add(self, a: Sequence[int], b: Sequence[int]) -> AbElem:
        self._check(a), self._check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.factors))

    def neg(self, a: Sequence[int]) -> AbElem:
        self._check(a)
        return tuple((-x) % m for x, m in zip(a, self.factors))

    def sub(self, a: Sequence[int], b: Sequence[int]) -> AbElem:
        self._check(a), self._check(b)
        return tuple((x - y) % m for x, y, m in zip(a, b, self.factors))

    def scale(self, c: int, a: Sequence[int]) -> AbElem:
        self._check(a)
        return tuple((c * x) % m for x, m in zip(a, self.factors))

    # protocol aliases so abelian groups plug into generic group code
    def mul(self, a, b):
        return self.add(a, b)

    def inv(self, a):
        return self.neg(a)

    def quot(self, a, b):
        return self.sub(b, a)

    def index_of(self, a: Sequence[int]) -> int:
        self._check(a)
        idx = 0
        for x, m in zip(a, self.factors):
            idx = idx * m + (x % m)
        return idx

    def element_by_index(self, idx: int) -> AbElem:
        if not 0 <= idx < self.order:
            raise ShapeMismatch(f"index {idx} out of range for order {self.order}")
        coords = []
        for m in reversed(self.factors):
            coords.append(idx % m)
            idx //= m
        return tuple(reversed(coords))

    def element_order(self, a: Sequence[int]) -> int:
        self._check(a)
        if not self.factors:
            return 1
        return math.lcm(*(m // math.gcd(m, x) for x, m in zip(a, self.factors)))

    def cyclic_subgroup(self, a: Sequence[int]) -> set[AbElem]:
        out = set()
        cur = self.identity
        while cur not in out:
            out.add(cur)
            cur = self.add(cur, a)
        return out

    def independent(self, a: Sequence[int], b: Sequence[int]) -> bool:
        """True when the cyclic subgroups of a and b meet only in zero."""
        sub_a = self.cyclic_subgroup(a)
        sub_b = self.cyclic_subgroup(b)
        return sub_a & sub_b == {self.identity}

    def _check(self, a):
        if len(a) != len(self.factors):
            raise ShapeMismatch(
                f"element of length {len(a)} in group with {len(self.factors)} factors"
            )


def cyclic(n: int) -> AbelianSpec:
    return AbelianSpec((n,))


# ---------------------------------------------------------------------------
# automorphisms of abelian groups


@dataclass(frozen=True)
class ScalarBlock:
    """Coordinate multiplied by a fixed unit mod its factor."""

    modulus: int
    unit: int

    def __post_init__(self):
        if math.gcd(self.unit, self.modulus) != 1:
            raise GroupFormatError(
                f"scalar {self.unit} is not a unit mod {self.modulus}"
            )
        object.__setattr__(self, "unit", self.unit % self.modulus)

    @property
    def width(self) -> int:
        return 1

    @cached_property
    def order(self) -> int:
        j, cur = 1, self.unit
        while cur != 1:
            cur = (cur * self.unit) % self.modulus
            j += 1
        return j

    def apply_power(self, e: int, v: Sequence[int]) -> tuple[int, ...]:
        return ((pow(self.unit, e, self.modulus) * v[0]) % self.modulus,)


@dataclass(frozen=True)
class MatrixBlock:
    """A run of coordinates mod the same prime p, acted on by a matrix."""

    p: int
    mat: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(x % self.p for x in row) for row in self.mat)
        object.__setattr__(self, "mat", rows)
        if any(len(row) != len(rows) for row in rows):
            raise GroupFormatError("matrix block must be square")
        try:
            mat_inv(rows, self.p)
        except ShapeMismatch:
            raise GroupFormatError(f"matrix block is singular mod {self.p}") from None

    @property
    def width(self) -> int:
        return len(self.mat)

    @cached_property
    def order(self) -> int:
        ident = mat_identity(self.width)
        cur, j = self.mat, 1
        while cur != ident:
            cur = mat_mul(cur, self.mat, self.p)
            j += 1
            if j > 10**7:
                raise GroupFormatError("matrix block order did not terminate")
        return j

    @cached_property
    def _powers(self) -> dict[int, tuple[tuple[int, ...], ...]]:
        return {0: mat_identity(self.width), 1: self.mat}

    def apply_power(self, e: int, v: Sequence[int]) -> tuple[int, ...]:
        e %= self.order
        powers = self._powers
        if e not in powers:
            powers[e] = mat_pow(self.mat, e, self.p)
        return mat_vec(powers[e], v, self.p)


@dataclass(frozen=True)
class Automorphism:
    """Blockwise automorphism of an AbelianSpec.

    Blocks cover the coordinates in order; each is a ScalarBlock or a
    MatrixBlock.  This covers every action the constructions need
    (diagonal scalings and matrix actions on elementary abelian layers).
    """

    blocks: tuple[ScalarBlock | MatrixBlock, ...]

    def __post_init__(self):
        if not isinstance(self.blocks, tuple):
            object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def width(self) -> int:
        return sum(b.width for b in self.blocks)

    @cached_property
    def order(self) -> int:
        return math.lcm(*(b.order for b in self.blocks)) if self.blocks else 1

    def matches(self, spec: AbelianSpec) -> bool:
        moduli: list[int] = []
        for b in self.blocks:
            if isinstance(b, ScalarBlock):
                moduli.append(b.modulus)
            else:
                moduli.extend([b.p] * b.width)
        return tuple(moduli) == spec.factors

    def apply_power(self, e: int, v: Sequence[int]) -> AbElem:
        if len(v) != self.width:
            raise ShapeMismatch(
                f"element of length {len(v)} under automorphism of width {self.width}"
            )
        out: list[int] = []
        pos = 0
        for b in self.blocks:
            out.extend(b.apply_power(e, v[pos : pos + b.width]))
            pos += b.width
        return tuple(out)

    def apply(self, v: Sequence[int]) -> AbElem:
        return self.apply_power(1, v)

    @staticmethod
    def identity_on(spec: AbelianSpec) -> "Automorphism":
        return Automorphism(tuple(ScalarBlock(m, 1) for m in spec.factors))

    @staticmethod
    def scalar_on(spec: AbelianSpec, unit: int) -> "Automorphism":
        return Automorphism(tuple(ScalarBlock(m, unit % m) for m in spec.factors))


# ---------------------------------------------------------------------------
# semidirect products Z_q acting on an abelian group


@dataclass(frozen=True)
class SdSpec:
    """Semidirect product of Z_s acting on `base` through `alpha`.

    Elements are pairs (u, v), u in Z_s and v in base.  The product is
        (u, v) * (x, y) = (u + x, alpha^x(v) + y)
    so alpha twists the left factor by how far the right one moves.
    """

    s: int
    base: AbelianSpec
    alpha: Automorphism

    def __post_init__(self):
        if self.s < 2:
            raise GroupFormatError(f"s must be >= 2, got {self.s}")
        if not self.alpha.matches(self.base):
            raise GroupFormatError("automorphism blocks do not match the base group")
        if self.s % self.alpha.order != 0:
            raise OrderMismatch(
                f"automorphism order {self.alpha.order} does not divide s={self.s}"
            )

    @property
    def order(self) -> int:
        return self.s * self.base.order

    @property
    def identity(self) -> SdElem:
        return (0, self.base.identity)

    def elements(self) -> Iterator[SdElem]:
        for u in range(self.s):
            for v in self.base.elements():
                yield (u, v)

    def mul(self, g: SdElem, h: SdElem) -> SdElem:
        (u, v), (x, y) = g, h
        return (
            (u + x) % self.s,
            self.base.add(self.alpha.apply_power(x % self.s, v), y),
        )

    def inv(self, g: SdElem) -> SdElem:
        u, v = g
        nu = (-u) % self.s
        return (nu, self.base.neg(self.alpha.apply_power(nu, v)))

    def quot(self, g: SdElem, h: SdElem) -> SdElem:
        # inv(g) * h, expanded: ((x - u), y - alpha^(x-u)(v))
        (u, v), (x, y) = g, h
        d = (x - u) % self.s
        return (d, self.base.sub(y, self.alpha.apply_power(d, v)))

    def element_order(self, g: SdElem) -> int:
        cur, n = g, 1
        while cur != self.identity:
            cur = self.mul(cur, g)
            n += 1
        return n


# ---------------------------------------------------------------------------
# table groups


class TableGroup:
    """Finite group presented by its Cayley table.

    Elements are the indices 0..n-1; rows[i][j] is the index of the
    product i*j.  Validation always checks the Latin property, identity
    and inverses.  Associativity is verified exhaustively up to order 512
    (row-at-a-time: row[i*j] must equal i applied to row j) and on seeded
    random triples beyond that.
    """

    FULL_ASSOC_LIMIT = 512

    def __init__(self, rows: Sequence[Sequence[int]], check: bool = True):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise GroupFormatError("table must be square and non-empty")
        self._rows = [list(r) for r in rows]
        for row in self._rows:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < n:
                    raise GroupFormatError(f"table entry {x!r} is not an index < {n}")
        if check:
            self._validate()
        self._identity = self._find_identity()
        ident = self._identity
        self._inv = [-1] * n
        for i in range(n):
            for j in range(n):
                if self._rows[i][j] == ident:
                    self._inv[i] = j
                    break
            if self._inv[i] < 0:
                raise GroupFormatError(f"element {i} has no inverse")

    def _find_identity(self) -> int:
        n = len(self._rows)
        for e in range(n):
            if self._rows[e] == list(range(n)) and all(
                self._rows[j][e] == j for j in range(n)
            ):
                return e
        raise GroupFormatError("table has no identity element")

    def _validate(self):
        n = len(self._rows)
        rows = self._rows
        # rows and columns must be permutations (Latin table), else some
        # product repeats and the identity search below can mislead
        for i in range(n):
            if len(set(rows[i])) != n:
                raise GroupFormatError(f"row {i} repeats an element")
            if len({rows[j][i] for j in range(n)}) != n:
                raise GroupFormatError(f"column {i} repeats an element")
        if n <= self.FULL_ASSOC_LIMIT:
            # (i*j)*k == i*(j*k) for all k collapses to a row comparison
            for i in range(n):
                ri = rows[i]
                for j in range(n):
                    if rows[ri[j]] != [ri[x] for x in rows[j]]:
                        raise GroupFormatError(f"not associative at ({i}, {j})")
        else:
            rng = random.Random(0)
            for _ in range(4000):
                i, j, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if rows[rows[i][j]][k] != rows[i][rows[j][k]]:
                    raise GroupFormatError(f"not associative at ({i}, {j}, {k})")

    @property
    def order(self) -> int:
        return len(self._rows)

    @property
    def identity(self) -> int:
        return self._identity

    def elements(self):
        return iter(range(len(self._rows)))

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def quot(self, a: int, b: int) -> int:
        return self._rows[self._inv[a]][b]

    def element_order(self, a: int) -> int:
        cur, n = a, 1
        while cur != self._identity:
            cur = self.mul(cur, a)
            n += 1
        return n

    def mul_table(self) -> list[list[int]]:
        return [list(r) for r in self._rows]


# ---------------------------------------------------------------------------
# descriptors (JSON-friendly dicts)


def automorphism_to_descriptor(alpha: Automorphism) -> dict:
    blocks = []
    for b in alpha.blocks:
        if isinstance(b, ScalarBlock):
            blocks.append({"kind": "scalar", "modulus": b.modulus, "unit": b.unit})
        else:
            blocks.append({"kind": "matrix", "p": b.p, "rows": [list(r) for r in b.mat]})
    return {"blocks": blocks}


def automorphism_from_descriptor(obj: dict) -> Automorphism:
    try:
        raw = obj["blocks"]
    except (TypeError, KeyError):
        raise GroupFormatError("automorphism descriptor needs a 'blocks' list")
    blocks: list[ScalarBlock | MatrixBlock] = []
    for item in raw:
        kind = item.get("kind")
        if kind == "scalar":
            blocks.append(ScalarBlock(int(item["modulus"]), int(item["unit"])))
        elif kind == "matrix":
            rows = tuple(tuple(int(x) for x in r) for r in item["rows"])
            blocks.append(MatrixBlock(int(item["p"]), rows))
        else:
            raise GroupFormatError(f"unknown automorphism block kind {kind!r}")
    return Automorphism(tuple(blocks))


def group_to_descriptor(group) -> dict:
    if isinstance(group, AbelianSpec):
        return {"abelian": list(group.factors)}
    if isinstance(group, SdSpec):
        return {
            "semidirect": {
                "s": group.s,
                "base": list(group.base.factors),
                "alpha": automorphism_to_descriptor(group.alpha),
            }
        }
    if isinstance(group, TableGroup):
        return {
            "table": {
                "n": group.order,
                "mul": group.mul_table(),
                "id": group.identity,
            }
        }
    raise GroupFormatError(f"cannot describe group of type {type(group).__name__}")


def group_from_descriptor(obj: dict):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise GroupFormatError(
            "group descriptor must be an object with exactly one of "
            "'abelian', 'semidirect', 'table'"
        )
    if "abelian" in obj:
        return AbelianSpec(tuple(int(m) for m in obj["abelian"]))
    if "semidirect" in obj:
        body = obj["semidirect"]
        return SdSpec(
            s=int(body["s"]),
            base=AbelianSpec(tuple(int(m) for m in body["base"])),
            alpha=automorphism_from_descriptor(body["alpha"]),
        )
    if "table" in obj:
        body = obj["table"]
        grp = TableGroup(body["mul"])
        if "n" in body and int(body["n"]) != grp.order:
            raise GroupFormatError("table descriptor 'n' does not match the table")
        if "id" in body and int(body["id"]) != grp.identity:
            raise GroupFormatError("table descriptor 'id' is not the identity")
        return grp
    raise GroupFormatError(f"unknown group descriptor keys {sorted(obj)!r}")
