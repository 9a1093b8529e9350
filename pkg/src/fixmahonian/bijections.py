"""
Bijections on permutations and on zero-words.

Two kinds live here:

* constructive maps: the second fundamental transformation ``f2`` and the
  maps derived from it (``f2_prime``, ``f2_loc``);
* fiber-matched oracles: finite tables built by pairing the fibers of two
  statistics in lexicographic order.  They stand in for bijections whose
  literal construction is published elsewhere (DW, CHZ, Phi and the word map
  behind ``f3``).  Literal tables can be plugged in instead through
  :class:`OracleFamily.plug_in` or the two-column text format.

A failed fiber match raises :class:`FiberMismatch`, which means the
corresponding equidistribution claim is false at that size.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .decomp import (
    PixedDecomposition, ShuffleClassId,
    der, dez_set, enumerate_derangements, enumerate_desarrangements,
    fixed_decomposition, maf, mafz, pixed_decomposition, pixed_recompose,
    shuffle_class, shuffle_class_of, zder, zder_inverse, zdesar, zdesar_inverse,
)
from .perm import (
    Permutation, ZeroWord, des_set, fix, ides_set, inverse, maj, parse_letters,
    permutations,
)

__all__ = [
    "BijectionTable", "StatTransportSpec", "FiberMismatch", "OracleDomainError",
    "TableImportError", "OracleFamily",
    "f2", "f2_prime", "f2_loc",
    "matched_oracle", "dw_table", "chz_table", "phi_table", "word_f3_table",
    "phi_oracle", "chz_oracle",
    "dw_family", "word_f3_family", "chz_family", "phi_family", "default_family",
    "dw_loc", "dw_word", "dw_word_by_composition", "f3", "f3_prime",
    "TABLE_KINDS", "export_tables", "import_tables",
]


class FiberMismatch(Exception):
    """Two fibers that a matched oracle must pair have different sizes."""

    def __init__(self, key, domain_count: int, codomain_count: int, tag: str = ""):
        self.key = key
        self.domain_count = domain_count
        self.codomain_count = codomain_count
        self.tag = tag
        where = f" in {tag}" if tag else ""
        super().__init__(
            f"fiber {key!r}{where}: {domain_count} source element(s) vs "
            f"{codomain_count} target element(s)")


class OracleDomainError(KeyError):
    """An element outside a table's domain was looked up."""


class TableImportError(ValueError):
    pass


@dataclass(frozen=True)
class StatTransportSpec:
    source_stat: Callable[[Any], Hashable]
    target_stat: Callable[[Any], Hashable]
    grouping_key: Callable[[Any], Hashable] | None = None

    def source_key(self, x):
        g = self.grouping_key(x) if self.grouping_key else None
        return g, self.source_stat(x)

    def target_key(self, y):
        g = self.grouping_key(y) if self.grouping_key else None
        return g, self.target_stat(y)


@dataclass(frozen=True)
class BijectionTable:
    domain_tag: str
    forward: Mapping = field(repr=False)
    backward: Mapping = field(repr=False)

    def __post_init__(self):
        if len(self.forward) != len(self.backward) or any(
                self.backward.get(y, _MISSING) != x for x, y in self.forward.items()):
            raise ValueError(f"{self.domain_tag}: forward and backward maps are not inverse")

    @classmethod
    def from_pairs(cls, tag: str, pairs: Iterable[tuple]) -> BijectionTable:
        forward, backward = {}, {}
        for x, y in pairs:
            if x in forward:
                raise ValueError(f"{tag}: {x} mapped twice")
            if y in backward:
                raise ValueError(f"{tag}: {y} hit twice")
            forward[x] = y
            backward[y] = x
        return cls(tag, forward, backward)

    def __call__(self, x):
        try:
            return self.forward[x]
        except KeyError:
            raise OracleDomainError(f"{tuple(x)} is not in the domain of {self.domain_tag}") from None

    def inverse(self, y):
        try:
            return self.backward[y]
        except KeyError:
            raise OracleDomainError(f"{tuple(y)} is not in the codomain of {self.domain_tag}") from None

    def __len__(self):
        return len(self.forward)

    def items(self):
        return self.forward.items()

    def with_pairs(self, pairs: Iterable[tuple]) -> BijectionTable:
        """Force ``x -> y`` for each pair by swapping images with whoever held ``y``."""
        forward = dict(self.forward)
        backward = dict(self.backward)
        for x, y in pairs:
            old_image, old_source = forward[x], backward[y]
            forward[x], forward[old_source] = y, old_image
            backward[y], backward[old_image] = x, old_source
        return BijectionTable(self.domain_tag, forward, backward)

    def transport_violations(self, spec: StatTransportSpec) -> list[tuple]:
        return [(x, y) for x, y in self.forward.items()
                if spec.source_key(x) != spec.target_key(y)]


_MISSING = object()


def _sort_keys(keys):
    try:
        return sorted(keys)
    except TypeError:
        return sorted(keys, key=repr)


def matched_oracle(domain: Iterable, codomain: Iterable, spec: StatTransportSpec,
                   tag: str = "") -> BijectionTable:
    """Pair equal-statistic fibers of ``domain`` and ``codomain`` by lexicographic rank."""
    sources = defaultdict(list)
    for x in domain:
        sources[spec.source_key(x)].append(x)
    targets = defaultdict(list)
    for y in codomain:
        targets[spec.target_key(y)].append(y)

    for key in _sort_keys(set(sources) | set(targets)):
        a, b = len(sources.get(key, ())), len(targets.get(key, ()))
        if a != b:
            raise FiberMismatch(key, a, b, tag)

    forward, backward = {}, {}
    for key, xs in sources.items():
        for x, y in zip(sorted(xs), sorted(targets[key])):
            forward[x] = y
            backward[y] = x
    return BijectionTable(tag, forward, backward)


# --- the second fundamental transformation ----------------------------------

def f2(p: Sequence[int]) -> Permutation:
    """Map maj to inv while keeping the inverse descent set.

    Letters are inserted one at a time.  Before appending ``a`` the current
    image is cut into blocks, each ending at a letter on the same side of
    ``a`` as the last letter, and every block is rotated one step right.
    """
    v: list[int] = []
    for a in p:
        if v:
            last_below = v[-1] < a
            out, block = [], []
            for b in v:
                block.append(b)
                if (b < a) == last_below:
                    out.append(block[-1])
                    out.extend(block[:-1])
                    block = []
            v = out
        v.append(a)
    return Permutation._trusted(v)


def f2_prime(p: Sequence[int]) -> Permutation:
    return inverse(f2(inverse(p)))


def f2_loc(p: Sequence[int]) -> Permutation:
    """Apply ``f2_prime`` to the desarrangement part and keep the pix set."""
    d = pixed_decomposition(p)
    return pixed_recompose(PixedDecomposition(d.pix_set, f2_prime(d.desarrangement_part)))


# --- oracle tables ----------------------------------------------------------

def _fix_der(p):
    return fix(p), der(p)


def dw_table(m: int) -> BijectionTable:
    """Derangements onto desarrangements with ``IDES(image) == DES(source)``."""
    spec = StatTransportSpec(des_set, ides_set)
    return matched_oracle(enumerate_derangements(m), enumerate_desarrangements(m),
                          spec, f"DW: D_{m} -> K_{m}")


def chz_table(n: int) -> BijectionTable:
    """S_n onto itself sending (fix, maf, Der) to (fix, maj, Der)."""
    spec = StatTransportSpec(maf, maj, _fix_der)
    return matched_oracle(permutations(n), permutations(n), spec, f"CHZ: S_{n}")


def phi_table(n: int) -> BijectionTable:
    """S_n onto itself sending (fix, DEZ, Der) to (fix, DES, Der)."""
    spec = StatTransportSpec(dez_set, des_set, _fix_der)
    return matched_oracle(permutations(n), permutations(n), spec, f"Phi: S_{n}")


chz_oracle = chz_table
phi_oracle = phi_table


def word_f3_table(cid: ShuffleClassId) -> BijectionTable:
    """A shuffle class onto itself sending maj to mafz."""
    members = list(shuffle_class(cid))
    return matched_oracle(members, members, StatTransportSpec(maj, mafz), f"F3: {cid}")


class OracleFamily:
    """Lazily built, cached tables indexed by a key computed from the element.

    Calling the family on an element looks up (building if needed) the table
    for ``key_of(element)`` and applies it.
    """

    def __init__(self, name: str, key_of: Callable, build: Callable[[Any], BijectionTable]):
        self.name = name
        self.key_of = key_of
        self._build = build
        self._tables: dict = {}
        self._plugged: set = set()
        self._lock = threading.Lock()

    def table(self, key) -> BijectionTable:
        table = self._tables.get(key)
        if table is None:
            with self._lock:
                table = self._tables.get(key)
                if table is None:
                    table = self._build(key)
                    self._tables[key] = table
        return table

    def plug_in(self, key, table: BijectionTable) -> None:
        with self._lock:
            self._tables[key] = table
            self._plugged.add(key)

    @property
    def has_plug_ins(self) -> bool:
        return bool(self._plugged)

    def is_plugged(self, key) -> bool:
        return key in self._plugged

    def __call__(self, x):
        return self.table(self.key_of(x))(x)

    def inverse(self, y):
        return self.table(self.key_of(y)).inverse(y)


def dw_family() -> OracleFamily:
    return OracleFamily("dw", len, dw_table)


def chz_family() -> OracleFamily:
    return OracleFamily("chz", len, chz_table)


def phi_family() -> OracleFamily:
    return OracleFamily("phi", len, phi_table)


def word_f3_family() -> OracleFamily:
    return OracleFamily("f3", shuffle_class_of, word_f3_table)


FAMILY_FACTORIES = {"dw": dw_family, "chz": chz_family, "phi": phi_family, "f3": word_f3_family}
_defaults: dict[str, OracleFamily] = {}


def default_family(kind: str) -> OracleFamily:
    """Process-wide cached family of matched oracles for ``kind``."""
    if kind not in _defaults:
        _defaults[kind] = FAMILY_FACTORIES[kind]()
    return _defaults[kind]


# --- lifted maps ------------------------------------------------------------

def dw_loc(p: Sequence[int], base: Callable | None = None) -> Permutation:
    """Send ``(FIX p, Der p)`` to the permutation with pixed decomposition
    ``(FIX p, base(Der p))``."""
    base = base or default_family("dw")
    d = fixed_decomposition(p)
    return pixed_recompose(PixedDecomposition(d.fix_set, base(d.derangement_part)))


def dw_word(w: Sequence[int], base: Callable | None = None) -> ZeroWord:
    """Keep the zeros of ``w`` and replace its positive part ``v`` by ``base(v)^-1``."""
    base = base or default_family("dw")
    v = Permutation(tuple(a for a in w if a))
    letters = iter(inverse(base(v)))
    return ZeroWord._trusted(next(letters) if a else 0 for a in w)


def dw_word_by_composition(w: Sequence[int], base: Callable | None = None) -> ZeroWord:
    return zdesar(dw_loc(zder_inverse(w), base))


def f3(p: Sequence[int], word_base: Callable | None = None) -> Permutation:
    word_base = word_base or default_family("f3")
    return zder_inverse(word_base(zder(p)))


def f3_prime(p: Sequence[int], word_base: Callable | None = None) -> Permutation:
    word_base = word_base or default_family("f3")
    return zdesar_inverse(word_base(zdesar(p)))


# --- two-column text tables -------------------------------------------------

def _same_class_mafz(x, y):
    return shuffle_class_of(x) == shuffle_class_of(y) and maj(x) == mafz(y)


# kind -> (element type, key of a row, full domain for a key, codomain, transport check)
TABLE_KINDS: dict[str, tuple] = {
    "dw": (Permutation, len, enumerate_derangements, enumerate_desarrangements,
           lambda x, y: des_set(x) == ides_set(y)),
    "chz": (Permutation, len, permutations, permutations,
            lambda x, y: (fix(x), der(x), maf(x)) == (fix(y), der(y), maj(y))),
    "phi": (Permutation, len, permutations, permutations,
            lambda x, y: (fix(x), der(x), dez_set(x)) == (fix(y), der(y), des_set(y))),
    "f3": (ZeroWord, shuffle_class_of, shuffle_class, shuffle_class, _same_class_mafz),
}


def export_tables(kind: str, tables: Iterable[BijectionTable]) -> str:
    """Render tables as ``element<TAB>image`` lines under a ``# kind:`` header."""
    if kind not in TABLE_KINDS:
        raise ValueError(f"unknown table kind {kind!r}")
    lines = [f"# kind: {kind}"]
    for table in tables:
        lines.append(f"# table: {table.domain_tag}")
        for x, y in sorted(table.items()):
            lines.append(f"{' '.join(map(str, x))}\t{' '.join(map(str, y))}")
    return "\n".join(lines) + "\n"


def import_tables(text: str) -> tuple[str, dict]:
    """Parse and validate tables written by :func:`export_tables`.

    Each group of rows sharing a key (order, or shuffle class) must be a
    bijection of the full tagged domain onto the full codomain and must carry
    the kind's transport property.  Returns ``(kind, {key: table})``.
    """
    kind = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("kind:"):
                kind = body[len("kind:"):].strip()
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise TableImportError(f"line {lineno}: expected two tab-separated columns")
        rows.append((lineno, parts[0], parts[1]))
    if kind not in TABLE_KINDS:
        raise TableImportError(f"missing or unknown '# kind:' header: {kind!r}")
    make, key_of, domain_of, codomain_of, transports = TABLE_KINDS[kind]

    groups: dict = defaultdict(list)
    for lineno, left, right in rows:
        try:
            x, y = make(parse_letters(left)), make(parse_letters(right))
        except ValueError as exc:
            raise TableImportError(f"line {lineno}: {exc}") from None
        if not transports(x, y):
            raise TableImportError(
                f"line {lineno}: {left} -> {right} violates the {kind} transport property")
        groups[key_of(x)].append((x, y))

    tables = {}
    for key, pairs in groups.items():
        tag = f"{kind}: {key}"
        try:
            table = BijectionTable.from_pairs(tag, pairs)
        except ValueError as exc:
            raise TableImportError(str(exc)) from None
        if set(table.forward) != set(domain_of(key)):
            raise TableImportError(f"{tag}: rows do not cover the domain exactly")
        if set(table.backward) != set(codomain_of(key)):
            raise TableImportError(f"{tag}: images do not cover the codomain exactly")
        tables[key] = table
    return kind, tables
