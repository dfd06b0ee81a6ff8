"""Ingestion of session and attribute files.

Builds per-ID-type vocabularies (item indices ordered by descending session
frequency, so the index doubles as the Zipf rank), the item -> attribute
index table with structural weights, and the session corpus used for
training.

File formats:

* sessions: UTF-8 text, one session per line, item tokens separated by a
  single ASCII space.
* attributes: UTF-8 TSV with header
  ``item_id  product_id  store_id  brand_id  cate1  cate2  cate3``,
  one row per item, empty field = missing value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MalformedInput, UnknownToken

logger = logging.getLogger(__name__)

ID_TYPES = ("item", "product", "store", "brand", "cate1", "cate2", "cate3")
NUM_ID_TYPES = len(ID_TYPES)
ATTRIBUTE_HEADER = "item_id\tproduct_id\tstore_id\tbrand_id\tcate1\tcate2\tcate3"

MISSING = -1


@dataclass(frozen=True)
class TypeVocab:
    """Dense token <-> index mapping for one ID type."""

    name: str
    tokens: tuple[str, ...]
    freq: np.ndarray  # int64, one count per index
    index_of: dict[str, int] = field(repr=False)

    @classmethod
    def from_tokens(cls, name: str, tokens: list[str], freq: list[int] | np.ndarray) -> "TypeVocab":
        return cls(
            name=name,
            tokens=tuple(tokens),
            freq=np.asarray(freq, dtype=np.int64),
            index_of={tok: i for i, tok in enumerate(tokens)},
        )

    @property
    def size(self) -> int:
        return len(self.tokens)

    def index(self, token: str) -> int:
        try:
            return self.index_of[token]
        except KeyError:
            raise UnknownToken(f"unknown {self.name} token {token!r}") from None


@dataclass(frozen=True)
class Vocabulary:
    """One TypeVocab per ID type; the item type comes first."""

    types: tuple[TypeVocab, ...]

    @property
    def item(self) -> TypeVocab:
        return self.types[0]

    @property
    def num_types(self) -> int:
        return len(self.types)

    def sizes(self) -> tuple[int, ...]:
        return tuple(t.size for t in self.types)

    def by_name(self, name: str) -> TypeVocab:
        for t in self.types:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class AttributeTable:
    """Item index -> attribute indices, with structural weights.

    ``ids[i, k]`` is the index of the type-k value of item i, or ``MISSING``.
    Column 0 is the item itself (``ids[i, 0] == i``). ``weights[i, k]`` is
    one over the number of distinct items sharing that value, zero where the
    value is missing, so the weights of one value partition unity.
    """

    ids: np.ndarray       # (D_item, K) int64
    weights: np.ndarray   # (D_item, K) float64
    value_counts: tuple[np.ndarray, ...]  # per type: distinct-item count per value index

    @property
    def num_items(self) -> int:
        return self.ids.shape[0]

    @property
    def num_types(self) -> int:
        return self.ids.shape[1]


@dataclass(frozen=True)
class SessionCorpus:
    """Ordered item-index sequences, one per interactive session."""

    sessions: list[np.ndarray]
    n_tokens: int
    skipped_lines: int = 0
    dropped_tokens: int = 0


def build_attribute_table(ids: np.ndarray, type_sizes: tuple[int, ...] | list[int]) -> AttributeTable:
    """Compute per-value item counts and weights from an id matrix.

    ``ids`` must have one row per item and column 0 equal to the row index.
    """
    ids = np.asarray(ids, dtype=np.int64)
    n_items, n_types = ids.shape
    if n_items and not np.array_equal(ids[:, 0], np.arange(n_items)):
        raise ValueError("column 0 of the attribute id matrix must be the item index itself")
    weights = np.zeros_like(ids, dtype=np.float64)
    counts: list[np.ndarray] = []
    for k in range(n_types):
        col = ids[:, k]
        present = col >= 0
        cnt = np.bincount(col[present], minlength=type_sizes[k]).astype(np.int64)
        counts.append(cnt)
        weights[present, k] = 1.0 / cnt[col[present]]
    return AttributeTable(ids=ids, weights=weights, value_counts=tuple(counts))


def _check_token(token: str, where: str) -> str:
    if not token or any(ch.isspace() for ch in token):
        raise MalformedInput(f"{where}: token {token!r} is empty or contains whitespace")
    return token


def _iter_session_lines(path: str | Path):
    """Yield (lineno, tokens) for non-empty lines; count empties via StopIteration value."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = [t for t in line.rstrip("\n").split(" ") if t]
            yield lineno, tokens


def _parse_attribute_rows(path: str | Path) -> list[tuple[str, ...]]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != ATTRIBUTE_HEADER:
            raise MalformedInput(f"{path}: bad attribute header {header!r}")
        rows = []
        seen: set[str] = set()
        for lineno, line in enumerate(fh, start=2):
            if line.endswith("\n"):
                line = line[:-1]
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != NUM_ID_TYPES:
                raise MalformedInput(
                    f"{path}:{lineno}: expected {NUM_ID_TYPES} tab-separated fields, got {len(fields)}"
                )
            item = fields[0]
            if not item:
                raise MalformedInput(f"{path}:{lineno}: empty item_id")
            _check_token(item, f"{path}:{lineno}")
            if item in seen:
                raise MalformedInput(f"{path}:{lineno}: duplicate item row {item!r}")
            seen.add(item)
            rows.append(tuple(fields))
    return rows


def build_vocabulary(session_path: str | Path, attribute_path: str | Path) -> Vocabulary:
    """Build all ID-type vocabularies from a session file and an attribute file.

    Item indices are assigned in strictly non-increasing session-frequency
    order, ties broken by ascending token order; items that appear only in
    the attribute file get frequency 0 and the tail of the range. Attribute
    vocabularies (types 2..K) are ordered by first appearance in the
    attribute file and their frequency field counts the distinct items
    carrying each value.
    """
    counts: dict[str, int] = {}
    for _, tokens in _iter_session_lines(session_path):
        for tok in tokens:
            _check_token(tok, str(session_path))
            counts[tok] = counts.get(tok, 0) + 1

    rows = _parse_attribute_rows(attribute_path)
    for row in rows:
        counts.setdefault(row[0], 0)

    item_tokens = sorted(counts, key=lambda t: (-counts[t], t))
    types = [TypeVocab.from_tokens("item", item_tokens, [counts[t] for t in item_tokens])]

    for k in range(1, NUM_ID_TYPES):
        tokens: list[str] = []
        value_items: dict[str, int] = {}
        for row in rows:
            value = row[k]
            if not value:
                continue
            _check_token(value, str(attribute_path))
            if value not in value_items:
                value_items[value] = 0
                tokens.append(value)
            value_items[value] += 1
        types.append(TypeVocab.from_tokens(ID_TYPES[k], tokens, [value_items[t] for t in tokens]))

    return Vocabulary(types=tuple(types))


def load_sessions(path: str | Path, vocab: Vocabulary, strict: bool = True) -> SessionCorpus:
    """Map a session file to item-index sequences.

    Unknown tokens raise :class:`UnknownToken` in strict mode and are
    dropped (and counted) otherwise. Empty lines are skipped with a counted
    warning. Raises :class:`MalformedInput` if the file holds no sessions.
    """
    item = vocab.item
    sessions: list[np.ndarray] = []
    skipped = 0
    dropped = 0
    n_tokens = 0
    for lineno, tokens in _iter_session_lines(path):
        if not tokens:
            skipped += 1
            continue
        indices = []
        for tok in tokens:
            idx = item.index_of.get(tok)
            if idx is None:
                if strict:
                    raise UnknownToken(f"{path}:{lineno}: unknown item token {tok!r}")
                dropped += 1
                continue
            indices.append(idx)
        sessions.append(np.asarray(indices, dtype=np.int64))
        n_tokens += len(indices)
    if not sessions:
        raise MalformedInput(f"{path}: no sessions found")
    if skipped:
        logger.warning("%s: skipped %d empty session line(s)", path, skipped)
    if dropped:
        logger.warning("%s: dropped %d unknown token(s)", path, dropped)
    return SessionCorpus(sessions=sessions, n_tokens=n_tokens, skipped_lines=skipped, dropped_tokens=dropped)


def load_attributes(path: str | Path, vocab: Vocabulary) -> AttributeTable:
    """Load the attribute file into an index table against ``vocab``.

    Items without a row keep all attributes missing; missing fields are
    excluded from the per-value counts, so each present value's weights
    still sum to one.
    """
    rows = _parse_attribute_rows(path)
    n_items = vocab.item.size
    ids = np.full((n_items, vocab.num_types), MISSING, dtype=np.int64)
    ids[:, 0] = np.arange(n_items)
    for row in rows:
        i = vocab.item.index(row[0])
        for k in range(1, vocab.num_types):
            value = row[k]
            if value:
                ids[i, k] = vocab.types[k].index(value)
    return build_attribute_table(ids, vocab.sizes())
