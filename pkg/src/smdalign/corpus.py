"""Document/embedding data model and on-disk corpus formats.

A corpus is three files: a JSON Lines document file, a binary embedding
matrix ("XEMB" format), and an optional gold-pair TSV. Documents are grouped
into per-web-domain corpora; candidate pairs never cross domains.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

XEMB_MAGIC = b"XEMB"
XEMB_VERSION = 1

_ROLES = ("source", "target")


class CorpusFormatError(ValueError):
    """Raised when a corpus, embedding, or gold file violates its format."""


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Dense float32 sentence-embedding matrix, one vector per row."""

    data: np.ndarray  # (rows, dim) float32, row-major

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddingMatrix) and np.array_equal(self.data, other.data)

    def __post_init__(self):
        if self.data.ndim != 2:
            raise CorpusFormatError("embedding data must be 2-dimensional")
        if self.data.dtype != np.float32:
            object.__setattr__(self, "data", self.data.astype(np.float32))
        if not np.all(np.isfinite(self.data)):
            raise CorpusFormatError("embedding matrix contains NaN or Inf")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def row(self, i: int) -> np.ndarray:
        return self.data[i]


@dataclass(frozen=True)
class SentenceRef:
    text: str
    emb_row: int
    token_count: int


@dataclass(frozen=True)
class Document:
    doc_id: str
    domain_id: str
    lang: str
    sentences: tuple[SentenceRef, ...]
    doc_emb_row: int | None = None


@dataclass(frozen=True)
class DomainCorpus:
    domain_id: str
    source_docs: tuple[Document, ...]
    target_docs: tuple[Document, ...]
    embeddings: EmbeddingMatrix

    @property
    def all_docs(self) -> tuple[Document, ...]:
        return self.source_docs + self.target_docs


@dataclass(frozen=True)
class VocabEntry:
    """One unique sentence of a document: text identity plus embedding row,
    occurrence count and token length."""

    text: str
    emb_row: int
    count: int
    token_count: int


@dataclass(frozen=True)
class SentenceVocabulary:
    entries: tuple[VocabEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def counts(self) -> np.ndarray:
        return np.array([e.count for e in self.entries], dtype=np.float64)

    @property
    def token_counts(self) -> np.ndarray:
        return np.array([e.token_count for e in self.entries], dtype=np.float64)

    @property
    def emb_rows(self) -> list[int]:
        return [e.emb_row for e in self.entries]

    @property
    def texts(self) -> list[str]:
        return [e.text for e in self.entries]


def tokenize_count(text: str) -> int:
    """Token count of a sentence: number of whitespace-separated runs."""
    return len(text.split())


def build_vocabulary(doc: Document) -> SentenceVocabulary:
    """Unique sentences of a document, keyed by exact (trimmed) text.

    Entries keep first-occurrence order; count is the number of occurrences
    of that text within the document.
    """
    order: dict[str, int] = {}
    entries: list[VocabEntry] = []
    for sent in doc.sentences:
        key = sent.text.strip()
        if key in order:
            idx = order[key]
            old = entries[idx]
            entries[idx] = VocabEntry(old.text, old.emb_row, old.count + 1, old.token_count)
        else:
            order[key] = len(entries)
            entries.append(VocabEntry(key, sent.emb_row, 1, sent.token_count))
    return SentenceVocabulary(tuple(entries))


# ---------------------------------------------------------------------------
# XEMB binary embedding format
# ---------------------------------------------------------------------------

def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Read an XEMB file: magic "XEMB", u32 version, u32 rows, u32 dim,
    then rows*dim little-endian float32, row-major."""
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:4] != XEMB_MAGIC:
        raise CorpusFormatError(f"{path}: not an XEMB embedding file")
    version, rows, dim = struct.unpack_from("<III", raw, 4)
    if version != XEMB_VERSION:
        raise CorpusFormatError(f"{path}: unsupported XEMB version {version}")
    body = raw[16:]
    expected = rows * dim * 4
    if len(body) != expected:
        raise CorpusFormatError(
            f"{path}: expected {expected} payload bytes for {rows}x{dim}, got {len(body)}"
        )
    data = np.frombuffer(body, dtype="<f4").reshape(rows, dim)
    return EmbeddingMatrix(np.ascontiguousarray(data))


def save_embeddings(emb: EmbeddingMatrix, path: str | Path) -> None:
    """Write an XEMB file; bit-exact round trip with load_embeddings."""
    header = XEMB_MAGIC + struct.pack("<III", XEMB_VERSION, emb.rows, emb.dim)
    body = np.ascontiguousarray(emb.data, dtype="<f4").tobytes()
    Path(path).write_bytes(header + body)


# ---------------------------------------------------------------------------
# JSON Lines corpus format
# ---------------------------------------------------------------------------

def _parse_sentence(obj, lineno: int, emb: EmbeddingMatrix, doc_id: str) -> SentenceRef:
    if not isinstance(obj, dict) or "text" not in obj or "emb_row" not in obj:
        raise CorpusFormatError(f"line {lineno}: sentence must have 'text' and 'emb_row'")
    text = obj["text"]
    if not isinstance(text, str):
        raise CorpusFormatError(f"line {lineno}: sentence text must be a string")
    emb_row = obj["emb_row"]
    if not isinstance(emb_row, int) or isinstance(emb_row, bool) or emb_row < 0:
        raise CorpusFormatError(f"line {lineno}: emb_row must be a nonnegative integer")
    if emb_row >= emb.rows:
        raise CorpusFormatError(f"doc {doc_id!r}: embedding row out of range ({emb_row} >= {emb.rows})")
    tokens = obj.get("tokens")
    if tokens is None:
        tokens = tokenize_count(text)
    elif not isinstance(tokens, int) or isinstance(tokens, bool):
        raise CorpusFormatError(f"line {lineno}: tokens must be a positive integer")
    if tokens < 1:
        raise CorpusFormatError(f"line {lineno}: sentence in doc {doc_id!r} has no tokens")
    return SentenceRef(text=text, emb_row=emb_row, token_count=tokens)


def _parse_document(line: str, lineno: int, emb: EmbeddingMatrix) -> tuple[Document, str]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"line {lineno}: document record must be a JSON object")
    for key in ("doc_id", "domain_id", "lang", "role", "sentences"):
        if key not in obj:
            raise CorpusFormatError(f"line {lineno}: missing field {key!r}")
    doc_id = obj["doc_id"]
    role = obj["role"]
    if role not in _ROLES:
        raise CorpusFormatError(f"line {lineno}: role must be 'source' or 'target', got {role!r}")
    raw_sents = obj["sentences"]
    if not isinstance(raw_sents, list) or not raw_sents:
        raise CorpusFormatError(f"line {lineno}: doc {doc_id!r} has no sentences")
    sentences = tuple(_parse_sentence(s, lineno, emb, doc_id) for s in raw_sents)
    doc_emb_row = obj.get("doc_emb_row")
    if doc_emb_row is not None:
        if not isinstance(doc_emb_row, int) or isinstance(doc_emb_row, bool) or doc_emb_row < 0:
            raise CorpusFormatError(f"line {lineno}: doc_emb_row must be a nonnegative integer")
        if doc_emb_row >= emb.rows:
            raise CorpusFormatError(
                f"doc {doc_id!r}: embedding row out of range ({doc_emb_row} >= {emb.rows})"
            )
    doc = Document(
        doc_id=doc_id,
        domain_id=obj["domain_id"],
        lang=obj["lang"],
        sentences=sentences,
        doc_emb_row=doc_emb_row,
    )
    return doc, role


def load_corpus(corpus_path: str | Path, embeddings_path: str | Path) -> list[DomainCorpus]:
    """Load a JSON Lines corpus plus its embedding matrix.

    Returns one DomainCorpus per domain_id, sorted by domain_id; documents
    within each role sorted by doc_id. All embedding row references are
    validated against the matrix.
    """
    emb = load_embeddings(embeddings_path)
    by_domain: dict[str, dict[str, list[Document]]] = {}
    seen: set[tuple[str, str, str]] = set()
    with open(corpus_path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            doc, role = _parse_document(line, lineno, emb)
            key = (doc.domain_id, doc.lang, doc.doc_id)
            if key in seen:
                raise CorpusFormatError(
                    f"line {lineno}: duplicate doc_id {doc.doc_id!r} in domain "
                    f"{doc.domain_id!r} / lang {doc.lang!r}"
                )
            seen.add(key)
            by_domain.setdefault(doc.domain_id, {"source": [], "target": []})[role].append(doc)

    corpora = []
    for domain_id in sorted(by_domain):
        groups = by_domain[domain_id]
        src = tuple(sorted(groups["source"], key=lambda d: d.doc_id))
        tgt = tuple(sorted(groups["target"], key=lambda d: d.doc_id))
        src_langs = {d.lang for d in src}
        tgt_langs = {d.lang for d in tgt}
        if src_langs & tgt_langs:
            raise CorpusFormatError(
                f"domain {domain_id!r}: source and target share language(s) "
                f"{sorted(src_langs & tgt_langs)}"
            )
        corpora.append(
            DomainCorpus(domain_id=domain_id, source_docs=src, target_docs=tgt, embeddings=emb)
        )
    return corpora


def _doc_record(doc: Document, role: str) -> dict:
    sents = []
    for s in doc.sentences:
        sents.append({"text": s.text, "tokens": s.token_count, "emb_row": s.emb_row})
    rec = {
        "doc_id": doc.doc_id,
        "domain_id": doc.domain_id,
        "lang": doc.lang,
        "role": role,
        "sentences": sents,
    }
    if doc.doc_emb_row is not None:
        rec["doc_emb_row"] = doc.doc_emb_row
    return rec


def save_corpus(domains: list[DomainCorpus], path: str | Path) -> None:
    """Write domains back to JSON Lines; inverse of load_corpus."""
    with open(path, "w", encoding="utf-8") as fh:
        for domain in sorted(domains, key=lambda d: d.domain_id):
            for role, docs in (("source", domain.source_docs), ("target", domain.target_docs)):
                for doc in docs:
                    fh.write(json.dumps(_doc_record(doc, role), ensure_ascii=False))
                    fh.write("\n")


# ---------------------------------------------------------------------------
# Gold alignment TSV
# ---------------------------------------------------------------------------

def load_gold(gold_path: str | Path) -> set[tuple[str, str]]:
    """Gold pairs from a two-column TSV (src_doc_id, tgt_doc_id), no header."""
    pairs: set[tuple[str, str]] = set()
    with open(gold_path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2:
                raise CorpusFormatError(
                    f"line {lineno}: expected 2 tab-separated fields, got {len(fields)}"
                )
            pairs.add((fields[0], fields[1]))
    return pairs


def save_gold(pairs: set[tuple[str, str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in sorted(pairs):
            fh.write(f"{src}\t{tgt}\n")
