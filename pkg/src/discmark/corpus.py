"""Documents and raw corpus readers.

Two input layouts are accepted:

* plain text: documents separated by blank lines, each document run
  through the rule-based segmenter;
* pre-segmented: one sentence per line, documents introduced by
  ``# doc: <id>`` lines.
"""

from dataclasses import dataclass
from pathlib import Path

from .errors import FileFormatError
from .segment import segment_sentences

DOC_PREFIX = "# doc:"


@dataclass
class Document:
    doc_id: str
    sentences: list[str]


def _clean(sentences):
    return [s.strip() for s in sentences if s.strip()]


def read_corpus(path) -> list[Document]:
    """Read one corpus file, auto-detecting its layout."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    for line in text.splitlines():
        if line.strip():
            presegmented = line.startswith(DOC_PREFIX)
            break
    else:
        return []
    if presegmented:
        return _read_presegmented(path, text)
    return _read_plain(path, text)


def _read_presegmented(path, text) -> list[Document]:
    docs = []
    doc_id = None
    sentences: list[str] = []
    seen_ids = set()
    for line_no, line in enumerate(text.splitlines(), 1):
        if line.startswith(DOC_PREFIX):
            if doc_id is not None and sentences:
                docs.append(Document(doc_id, sentences))
            doc_id = line[len(DOC_PREFIX):].strip()
            if not doc_id:
                raise FileFormatError(path, line_no, "document separator without an id")
            if doc_id in seen_ids:
                raise FileFormatError(path, line_no, f"duplicate doc id {doc_id!r}")
            seen_ids.add(doc_id)
            sentences = []
        elif line.strip():
            if doc_id is None:
                raise FileFormatError(path, line_no, "sentence before any '# doc:' separator")
            sentences.append(line.strip())
    if doc_id is not None and sentences:
        docs.append(Document(doc_id, sentences))
    return docs


def _read_plain(path, text) -> list[Document]:
    docs = []
    block: list[str] = []
    index = 0

    def flush():
        nonlocal index
        if block:
            sentences = _clean(segment_sentences("\n".join(block)))
            if sentences:
                docs.append(Document(f"{path.stem}:{index:06d}", sentences))
                index += 1
            block.clear()

    for line in text.splitlines():
        if line.strip():
            block.append(line)
        else:
            flush()
    flush()
    return docs


def read_corpora(paths) -> list[Document]:
    """Read several corpus files; doc ids must stay unique across files."""
    docs = []
    seen = set()
    for p in paths:
        for doc in read_corpus(p):
            if doc.doc_id in seen:
                raise FileFormatError(p, 0, f"doc id {doc.doc_id!r} already used by another file")
            seen.add(doc.doc_id)
            docs.append(doc)
    return docs
