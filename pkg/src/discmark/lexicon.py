"""Marker lexicon: the canonical marker inventory and prefix matching.

A lexicon entry is a canonical marker (lowercase, possibly ending in a
comma, e.g. ``"as a result,"``) plus surface variants that count as the
same marker.  Matching is case-insensitive at the start of a sentence,
on a token boundary, longest variant first; a canonical form that ends
in a comma requires the comma in the text.
"""

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigError, FileFormatError

NONE_CLASS = "NONE"
PLACEHOLDER = "[S_1]"

_WORD_RE = re.compile(r"[^\s,]+")


@dataclass(frozen=True)
class _Variant:
    core: str          # variant text without the trailing comma
    needs_comma: bool  # comma after the core is mandatory
    canonical: str


@dataclass
class MarkerLexicon:
    """Canonical markers and their matchable surface variants."""

    entries: list[tuple[str, list[str]]]
    none_class_name: str = NONE_CLASS
    _index: dict[str, list[_Variant]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        seen = set()
        for canonical, variants in self.entries:
            if not canonical or canonical.strip(",").strip() == "":
                raise ConfigError("empty canonical marker in lexicon")
            if canonical != canonical.lower():
                raise ConfigError(f"canonical marker not lowercase: {canonical!r}")
            if canonical == self.none_class_name:
                raise ConfigError(f"{self.none_class_name!r} is reserved, not a lexicon entry")
            if canonical in seen:
                raise ConfigError(f"duplicate canonical marker: {canonical!r}")
            seen.add(canonical)
            if not variants:
                raise ConfigError(f"marker {canonical!r} has no variants")
        self._index = self._build_index()

    def _build_index(self):
        index: dict[str, list[_Variant]] = {}
        owner: dict[tuple[str, bool], str] = {}
        for canonical, variants in self.entries:
            for raw in variants:
                text = raw.strip().lower()
                needs_comma = text.endswith(",")
                core = text.rstrip(",").strip()
                if not core:
                    raise ConfigError(f"empty variant for marker {canonical!r}")
                key = (core, needs_comma)
                if key in owner and owner[key] != canonical:
                    raise ConfigError(
                        f"variant {text!r} maps to both {owner[key]!r} and {canonical!r}"
                    )
                owner[key] = canonical
                first = core.split()[0]
                index.setdefault(first, []).append(_Variant(core, needs_comma, canonical))
        for bucket in index.values():
            bucket.sort(key=lambda v: (-len(v.core), not v.needs_comma))
        return index

    @property
    def markers(self) -> list[str]:
        return [canonical for canonical, _ in self.entries]

    def class_names(self) -> list[str]:
        """Full class vocabulary: lexicon order, NONE appended last."""
        return self.markers + [self.none_class_name]

    def __len__(self):
        return len(self.entries)

    def __contains__(self, marker: str) -> bool:
        return any(canonical == marker for canonical, _ in self.entries)


def match_marker(sentence: str, lexicon: MarkerLexicon):
    """Match a lexicon variant at the start of ``sentence``.

    Returns ``(canonical_marker, stripped_sentence)`` for the longest
    matching variant, or ``None`` when no variant matches or stripping
    would leave an empty sentence.  The matched prefix and one directly
    following comma (plus whitespace) are removed; the remainder keeps
    its original casing.
    """
    if not sentence:
        return None
    m = _WORD_RE.match(sentence)
    if m is None:
        return None
    first = m.group(0).lower()
    candidates = lexicon._index.get(first)
    if not candidates:
        return None
    lowered = sentence.lower()
    for variant in candidates:
        core = variant.core
        if not lowered.startswith(core):
            continue
        pos = len(core)
        if pos < len(sentence):
            ch = sentence[pos]
            if ch != "," and not ch.isspace():
                continue  # token boundary violated ("but" vs "butter")
        has_comma = pos < len(sentence) and sentence[pos] == ","
        if variant.needs_comma and not has_comma:
            continue
        if has_comma:
            pos += 1
        rest = sentence[pos:].lstrip()
        if not rest:
            return None
        return variant.canonical, rest
    return None


def load_lexicon(path) -> MarkerLexicon:
    """Read a lexicon file: one canonical marker per line, optional
    tab-separated comma-delimited variants after it."""
    entries = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            canonical = parts[0].strip()
            if not canonical:
                raise FileFormatError(path, line_no, "missing canonical marker")
            variants = [canonical]
            if len(parts) > 1 and parts[1].strip():
                for piece in parts[1].split(","):
                    piece = piece.strip()
                    if piece and piece not in variants:
                        variants.append(piece)
            entries.append((canonical, variants))
    return MarkerLexicon(entries)


def write_lexicon(lexicon: MarkerLexicon, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for canonical, variants in lexicon.entries:
            extra = [v for v in variants if v != canonical]
            if extra:
                f.write(f"{canonical}\t{', '.join(extra)}\n")
            else:
                f.write(canonical + "\n")


def default_lexicon() -> MarkerLexicon:
    """The bundled 174-marker lexicon."""
    ref = resources.files("discmark.data").joinpath("markers_174.txt")
    entries = []
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            entries.append((line, [line]))
    return MarkerLexicon(entries)
