"""Rule-based sentence segmentation.

Splits raw text on terminal punctuation (``. ! ?``) with an
abbreviation veto and a next-token check.  Pre-segmented input
(one sentence per line) bypasses this module entirely; see
:mod:`discmark.corpus`.
"""

# Period-final tokens that normally do not end a sentence.
ABBREVIATIONS = frozenset({
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.",
    "e.g.", "i.e.", "etc.", "cf.", "al.", "inc.", "ltd.", "co.", "corp.",
    "no.", "nos.", "fig.", "figs.", "eq.", "approx.", "dept.", "est.",
    "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
    "sept.", "oct.", "nov.", "dec.", "mon.", "tue.", "wed.", "thu.",
    "fri.", "sat.", "sun.", "u.s.", "u.k.", "a.m.", "p.m.",
})

_TERMINALS = ".!?"
_CLOSERS = "\"')]}”’»"
_OPENERS = "\"'([{“‘«"


def _last_token(text: str) -> str:
    """Trailing whitespace-delimited token of ``text``, lowercased."""
    i = len(text)
    while i > 0 and not text[i - 1].isspace():
        i -= 1
    return text[i:].lower()


def _is_boundary(text: str, end: int) -> bool:
    """Decide whether the terminal run ending at ``end`` closes a sentence."""
    if end >= len(text):
        return True
    if not text[end].isspace():
        return False  # "3.14", "U.S.A" - punctuation glued to more text
    token = _last_token(text[:end])
    if token in ABBREVIATIONS:
        return False
    j = end
    has_newline = False
    while j < len(text) and text[j].isspace():
        has_newline = has_newline or text[j] == "\n"
        j += 1
    if j >= len(text):
        return True
    if has_newline:
        return True
    nxt = text[j]
    return nxt.isupper() or nxt.isdigit() or nxt in _OPENERS or nxt in "-–—"


def segment_sentences(text: str) -> list[str]:
    """Split ``text`` into sentences.

    Deterministic; every non-whitespace character of the input ends up
    in exactly one returned sentence.  Empty input gives an empty list.
    """
    sentences = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINALS:
            j = i + 1
            while j < n and text[j] in _TERMINALS:
                j += 1
            while j < n and text[j] in _CLOSERS:
                j += 1
            if _is_boundary(text, j):
                piece = text[start:j].strip()
                if piece:
                    sentences.append(piece)
                start = j
                i = j
                continue
            i = j
            continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
