"""Text preprocessing: sentence splitting, tokenization, phrase segmentation.

Raw UTF-8 text is turned into indexed sentences of essential lexical
units: multi-word phrases matched greedily against a lexicon, then the
remaining words filtered by part of speech and stop list and reduced to
stems. Everything downstream (graphs, distances, salience) works on
these units.
"""

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

NOUN = "noun"
VERB = "verb"
ADJECTIVE = "adjective"
OTHER = "other"

POS_CLASSES = frozenset({NOUN, VERB, ADJECTIVE, OTHER})
ESSENTIAL_POS = frozenset({NOUN, VERB, ADJECTIVE})

WORD = "word"
PHRASE = "phrase"

_TERMINALS = ".!?。！？"
_TRAILERS = "\"')]»”’"

_WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['’\-][A-Za-z0-9]+)*")


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    pos_class: str
    is_stop: bool


@dataclass(frozen=True)
class LexicalUnit:
    kind: str  # WORD or PHRASE
    key: str

    def __post_init__(self):
        if self.kind == PHRASE and "_" not in self.key:
            raise ValueError("phrase key must join >=2 tokens with '_': %r" % self.key)
        if self.kind == WORD and "_" in self.key:
            raise ValueError("word key must not contain '_': %r" % self.key)


@dataclass(frozen=True)
class Sentence:
    index: int  # 1-based position in the document
    raw: str
    char_length: int
    units: Tuple[LexicalUnit, ...]
    essential_count: int  # distinct unit keys

    @property
    def distinct_keys(self) -> FrozenSet[str]:
        return frozenset(u.key for u in self.units)


@dataclass(frozen=True)
class Document:
    sentences: Tuple[Sentence, ...]
    n: int = field(init=False)
    unit_vocab: FrozenSet[LexicalUnit] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.sentences))
        vocab = frozenset(u for s in self.sentences for u in s.units)
        object.__setattr__(self, "unit_vocab", vocab)


def _read_lines(name: str) -> List[str]:
    text = resources.files("sentrank.data").joinpath(name).read_text("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def default_stopwords() -> FrozenSet[str]:
    return frozenset(_read_lines("stopwords.txt"))


def default_abbreviations() -> FrozenSet[str]:
    return frozenset(_read_lines("abbreviations.txt"))


def default_pos_lexicon() -> Dict[str, str]:
    table = {}
    for line in _read_lines("pos_lexicon.txt"):
        word, _, pos = line.partition("\t")
        table[word] = pos if pos in POS_CLASSES else NOUN
    return table


def load_phrase_lexicon(path) -> FrozenSet[str]:
    """Read a phrase lexicon file: one lowercase underscore-joined phrase per line."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


# ---------------------------------------------------------------------------
# Porter stemmer (classic 1980 algorithm, steps 1a-5b)
# ---------------------------------------------------------------------------

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_cons(stem, i)
        if prev_vowel and cons:
            m += 1
        prev_vowel = not cons
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _double_cons(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_cons(word, len(word) - 1)


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    i = len(word) - 1
    return (
        _is_cons(word, i - 2)
        and not _is_cons(word, i - 1)
        and _is_cons(word, i)
        and word[i] not in "wxy"
    )


_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
    "ism", "ate", "iti", "ous", "ive", "ize", "al", "er", "ic", "ou",
)


def porter_stem(word: str) -> str:
    """Stem a lowercase word with the Porter suffix-stripping algorithm."""
    w = word
    if len(w) <= 2:
        return w

    # step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif w.endswith("s") and not w.endswith("ss"):
        w = w[:-1]

    # step 1b
    fixup = False
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    elif w.endswith("ed") and _has_vowel(w[:-2]):
        w = w[:-2]
        fixup = True
    elif w.endswith("ing") and _has_vowel(w[:-3]):
        w = w[:-3]
        fixup = True
    if fixup:
        if w.endswith(("at", "bl", "iz")):
            w += "e"
        elif _double_cons(w) and w[-1] not in "lsz":
            w = w[:-1]
        elif _measure(w) == 1 and _ends_cvc(w):
            w += "e"

    # step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    # step 2
    for suffix, repl in _STEP2:
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 0:
                w = stem + repl
            break

    # step 3
    for suffix, repl in _STEP3:
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 0:
                w = stem + repl
            break

    # step 4
    for suffix in _STEP4:
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 1 and (suffix != "ion" or stem.endswith(("s", "t"))):
                w = stem
            break

    # step 5a
    if w.endswith("e"):
        stem = w[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            w = stem

    # step 5b
    if _measure(w) > 1 and _double_cons(w) and w.endswith("l"):
        w = w[:-1]

    return w


def identity_stem(word: str) -> str:
    """No-op stemmer for analytic languages where stemming does not apply."""
    return word


# ---------------------------------------------------------------------------
# Sentence splitting
# ---------------------------------------------------------------------------

def _ends_with_abbreviation(chunk: str, abbreviations: FrozenSet[str]) -> bool:
    m = re.search(r"([A-Za-z][A-Za-z.]*)\.$", chunk)
    if m is None:
        return False
    return m.group(1).lower() in abbreviations


def split_sentences(text: str, abbreviations: Optional[FrozenSet[str]] = None) -> List[str]:
    """Split text on terminal punctuation followed by whitespace or EOF.

    Paragraph breaks (blank lines) always end a sentence. A trailing period
    does not split when the preceding word is a known abbreviation.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    sentences: List[str] = []
    for paragraph in re.split(r"\n\s*\n", text):
        buf: List[str] = []
        i, limit = 0, len(paragraph)
        while i < limit:
            ch = paragraph[i]
            buf.append(ch)
            i += 1
            if ch in _TERMINALS:
                while i < limit and paragraph[i] in _TRAILERS:
                    buf.append(paragraph[i])
                    i += 1
                at_boundary = i >= limit or paragraph[i].isspace()
                chunk = "".join(buf)
                if at_boundary and not (ch == "." and _ends_with_abbreviation(chunk, abbreviations)):
                    chunk = chunk.strip()
                    if chunk:
                        sentences.append(chunk)
                    buf = []
        tail = "".join(buf).strip()
        if tail:
            sentences.append(tail)
    return sentences


# ---------------------------------------------------------------------------
# Tokenization and phrase segmentation
# ---------------------------------------------------------------------------

def tokenize(
    raw: str,
    stopwords: Optional[FrozenSet[str]] = None,
    pos_lexicon: Optional[Dict[str, str]] = None,
    stemmer=porter_stem,
) -> List[Token]:
    """Tokenize one sentence; unknown words default to the noun class."""
    if stopwords is None:
        stopwords = default_stopwords()
    if pos_lexicon is None:
        pos_lexicon = default_pos_lexicon()
    tokens = []
    for surface in _WORD_RE.findall(raw):
        lower = surface.lower().replace("’", "'")
        tokens.append(
            Token(
                surface=surface,
                stem=stemmer(lower),
                pos_class=pos_lexicon.get(lower, NOUN),
                is_stop=lower in stopwords,
            )
        )
    return tokens


def _essential_word(token: Token) -> Optional[LexicalUnit]:
    if token.is_stop or token.pos_class not in ESSENTIAL_POS:
        return None
    return LexicalUnit(WORD, token.stem)


def segment_phrases(tokens: Sequence[Token], lexicon: FrozenSet[str]) -> List[LexicalUnit]:
    """Greedy longest-match segmentation against the phrase lexicon.

    Maximal token spans whose lowercase underscore-joined form is in the
    lexicon become phrase units; every other token either passes the
    essential-word filter or is dropped.
    """
    max_span = max((p.count("_") + 1 for p in lexicon), default=0)
    lowers = [t.surface.lower() for t in tokens]
    units: List[LexicalUnit] = []
    i = 0
    while i < len(tokens):
        matched = False
        for span in range(min(max_span, len(tokens) - i), 1, -1):
            key = "_".join(lowers[i : i + span])
            if key in lexicon:
                units.append(LexicalUnit(PHRASE, key))
                i += span
                matched = True
                break
        if not matched:
            unit = _essential_word(tokens[i])
            if unit is not None:
                units.append(unit)
            i += 1
    return units


def demote_unembedded_phrases(
    units: Sequence[LexicalUnit],
    embeddings,
    stopwords: Optional[FrozenSet[str]] = None,
    pos_lexicon: Optional[Dict[str, str]] = None,
    stemmer=porter_stem,
) -> List[LexicalUnit]:
    """Replace phrases missing from the embedding table by their words.

    Constituent words pass the same essential-word filter as in
    segmentation, so a demoted phrase of stop words vanishes entirely.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    if pos_lexicon is None:
        pos_lexicon = default_pos_lexicon()
    out: List[LexicalUnit] = []
    for unit in units:
        if unit.kind == PHRASE and unit.key not in embeddings:
            for part in unit.key.split("_"):
                if part in stopwords or pos_lexicon.get(part, NOUN) not in ESSENTIAL_POS:
                    continue
                out.append(LexicalUnit(WORD, stemmer(part)))
        else:
            out.append(unit)
    return out


# ---------------------------------------------------------------------------
# Document assembly
# ---------------------------------------------------------------------------

def _make_sentence(index: int, raw: str, units: Sequence[LexicalUnit]) -> Sentence:
    return Sentence(
        index=index,
        raw=raw,
        char_length=len(raw),
        units=tuple(units),
        essential_count=len({u.key for u in units}),
    )


def document_from_sentences(
    raws: Iterable[str],
    lexicon: FrozenSet[str] = frozenset(),
    embeddings=None,
    stopwords: Optional[FrozenSet[str]] = None,
    pos_lexicon: Optional[Dict[str, str]] = None,
    stemmer=porter_stem,
) -> Document:
    """Build a Document from pre-split sentences."""
    if stopwords is None:
        stopwords = default_stopwords()
    if pos_lexicon is None:
        pos_lexicon = default_pos_lexicon()
    sentences = []
    for idx, raw in enumerate(raws, start=1):
        tokens = tokenize(raw, stopwords, pos_lexicon, stemmer)
        units = segment_phrases(tokens, lexicon)
        if embeddings is not None:
            units = demote_unembedded_phrases(units, embeddings, stopwords, pos_lexicon, stemmer)
        sentences.append(_make_sentence(idx, raw, units))
    return Document(sentences=tuple(sentences))


def build_document(
    text: str,
    lexicon: FrozenSet[str] = frozenset(),
    embeddings=None,
    stopwords: Optional[FrozenSet[str]] = None,
    pos_lexicon: Optional[Dict[str, str]] = None,
    abbreviations: Optional[FrozenSet[str]] = None,
    stemmer=porter_stem,
) -> Document:
    """Split raw text into sentences and build a Document."""
    raws = split_sentences(text, abbreviations)
    return document_from_sentences(raws, lexicon, embeddings, stopwords, pos_lexicon, stemmer)
