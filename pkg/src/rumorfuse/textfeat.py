"""Content and social-context features extracted from a message.

Tokenization is deliberately simple and fully pinned so counts are
reproducible: tokens are maximal runs of non-whitespace; a token starting
with ``@``/``#`` is a mention/hashtag and never enters sentiment lookup;
URLs are tokens with an ``http://``/``https://``/``www.`` prefix. Lexicon,
emoticon and pronoun matching is case-insensitive on exact tokens (word
tokens are stripped of leading/trailing punctuation first).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, fields

import numpy as np

from rumorfuse.data import Dataset, FeatureMatrix, MessageRecord, MODALITY_TEXTUAL

_VOWELS = frozenset("aeiouy")

FIRST_PERSON_PRONOUNS = frozenset(
    "i we me us my mine our ours myself ourselves".split()
)
SECOND_PERSON_PRONOUNS = frozenset(
    "you your yours yourself yourselves".split()
)
THIRD_PERSON_PRONOUNS = frozenset(
    "he she it they him her them his hers its their theirs "
    "himself herself itself themselves".split()
)


@dataclass(frozen=True)
class SentimentLexicon:
    """Positive/negative word lists plus happy/sad emoticon lists."""

    positive: frozenset[str]
    negative: frozenset[str]
    happy_emoticons: frozenset[str]
    sad_emoticons: frozenset[str]

    def __post_init__(self):
        overlap = self.positive & self.negative
        if overlap:
            raise ValueError(f"words in both polarity lists: {sorted(overlap)[:5]}")


def _read_wordlist(name: str) -> frozenset[str]:
    res = importlib.resources.files("rumorfuse").joinpath(f"resources/lexicon/{name}")
    words = []
    for line in res.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return frozenset(words)


def load_default_lexicon() -> SentimentLexicon:
    """The lexicon bundled with the package (one token per line files)."""
    return SentimentLexicon(
        positive=frozenset(w.lower() for w in _read_wordlist("positive_words.txt")),
        negative=frozenset(w.lower() for w in _read_wordlist("negative_words.txt")),
        happy_emoticons=_read_wordlist("happy_emoticons.txt"),
        sad_emoticons=_read_wordlist("sad_emoticons.txt"),
    )


@dataclass(frozen=True)
class ContentFeatures:
    n_chars: int
    n_words: int
    n_question: int
    n_exclaim: int
    n_upper_chars: int
    n_pos_words: int
    n_neg_words: int
    n_mentions: int
    n_hashtags: int
    n_urls: int
    n_happy_emoticons: int
    n_sad_emoticons: int
    n_first_pron: int
    n_second_pron: int
    n_third_pron: int
    readability: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.float64)


@dataclass(frozen=True)
class SocialFeatures:
    followers: int
    friends: int
    posts: int
    times_listed: int
    likes_given: int
    retweets: int
    likes: int
    friends_followers_ratio: float
    verified: int
    has_profile_image: int
    has_homepage_url: int

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.float64)


CONTENT_COLUMNS = tuple(f.name for f in fields(ContentFeatures))
SOCIAL_COLUMNS = tuple(f.name for f in fields(SocialFeatures))
TEXTUAL_COLUMNS = CONTENT_COLUMNS + SOCIAL_COLUMNS + ("user_meta_missing",)


def tokenize(text: str) -> list[str]:
    """Maximal runs of non-whitespace characters."""
    return text.split()


def is_url(token: str) -> bool:
    low = token.lower()
    return low.startswith(("http://", "https://", "www."))


def _plain_word(token: str) -> str:
    """Lowercased token with non-alphanumeric edges stripped, for lexicon lookup."""
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end].lower()


def count_syllables(word: str) -> int:
    """Vowel-group syllable heuristic, minimum 1.

    Counts maximal vowel groups (a, e, i, o, u, y). Inside a group each
    adjacent 'io'/'ia' pair splits into two syllables (au-di-o, me-di-a)
    unless the pair opens the group right after t/s/c/x (na-tion, so-cial).
    A terminal 'e' is silent unless the word ends in 'le'.
    """
    w = word.lower()
    if not w:
        return 1
    syllables = 0
    group_start = None
    for i, ch in enumerate(w + "."):  # sentinel closes a trailing group
        if ch in _VOWELS:
            if group_start is None:
                group_start = i
        elif group_start is not None:
            group = w[group_start:i]
            syllables += 1
            for k in range(len(group) - 1):
                if group[k : k + 2] in ("io", "ia"):
                    if k == 0 and group_start > 0 and w[group_start - 1] in "tscx":
                        continue
                    syllables += 1
            group_start = None
    if w.endswith("e") and not w.endswith("le"):
        syllables -= 1
    return max(syllables, 1)


def split_sentences(text: str) -> int:
    """Sentence count: maximal runs of '.', '!', '?' are one boundary each.

    A trailing fragment with no terminal punctuation still counts as a
    sentence, so any text with at least one word has at least one sentence.
    """
    count = 0
    in_run = False
    tail_content = False
    for ch in text:
        if ch in ".!?":
            if not in_run:
                count += 1
                in_run = True
            tail_content = False
        else:
            in_run = False
            if not ch.isspace():
                tail_content = True
    if tail_content:
        count += 1
    return count


def _letters(token: str) -> str:
    return "".join(ch for ch in token if ch.isalpha())


def flesch_reading_ease(text: str) -> float:
    """Flesch Reading Ease: 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words).

    Higher is easier to read. Words are whitespace tokens containing at
    least one letter; syllables come from ``count_syllables`` on the
    letters of each word. Returns 0 when no word or no sentence is found.
    """
    words = [_letters(tok) for tok in tokenize(text)]
    words = [w for w in words if w]
    n_sentences = split_sentences(text)
    if not words or n_sentences == 0:
        return 0.0
    n_syllables = sum(count_syllables(w) for w in words)
    n_words = len(words)
    return 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (n_syllables / n_words)


def extract_content_features(m: MessageRecord, lexicon: SentimentLexicon) -> ContentFeatures:
    """Counters over the message text (empty text gives all zeros)."""
    text = m.text
    tokens = tokenize(text)
    n_mentions = n_hashtags = n_urls = 0
    n_pos = n_neg = 0
    n_happy = n_sad = 0
    n_first = n_second = n_third = 0
    for tok in tokens:
        if tok in lexicon.happy_emoticons:
            n_happy += 1
            continue
        if tok in lexicon.sad_emoticons:
            n_sad += 1
            continue
        if tok.startswith("@"):
            n_mentions += 1
            continue
        if tok.startswith("#"):
            n_hashtags += 1
            continue
        if is_url(tok):
            n_urls += 1
            continue
        word = _plain_word(tok)
        if not word:
            continue
        if word in lexicon.positive:
            n_pos += 1
        elif word in lexicon.negative:
            n_neg += 1
        if word in FIRST_PERSON_PRONOUNS:
            n_first += 1
        elif word in SECOND_PERSON_PRONOUNS:
            n_second += 1
        elif word in THIRD_PERSON_PRONOUNS:
            n_third += 1
    return ContentFeatures(
        n_chars=len(text),
        n_words=len(tokens),
        n_question=text.count("?"),
        n_exclaim=text.count("!"),
        n_upper_chars=sum(1 for ch in text if ch.isupper()),
        n_pos_words=n_pos,
        n_neg_words=n_neg,
        n_mentions=n_mentions,
        n_hashtags=n_hashtags,
        n_urls=n_urls,
        n_happy_emoticons=n_happy,
        n_sad_emoticons=n_sad,
        n_first_pron=n_first,
        n_second_pron=n_second,
        n_third_pron=n_third,
        readability=flesch_reading_ease(text),
    )


def extract_social_features(m: MessageRecord) -> SocialFeatures:
    """User-profile counts plus per-message engagement, booleans as 0/1."""
    u = m.user
    return SocialFeatures(
        followers=u.followers,
        friends=u.friends,
        posts=u.posts,
        times_listed=u.times_listed,
        likes_given=u.likes_given,
        retweets=m.retweet_count,
        likes=m.like_count,
        friends_followers_ratio=u.friends / max(u.followers, 1),
        verified=int(u.verified),
        has_profile_image=int(u.has_profile_image),
        has_homepage_url=int(u.has_homepage_url),
    )


def textual_feature_matrix(d: Dataset, lexicon: SentimentLexicon | None = None) -> FeatureMatrix:
    """Content + social features for every record, one row per message.

    Adds a ``user_meta_missing`` indicator column set for records whose
    profile metadata had absent fields imputed to zero.
    """
    if lexicon is None:
        lexicon = load_default_lexicon()
    rows = []
    for r in d.records:
        content = extract_content_features(r, lexicon).as_array()
        social = extract_social_features(r).as_array()
        rows.append(np.concatenate([content, social, [float(r.user.was_missing)]]))
    labels = None
    if all(r.label is not None for r in d.records):
        labels = np.array([r.label for r in d.records], dtype=np.int64)
    return FeatureMatrix(
        column_names=TEXTUAL_COLUMNS,
        column_modalities=tuple([MODALITY_TEXTUAL] * len(TEXTUAL_COLUMNS)),
        values=np.vstack(rows) if rows else np.empty((0, len(TEXTUAL_COLUMNS))),
        row_ids=tuple(r.id for r in d.records),
        labels=labels,
    )
