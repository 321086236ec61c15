"""Text feature oracles: syllables, sentences, Flesch, counters."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rumorfuse import textfeat
from rumorfuse.data import Dataset, MessageRecord, UserMeta
from rumorfuse.textfeat import (
    CONTENT_COLUMNS,
    SOCIAL_COLUMNS,
    TEXTUAL_COLUMNS,
    count_syllables,
    extract_content_features,
    extract_social_features,
    flesch_reading_ease,
    is_url,
    load_default_lexicon,
    split_sentences,
    textual_feature_matrix,
    tokenize,
)

# hand-counted words; dictionary syllabification
SYLLABLE_CASES = {
    "cat": 1,
    "mate": 1,
    "the": 1,
    "bee": 1,
    "apple": 2,
    "astounds": 2,
    "nation": 2,
    "social": 2,
    "media": 3,
    "audio": 3,
    "incomprehensibility": 8,
    "rhythm": 1,
    "a": 1,
    "little": 2,
    "precious": 2,
    "anxious": 2,
    "radio": 3,
}


@pytest.mark.parametrize("word,expected", sorted(SYLLABLE_CASES.items()))
def test_count_syllables(word, expected):
    assert count_syllables(word) == expected


@given(st.text(alphabet=st.characters(min_codepoint=97, max_codepoint=122), max_size=30))
def test_count_syllables_at_least_one(word):
    assert count_syllables(word) >= 1


def test_split_sentences():
    assert split_sentences("One. Two! Three?") == 3
    assert split_sentences("What?! No way...") == 2
    assert split_sentences("no terminal punctuation") == 1
    assert split_sentences("Done. trailing fragment") == 2
    assert split_sentences("") == 0
    assert split_sentences("   ") == 0
    assert split_sentences("...") == 1


def test_flesch_pinned_values():
    # 6 monosyllables, 1 sentence: 206.835 - 1.015*6 - 84.6*1
    assert math.isclose(flesch_reading_ease("The cat sat on the mat."), 116.145, abs_tol=1e-6)
    # 2 words, 1 sentence, 8+2=10 syllables: 206.835 - 2.03 - 423.0
    assert math.isclose(
        flesch_reading_ease("Incomprehensibility astounds."), -218.195, abs_tol=1e-6
    )
    assert flesch_reading_ease("") == 0.0
    assert flesch_reading_ease("?!...") == 0.0
    assert flesch_reading_ease("123 456") == 0.0


def test_flesch_formula_agreement():
    text = "The cat sat on the mat. It purred!"
    words = ["the", "cat", "sat", "on", "the", "mat", "it", "purred"]
    syl = sum(count_syllables(w) for w in words)
    expected = 206.835 - 1.015 * (len(words) / 2) - 84.6 * (syl / len(words))
    assert math.isclose(flesch_reading_ease(text), expected, rel_tol=1e-12)


def test_tokenize_and_url():
    assert tokenize("  a  b\tc\n") == ["a", "b", "c"]
    assert is_url("http://x.co")
    assert is_url("HTTPS://X.CO/path")
    assert is_url("www.example.com")
    assert not is_url("ftp://x.co")
    assert not is_url("word")


def _record(text, **user_kw):
    return MessageRecord(
        id="m0", event_id="e0", text=text, user=UserMeta(**user_kw)
    )


def test_content_counters():
    lex = load_default_lexicon()
    text = "WOW!! I love this :) but @you hide #truth http://t.co/x ?"
    f = extract_content_features(_record(text), lex)
    assert f.n_chars == len(text)
    assert f.n_words == len(text.split())
    assert f.n_exclaim == 2
    assert f.n_question == 1
    assert f.n_mentions == 1
    assert f.n_hashtags == 1
    assert f.n_urls == 1
    assert f.n_happy_emoticons == 1
    assert f.n_sad_emoticons == 0
    assert f.n_pos_words == 1  # love
    assert f.n_first_pron == 1  # I
    assert f.n_upper_chars == 4  # WOW + I
    assert extract_content_features(_record(""), lex) == type(f)(
        *([0] * 15 + [0.0])
    )


def test_emoticon_tokens_not_double_counted():
    # ':(' must be an emoticon, not a spurious mention/hashtag/punct word
    lex = load_default_lexicon()
    f = extract_content_features(_record("bad news :( :("), lex)
    assert f.n_sad_emoticons == 2
    assert f.n_neg_words == 1  # bad


def test_pronoun_classes_disjoint():
    groups = [
        textfeat.FIRST_PERSON_PRONOUNS,
        textfeat.SECOND_PERSON_PRONOUNS,
        textfeat.THIRD_PERSON_PRONOUNS,
    ]
    for i in range(3):
        for j in range(i + 1, 3):
            assert not groups[i] & groups[j]


def test_lexicon_disjoint_and_nonempty():
    lex = load_default_lexicon()
    assert lex.positive and lex.negative
    assert not lex.positive & lex.negative
    assert lex.happy_emoticons and lex.sad_emoticons
    assert not lex.happy_emoticons & lex.sad_emoticons


def test_social_features():
    f = extract_social_features(
        MessageRecord(
            id="m0",
            event_id="e0",
            text="t",
            user=UserMeta(followers=200, friends=50, verified=True),
            retweet_count=7,
            like_count=3,
        )
    )
    assert f.followers == 200 and f.friends == 50
    assert f.retweets == 7 and f.likes == 3
    assert f.friends_followers_ratio == 0.25
    assert f.verified == 1 and f.has_profile_image == 0


def test_friends_ratio_zero_followers():
    f = extract_social_features(_record("t", friends=30, followers=0))
    assert f.friends_followers_ratio == 30.0  # max(followers, 1) guard


def test_textual_matrix_shape_and_columns():
    recs = tuple(
        MessageRecord(
            id=f"m{i}", event_id="e0", text=f"hello world {i}!", user=UserMeta(), label=i % 2
        )
        for i in range(6)
    )
    m = textual_feature_matrix(Dataset(records=recs))
    assert m.column_names == TEXTUAL_COLUMNS
    assert m.values.shape == (6, 28)
    assert len(CONTENT_COLUMNS) == 16 and len(SOCIAL_COLUMNS) == 11
    assert m.column_names[-1] == "user_meta_missing"
    assert np.all(m.values[:, -1] == 0.0)
    assert list(m.labels) == [0, 1, 0, 1, 0, 1]


def test_missing_user_meta_flagged():
    recs = (
        MessageRecord(id="a", event_id="e", text="x", user=UserMeta(was_missing=True)),
        MessageRecord(id="b", event_id="e", text="x", user=UserMeta()),
    )
    m = textual_feature_matrix(Dataset(records=recs))
    assert m.values[0, -1] == 1.0 and m.values[1, -1] == 0.0
    assert m.labels is None
