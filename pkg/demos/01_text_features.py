"""
Textual and social features of rumor messages
=============================================

Walks one real-looking and one rumor-looking message through the
content-feature extractor and prints what the classifier would see.
"""

from rumorfuse.data import MessageRecord, UserMeta
from rumorfuse.textfeat import (
    count_syllables,
    extract_content_features,
    extract_social_features,
    flesch_reading_ease,
    load_default_lexicon,
)

# readability first: higher scores mean easier text
for text in (
    "The cat sat on the mat.",
    "Incomprehensibility astounds.",
    "Officials confirmed the bridge reopened after inspection.",
    "SHARE THIS NOW!!! they are HIDING the truth about the flood!!!",
):
    print(f"{flesch_reading_ease(text):9.3f}  {text!r}")

# the syllable counter behind it is a vowel-group heuristic with a
# silent-e rule; a few words to show its behavior
for word in ("cat", "astounds", "incomprehensibility", "rhythm", "radio"):
    print(f"{word:22s} -> {count_syllables(word)} syllables")

# two messages, same event, very different texture
lexicon = load_default_lexicon()
calm = MessageRecord(
    id="m1",
    event_id="flood",
    text="Officials confirmed the bridge reopened after inspection. http://gov.example/u1",
    label=0,
    retweet_count=3,
    like_count=10,
    user=UserMeta(
        followers=900, friends=300, posts=4000, times_listed=12,
        likes_given=800, verified=True, has_profile_image=True,
        has_homepage_url=True, was_missing=False,
    ),
    image_paths=(),
)
shrill = MessageRecord(
    id="m2",
    event_id="flood",
    text="SHARE THIS NOW!!! they are HIDING the truth?!? :( #flood @mayor",
    label=1,
    retweet_count=480,
    like_count=12,
    user=UserMeta(
        followers=8, friends=950, posts=20, times_listed=0,
        likes_given=5, verified=False, has_profile_image=False,
        has_homepage_url=False, was_missing=False,
    ),
    image_paths=(),
)

for rec in (calm, shrill):
    content = extract_content_features(rec, lexicon)
    social = extract_social_features(rec)
    print(f"\n{rec.id}: {rec.text}")
    print(f"  words={content.n_words} chars={content.n_chars} "
          f"questions={content.n_question} exclaims={content.n_exclaim}")
    print(f"  sentiment +{content.n_pos_words}/-{content.n_neg_words} "
          f"readability={content.readability:.1f}")
    print(f"  urls={content.n_urls} hashtags={content.n_hashtags} "
          f"mentions={content.n_mentions} pronouns 1st={content.n_first_pron}")
    print(f"  friends/followers={social.friends_followers_ratio:.3f} "
          f"verified={social.verified} retweets={social.retweets}")
