#!/usr/bin/env python3
"""Regenerate the committed data under src/rumourstance/data/.

Everything here is synthetic and deterministic. The resource bundle uses a
16-dimensional embedding space with one axis per word family (support,
doubt, surprise, certainty, five moods) plus per-topic axes, so cosine
scores behave the way the real pipeline expects without shipping anyone
else's resources.

The micro corpus is built so that confidence features carry label signal
across rumours while bags of words cannot: each rumour voices support and
denial through its own private synonyms. A synonym occurs once per rumour,
which keeps it below the frequency threshold of fold-local vocabularies,
and it never repeats in another rumour. Its embedding, though, sits on the
shared support or doubt axis, so the cosine features transfer. Removing
them should therefore cost real accuracy, which is what the ablation
acceptance check measures.

The ottawa file is a shape-fidelity fixture: 58 single-event rumours whose
label counts match the published corpus statistics for that event. The
texts are synthesized; the original tweets are not redistributable.
"""

from __future__ import annotations

import argparse
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

DIM = 16
AXIS = {
    "support": 0, "doubt": 1, "surprise": 2, "certainty": 3,
    "amused": 4, "disappointed": 5, "indignant": 6, "satisfied": 7,
    "worried": 8,
    "topic_a1": 9, "topic_a2": 10, "topic_a3": 11,
    "topic_b1": 12, "topic_b2": 13, "topic_b3": 14,
    "general": 15,
}

AF_LISTS = {
    "support": ["confirmed", "verified", "official", "definite", "evidence",
                "proven", "reliable", "credible"],
    "doubt": ["doubt", "doubtful", "unconfirmed", "skeptical", "dubious",
              "questionable", "unverified", "suspicious"],
    "nodoubt": ["certain", "sure", "undeniable", "absolutely", "obvious",
                "clearly", "fact", "undoubtedly"],
    "surprise": ["wow", "unbelievable", "incredible", "shocking",
                 "astonishing", "stunned", "whoa", "astonished"],
}
AF_AXIS = {"support": "support", "doubt": "doubt", "nodoubt": "certainty",
           "surprise": "surprise"}

MOOD_LISTS = {
    "amused": ["amused", "funny", "hilarious", "laughing", "joking"],
    "disappointed": ["disappointed", "letdown", "sighing", "unfortunate",
                     "regrettable"],
    "indignant": ["outraged", "indignant", "furious", "disgusted", "livid"],
    "satisfied": ["satisfied", "pleased", "glad", "contented", "relieved"],
    "worried": ["worried", "anxious", "scared", "nervous", "afraid"],
}

INTERROGATIVES = [
    "who", "what", "when", "where", "why", "how", "which", "whose", "whom",
    "is", "are", "was", "were", "am", "do", "does", "did", "have", "has",
    "had", "can", "could", "will", "would", "should", "shall", "may",
    "might", "anyone", "anybody",
]

SENTIMENT = {
    "terrible": -2, "awful": -2, "horrible": -2, "tragic": -2, "hate": -2,
    "sad": -1, "bad": -1, "scary": -1, "wrong": -1, "fear": -1,
    "good": 1, "nice": 1, "hope": 1, "safe": 1, "happy": 1,
    "great": 2, "wonderful": 2, "amazing": 2, "love": 2, "excellent": 2,
}

EMOTICONS = [(":)", "happy"), (":-)", "happy"), (":D", "happy"),
             (":(", "sad"), (":-(", "sad"), (";)", "wink"),
             (":P", "tongue"), (":o", "surprise"), (":O", "surprise")]

SLANG = ["gonna", "wanna", "gotta", "dunno", "yall", "tbh", "smh"]
GOOGLE_BAD = ["wtf", "stfu", "ffs", "dammit", "bullshit"]
ACRONYMS = ["rt", "lol", "omg", "fyi", "imo", "imho", "btw", "idk"]

GAZETTEER_PERSON = ["john smith", "jane doe", "officer brown", "mayor wilson"]
GAZETTEER_ORG = ["city council", "police department", "red cross",
                 "channel nine", "transit authority"]
GAZETTEER_LOCATION = ["main street", "harbour bridge", "river park",
                      "central station", "city hall", "north district"]

REGEXES = [
    r".*is (that|this|it) true.*",
    r".*(rumou?r|hoax).*",
    r".*(debunk|false alarm).*",
    r".*really\?.*",
    r".*(confirm|deny).*",
    r".*breaking( news)?.*",
    r".*(any|more) (news|info|updates?).*",
    r".*(source|link)\?.*",
    r".*not (true|real|confirmed).*",
    r".*(officials?|police) say.*",
]

# Per-rumour private synonym pairs. Each word appears exactly once in its
# rumour and nowhere else, so fold-local vocabularies never index it; only
# its embedding (on the shared support or doubt axis) carries signal across
# rumours. Pairs are length-matched so surface statistics cannot split the
# support wording from the denial wording.
RUMOURS = [
    {
        "rumour": "a1", "event": "ea", "topic_axis": "topic_a1",
        "topic_words": ["bridge", "collapse"], "scene": "Main Street",
        "pairs": [("corroborated", "manufactured"), ("validated", "falsified"),
                  ("dependable", "fabricated"), ("truthful", "mistaken")],
    },
    {
        "rumour": "a2", "event": "ea", "topic_axis": "topic_a2",
        "topic_words": ["mayor", "resignation"], "scene": "City Hall",
        "pairs": [("substantiated", "fictionalised"), ("affirmed", "invented"),
                  ("plausible", "imaginary"), ("upheld", "untrue")],
    },
    {
        "rumour": "a3", "event": "ea", "topic_axis": "topic_a3",
        "topic_words": ["water", "contamination"], "scene": "River Park",
        "pairs": [("trustworthy", "embellished"), ("genuine", "slanted"),
                  ("accurate", "spurious"), ("foolproof", "concocted")],
    },
    {
        "rumour": "b1", "event": "eb", "topic_axis": "topic_b1",
        "topic_words": ["stadium", "blaze"], "scene": "North District",
        "pairs": [("authenticated", "misattributed"), ("legitimate", "groundless"),
                  ("verifiable", "fictitious"), ("solid", "bogus")],
    },
    {
        "rumour": "b2", "event": "eb", "topic_axis": "topic_b2",
        "topic_words": ["train", "derailment"], "scene": "Central Station",
        "pairs": [("confirmable", "exaggerated"), ("authentic", "distorted"),
                  ("factual", "twisted"), ("sound", "phony")],
    },
    {
        "rumour": "b3", "event": "eb", "topic_axis": "topic_b3",
        "topic_words": ["power", "outage"], "scene": "Harbour Bridge",
        "pairs": [("established", "misreported"), ("definitive", "misleading"),
                  ("reasoned", "doctored"), ("exact", "false")],
    },
]

# shared scaffolds; only the synonym slot differs between a support reply
# and its denial twin, so every other column sees identical values
REPLY_TEMPLATES = [
    "witnesses say the story was {syn} this morning",
    "police sources say the account was {syn} already",
    "local reporters believe the claim was {syn} overnight",
    "several officials state the report was {syn} earlier",
]
QUERY_TEMPLATES = [
    "is there any update on the {topic} story yet?",
    "what happened exactly, anyone have photos or a link?",
    "where are these reports coming from, any source?",
]
COMMENT_TEMPLATES = [
    "thoughts with everyone nearby, stay safe out there",
    "so sad watching this unfold from home tonight :(",
    "still glued to the coverage, what a week",
]

GENERAL_WORDS = [
    "breaking", "reported", "being", "near", "witnesses", "say", "story",
    "morning", "police", "sources", "account", "already", "local",
    "reporters", "believe", "claim", "overnight", "several", "officials",
    "state", "report", "earlier", "update", "happened", "exactly", "photos",
    "link", "reports", "coming", "source", "thoughts", "everyone", "nearby",
    "stay", "safe", "watching", "unfold", "home", "tonight", "glued",
    "coverage", "week", "scene", "people", "news", "live", "incident",
]

FUNCTION_WORDS = [
    "a", "an", "the", "this", "that", "these", "those", "is", "are", "was",
    "were", "am", "it", "on", "in", "at", "by", "to", "of", "for", "with",
    "from", "any", "more", "so", "out", "not", "no", "yet", "and", "or",
    "just", "still", "there", "what", "where", "when", "who", "why", "how",
    "which", "anyone", "have", "has", "had", "do", "does", "did", "can",
    "could", "will", "would", "should", "up",
]


def build_vocabulary() -> dict:
    """word -> axis name (None for function words)."""
    vocab: dict = {}
    for list_name, words in AF_LISTS.items():
        for word in words:
            vocab[word] = AF_AXIS[list_name]
    for mood, words in MOOD_LISTS.items():
        for word in words:
            vocab[word] = mood
    for spec in RUMOURS:
        for support_word, deny_word in spec["pairs"]:
            vocab[support_word] = "support"
            vocab[deny_word] = "doubt"
        for word in spec["topic_words"]:
            vocab[word] = spec["topic_axis"]
    for word in GENERAL_WORDS:
        vocab.setdefault(word, "general")
    for word in FUNCTION_WORDS:
        vocab.setdefault(word, None)
    for word in SENTIMENT:
        vocab.setdefault(word, "general")
    for phrase in GAZETTEER_LOCATION + GAZETTEER_PERSON + GAZETTEER_ORG:
        for word in phrase.split():
            vocab.setdefault(word, "general")
    return vocab


def write_embeddings(path: Path, vocab: dict, rng: np.random.Generator) -> None:
    lines = []
    for word in sorted(vocab):
        axis = vocab[word]
        if axis is None:
            vector = rng.normal(0.0, 0.01, DIM)
        else:
            vector = rng.normal(0.0, 0.04, DIM)
            vector[AXIS[axis]] += 1.0
        cells = " ".join(f"{v:.5f}" for v in vector)
        lines.append(f"{word} {cells}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_brown(path: Path, vocab: dict) -> None:
    # one cluster per word: cluster indicators mirror exact word identity,
    # so they carry no cross-rumour signal the word itself would not
    lines = []
    for i, word in enumerate(sorted(vocab)):
        bits = format(i, "b").zfill(4)
        lines.append(f"{bits}\t{word}\t{i + 1}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_lists(root: Path) -> None:
    lists = root / "lists"
    lists.mkdir(parents=True, exist_ok=True)
    for name, words in {**AF_LISTS, **MOOD_LISTS}.items():
        (lists / f"{name}.txt").write_text("\n".join(words) + "\n", encoding="utf-8")
    (lists / "interrogatives.txt").write_text(
        "\n".join(INTERROGATIVES) + "\n", encoding="utf-8")
    sentiment_lines = [f"{word}\t{score}" for word, score in sorted(SENTIMENT.items())]
    (lists / "sentiment.tsv").write_text("\n".join(sentiment_lines) + "\n",
                                         encoding="utf-8")


def write_dicts(root: Path) -> None:
    dicts = root / "dicts"
    dicts.mkdir(parents=True, exist_ok=True)
    (dicts / "emoticons.tsv").write_text(
        "\n".join(f"{emo}\t{cat}" for emo, cat in EMOTICONS) + "\n", encoding="utf-8")
    (dicts / "slang.txt").write_text("\n".join(SLANG) + "\n", encoding="utf-8")
    (dicts / "google_bad.txt").write_text("\n".join(GOOGLE_BAD) + "\n", encoding="utf-8")
    (dicts / "acronyms.txt").write_text("\n".join(ACRONYMS) + "\n", encoding="utf-8")


def write_gazetteers(root: Path) -> None:
    gaz = root / "gazetteers"
    gaz.mkdir(parents=True, exist_ok=True)
    (gaz / "person.txt").write_text("\n".join(GAZETTEER_PERSON) + "\n", encoding="utf-8")
    (gaz / "org.txt").write_text("\n".join(GAZETTEER_ORG) + "\n", encoding="utf-8")
    (gaz / "location.txt").write_text("\n".join(GAZETTEER_LOCATION) + "\n",
                                      encoding="utf-8")


def write_bundle(root: Path, rng: np.random.Generator) -> None:
    root.mkdir(parents=True, exist_ok=True)
    vocab = build_vocabulary()
    write_embeddings(root / "embeddings.txt", vocab, rng)
    write_brown(root / "brown.tsv", vocab)
    write_lists(root)
    write_dicts(root)
    write_gazetteers(root)
    (root / "regex.txt").write_text("\n".join(REGEXES) + "\n", encoding="utf-8")


# --- tweet corpora ---------------------------------------------------------------


def iso(ts: float) -> str:
    stamp = datetime.fromtimestamp(ts, tz=timezone.utc)
    return stamp.strftime("%Y-%m-%dT%H:%M:%SZ")


def make_user(rng: np.random.Generator, created_at: float) -> dict:
    age_days = int(rng.integers(60, 2000))
    return {
        "statuses_count": int(rng.integers(10, 20000)),
        "verified": bool(rng.random() < 0.1),
        "followers": int(rng.integers(0, 5000)),
        "followees": int(rng.integers(1, 2000)),
        "favourites_count": int(rng.integers(0, 8000)),
        "account_created": iso(created_at - age_days * 86400.0),
        "geo_enabled": bool(rng.random() < 0.3),
        "description": rng.choice([
            "news watcher", "local resident", "coffee first", "sports and weather",
            None, "just here for the updates"]),
    }


def micro_tweets(spec: dict, base_ts: float, rng: np.random.Generator) -> list:
    rumour = spec["rumour"]
    source_id = f"{rumour}-t00"
    topic = " ".join(spec["topic_words"])
    source_text = f"Breaking: a {topic} is being reported near {spec['scene']}"
    rows = [(source_id, None, source_text, "support")]
    for i, template in enumerate(REPLY_TEMPLATES):
        rows.append((f"{rumour}-t{i + 1:02d}", source_id,
                     template.format(syn=spec["pairs"][i][0]), "support"))
    for i, template in enumerate(REPLY_TEMPLATES):
        rows.append((f"{rumour}-t{i + 5:02d}", source_id,
                     template.format(syn=spec["pairs"][i][1]), "deny"))
    rows.append((f"{rumour}-t09", source_id,
                 f"RT @newsdesk: {source_text}", "support"))
    for i, template in enumerate(QUERY_TEMPLATES):
        rows.append((f"{rumour}-t{i + 10:02d}", source_id,
                     template.format(topic=topic), "query"))
    for i, template in enumerate(COMMENT_TEMPLATES):
        rows.append((f"{rumour}-t{i + 13:02d}", source_id, template, "comment"))
    tweets = []
    for offset, (tweet_id, parent, text, label) in enumerate(rows):
        created = base_ts + offset * 180.0
        tweets.append({
            "tweet_id": tweet_id,
            "text": text,
            "created_at": iso(created),
            "in_reply_to": parent,
            "rumour_id": rumour,
            "event_id": spec["event"],
            "label": label,
            "user": make_user(rng, created),
        })
    return tweets


def write_micro_corpus(path: Path, rng: np.random.Generator) -> None:
    base = datetime(2015, 3, 1, 12, 0, 0, tzinfo=timezone.utc).timestamp()
    tweets = []
    for i, spec in enumerate(RUMOURS):
        tweets.extend(micro_tweets(spec, base + i * 7200.0, rng))
    with path.open("w", encoding="utf-8") as fh:
        for tweet in tweets:
            fh.write(json.dumps(tweet, ensure_ascii=False) + "\n")


# counts for the single-event export: 58 rumours; stance totals 161/76/64/481
OTTAWA_RUMOURS = 58
OTTAWA_COUNTS = {"support": 161, "deny": 76, "query": 64, "comment": 481}

_SUPPORT_TEXTS = [
    "witnesses say the story was corroborated this morning",
    "police sources say the account was validated already",
    "looks credible, the report was substantiated near the scene",
]
_DENY_TEXTS = [
    "witnesses say the story was manufactured this morning",
    "police sources say the account was falsified already",
    "locals say the report was invented, ignore it",
]
_QUERY_TEXTS = [
    "is there any update on this story yet?",
    "what happened exactly, anyone have photos or a link?",
    "really? where is this coming from?",
]
_COMMENT_TEXTS = [
    "thoughts with everyone nearby, stay safe out there",
    "so sad watching this unfold from home tonight",
    "still watching the coverage from home",
]


def write_ottawa(path: Path, rng: np.random.Generator) -> None:
    base = datetime(2014, 10, 22, 14, 0, 0, tzinfo=timezone.utc).timestamp()
    pool = []
    # sources are support tweets; the rest of the support quota joins the pool
    pool.extend(["support"] * (OTTAWA_COUNTS["support"] - OTTAWA_RUMOURS))
    pool.extend(["deny"] * OTTAWA_COUNTS["deny"])
    pool.extend(["query"] * OTTAWA_COUNTS["query"])
    pool.extend(["comment"] * OTTAWA_COUNTS["comment"])
    pool = [pool[i] for i in rng.permutation(len(pool))]

    # split the reply pool into 58 chunks, each rumour getting at least one
    cuts = sorted(rng.choice(np.arange(1, len(pool)), size=OTTAWA_RUMOURS - 1,
                             replace=False).tolist())
    chunks = []
    start = 0
    for cut in cuts + [len(pool)]:
        chunks.append(pool[start:cut])
        start = cut

    texts = {"support": _SUPPORT_TEXTS, "deny": _DENY_TEXTS,
             "query": _QUERY_TEXTS, "comment": _COMMENT_TEXTS}
    with path.open("w", encoding="utf-8") as fh:
        for r, labels in enumerate(chunks):
            rumour = f"ottawa-r{r:02d}"
            source_id = f"{rumour}-t000"
            created = base + r * 600.0
            source = {
                "tweet_id": source_id,
                "text": f"Breaking: incident {r} is being reported near the scene",
                "created_at": iso(created),
                "in_reply_to": None,
                "rumour_id": rumour,
                "event_id": "ottawa",
                "label": "support",
                "user": make_user(rng, created),
            }
            fh.write(json.dumps(source, ensure_ascii=False) + "\n")
            for i, label in enumerate(labels, start=1):
                created_i = created + i * 45.0
                variants = texts[label]
                reply = {
                    "tweet_id": f"{rumour}-t{i:03d}",
                    "text": variants[int(rng.integers(0, len(variants)))],
                    "created_at": iso(created_i),
                    "in_reply_to": source_id,
                    "rumour_id": rumour,
                    "event_id": "ottawa",
                    "label": label,
                    "user": make_user(rng, created_i),
                }
                fh.write(json.dumps(reply, ensure_ascii=False) + "\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None,
                        help="data directory (default: src/rumourstance/data "
                             "relative to the repo root)")
    args = parser.parse_args()
    if args.out is None:
        out = Path(__file__).resolve().parent.parent / "src" / "rumourstance" / "data"
    else:
        out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.Philox(key=np.array([20150301, 0],
                                                            dtype=np.uint64)))
    write_bundle(out / "bundle", rng)
    write_micro_corpus(out / "micro_corpus.jsonl", rng)
    write_ottawa(out / "ottawa.jsonl", rng)
    print(f"wrote bundle, micro_corpus.jsonl, ottawa.jsonl under {out}")


if __name__ == "__main__":
    main()
