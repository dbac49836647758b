"""Normalize raw tweet exports into the corpus JSONL schema.

Raw lines are tolerant Twitter-API-shaped objects: alternative field names
are accepted, Twitter's legacy created_at format is parsed, and tweets whose
stance annotation is outside the four-class set are dropped (sources are kept
unlabelled instead, since replies need them for thread structure).
"""

from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from pathlib import Path

from .corpus import _LABEL_ALIASES, CorpusError, format_rfc3339, parse_rfc3339

log = logging.getLogger(__name__)

_TWITTER_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def _parse_any_timestamp(value) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    text = str(value).strip()
    try:
        return parse_rfc3339(text)
    except CorpusError:
        pass
    try:
        return datetime.strptime(text, _TWITTER_TIME_FORMAT).timestamp()
    except ValueError:
        raise CorpusError(f"unrecognized timestamp: {value!r}") from None


def _first(obj: dict, *names, default=None):
    for name in names:
        if name in obj and obj[name] is not None:
            return obj[name]
    return default


def _as_count(value) -> int:
    if value is None:
        return 0
    try:
        n = int(value)
    except (TypeError, ValueError):
        return 0
    return max(0, n)


def normalize_record(obj: dict, default_event: str = "unknown") -> dict:
    """Map one raw tweet object to the normalized ingestion schema."""
    tweet_id = _first(obj, "tweet_id", "id_str", "id")
    if tweet_id is None:
        raise CorpusError("raw tweet has no id")
    text = _first(obj, "text", "full_text", default="")
    created_raw = _first(obj, "created_at", "timestamp")
    if created_raw is None:
        raise CorpusError(f"raw tweet {tweet_id} has no created_at")
    created_at = _parse_any_timestamp(created_raw)
    in_reply_to = _first(obj, "in_reply_to", "in_reply_to_status_id_str",
                         "in_reply_to_status_id")
    rumour_id = _first(obj, "rumour_id", "thread_id", "conversation_id")
    if rumour_id is None:
        raise CorpusError(f"raw tweet {tweet_id} has no rumour/thread id")
    event_id = _first(obj, "event_id", "event", default=default_event)

    user = obj.get("user") or {}
    account_raw = _first(user, "account_created", "created_at")
    account_created = _parse_any_timestamp(account_raw) if account_raw is not None else created_at
    account_created = min(account_created, created_at)
    description = user.get("description")
    normalized_user = {
        "statuses_count": _as_count(_first(user, "statuses_count", "statuses")),
        "verified": bool(user.get("verified", False)),
        "followers": _as_count(_first(user, "followers", "followers_count")),
        "followees": _as_count(_first(user, "followees", "friends_count", "following")),
        "favourites_count": _as_count(_first(user, "favourites_count", "favorites_count")),
        "account_created": format_rfc3339(account_created),
        "geo_enabled": bool(user.get("geo_enabled", False)),
        "description": str(description) if description else None,
    }
    label = _first(obj, "label", "stance")
    return {
        "tweet_id": str(tweet_id),
        "text": str(text),
        "created_at": format_rfc3339(created_at),
        "in_reply_to": str(in_reply_to) if in_reply_to is not None else None,
        "rumour_id": str(rumour_id),
        "event_id": str(event_id),
        "label": str(label) if label is not None else None,
        "user": normalized_user,
    }


def ingest_file(raw_path, out_path, default_event: str = "unknown") -> dict:
    """Normalize a raw JSONL export; returns {"kept": n, "dropped": n}.

    Tweets with an annotation outside the four-class set are dropped, except
    source tweets, which are kept with the label cleared.
    """
    raw_path = Path(raw_path)
    out_path = Path(out_path)
    kept = 0
    dropped = 0
    with raw_path.open("r", encoding="utf-8") as fin, \
            out_path.open("w", encoding="utf-8") as fout:
        for lineno, line in enumerate(fin, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                record = normalize_record(obj, default_event=default_event)
            except (json.JSONDecodeError, CorpusError) as exc:
                raise CorpusError(f"{raw_path}:{lineno}: {exc}") from None
            label = record["label"]
            if label is not None and label.strip().lower() not in _LABEL_ALIASES:
                if record["in_reply_to"] is None:
                    record["label"] = None  # keep sources for thread structure
                else:
                    dropped += 1
                    continue
            fout.write(json.dumps(record, ensure_ascii=False) + "\n")
            kept += 1
    if dropped:
        log.warning("dropped %d tweets with out-of-set annotations", dropped)
    return {"kept": kept, "dropped": dropped}
