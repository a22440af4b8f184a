"""Challenge record store: single-use tokens, TTL, attempt ledger.

All state transitions happen under one lock (compare-and-transition), so
any interleaving of concurrent requests produces at most one transition
out of ``pending`` per token.  Plaintext answers are never stored; each
record keeps a per-record salt and a SHA-256 digest, and comparisons go
through ``hmac.compare_digest`` on fixed-length digests.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import StoreFullError

PENDING = "pending"
PASSED = "passed"
FAILED = "failed"
EXPIRED = "expired"
TERMINAL_STATES = frozenset((PASSED, FAILED, EXPIRED))

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_EXPIRED = "expired"

_FINAL_VERDICT = {PASSED: VERDICT_PASS, FAILED: VERDICT_FAIL, EXPIRED: VERDICT_EXPIRED}


def normalize_answer(answer: str, ignore_leading_zeros: bool = False) -> str:
    """Trim surrounding whitespace; optionally drop leading zeros."""
    answer = answer.strip()
    if ignore_leading_zeros and answer:
        answer = answer.lstrip("0") or "0"
    return answer


def answer_digest(salt_hex: str, normalized_answer: str) -> str:
    return hashlib.sha256(bytes.fromhex(salt_hex) + normalized_answer.encode("utf-8")).hexdigest()


def digests_equal(a_hex: str, b_hex: str) -> bool:
    """Constant-time comparison of two fixed-length digests."""
    return hmac.compare_digest(bytes.fromhex(a_hex), bytes.fromhex(b_hex))


@dataclass
class ChallengeRecord:
    token: str
    salt: str
    answer_digest: str
    media_file: str | None
    spec_json: dict | None
    prompt_text: str
    warning_text: str
    issued_at: float
    expires_at: float
    attempts_remaining: int
    state: str = PENDING

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, data: dict) -> "ChallengeRecord":
        return cls(**data)


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of one verification call.

    status: "ok" (fresh verdict), "unknown" (no such token), or
    "terminal" (record already finished; verdict echoes its final state).
    """

    status: str
    verdict: str | None = None
    attempts_remaining: int = 0


class ChallengeStore:
    def __init__(
        self,
        ttl_seconds: float = 300.0,
        max_attempts: int = 3,
        max_records: int = 10000,
        journal_path=None,
        ignore_leading_zeros: bool = False,
        clock=time.time,
    ):
        self.ttl_seconds = ttl_seconds
        self.max_attempts = max_attempts
        self.max_records = max_records
        self.ignore_leading_zeros = ignore_leading_zeros
        self._clock = clock
        self._lock = threading.RLock()
        self._records: dict[str, ChallengeRecord] = {}
        self._journal = None
        self._journal_path = Path(journal_path) if journal_path else None
        if self._journal_path is not None:
            if self._journal_path.exists():
                self._replay_journal()
            self._journal_path.parent.mkdir(parents=True, exist_ok=True)
            self._journal = open(self._journal_path, "a", encoding="utf-8")

    # -- journaling -----------------------------------------------------

    def _journal_write(self, event: dict) -> None:
        if self._journal is not None:
            self._journal.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
            self._journal.flush()

    def _replay_journal(self) -> None:
        with open(self._journal_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event["event"]
                if kind == "issue":
                    record = ChallengeRecord.from_json_dict(event["record"])
                    self._records[record.token] = record
                elif kind == "attempt":
                    record = self._records.get(event["token"])
                    if record is not None:
                        record.attempts_remaining = event["attempts_remaining"]
                elif kind == "transition":
                    record = self._records.get(event["token"])
                    if record is not None:
                        record.state = event["state"]

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()
            self._journal = None

    # -- issuing ---------------------------------------------------------

    def issue(
        self,
        value: str,
        media_file: str | None = None,
        spec_json: dict | None = None,
        prompt_text: str = "",
        warning_text: str = "",
        now: float | None = None,
    ) -> ChallengeRecord:
        """Create a pending record for ``value``; returns it.

        The token is rerolled until it neither collides with a live token
        nor contains the answer as a substring (URL-safe tokens mix
        digits, so unfiltered ones would occasionally leak short values).
        """
        normalized = normalize_answer(value, self.ignore_leading_zeros)
        salt = secrets.token_hex(16)
        with self._lock:
            now = self._clock() if now is None else now
            if len(self._records) >= self.max_records:
                raise StoreFullError(
                    f"record store is at capacity ({self.max_records}); retry after a sweep"
                )
            for _ in range(1000):
                token = secrets.token_urlsafe(16)
                if token not in self._records and normalized not in token:
                    break
            else:  # pragma: no cover - 1000 collisions is unreachable in practice
                raise StoreFullError("could not draw a fresh token")
            record = ChallengeRecord(
                token=token,
                salt=salt,
                answer_digest=answer_digest(salt, normalized),
                media_file=media_file,
                spec_json=spec_json,
                prompt_text=prompt_text,
                warning_text=warning_text,
                issued_at=now,
                expires_at=now + self.ttl_seconds,
                attempts_remaining=self.max_attempts,
                state=PENDING,
            )
            self._records[token] = record
            self._journal_write({"event": "issue", "record": record.to_json_dict()})
            return record

    def get(self, token: str) -> ChallengeRecord | None:
        with self._lock:
            return self._records.get(token)

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    # -- lifecycle ---------------------------------------------------------

    def _transition(self, record: ChallengeRecord, state: str) -> None:
        # Callers hold the lock and have checked record.state == PENDING.
        record.state = state
        self._journal_write({"event": "transition", "token": record.token, "state": state})

    def _expire_if_due(self, record: ChallengeRecord, now: float) -> bool:
        if record.state == PENDING and now >= record.expires_at:
            self._transition(record, EXPIRED)
            return True
        return False

    def media_status(self, token: str, now: float | None = None) -> tuple[str, ChallengeRecord | None]:
        """("ok"|"unknown"|"expired", record) for a media fetch.

        Media stays replayable until expiry regardless of verdict.
        """
        with self._lock:
            now = self._clock() if now is None else now
            record = self._records.get(token)
            if record is None:
                return "unknown", None
            self._expire_if_due(record, now)
            if record.state == EXPIRED or now >= record.expires_at:
                return "expired", record
            return "ok", record

    def verify(self, token: str, answer: str, now: float | None = None) -> VerifyResult:
        """Apply one answer to one token, atomically."""
        normalized = normalize_answer(answer, self.ignore_leading_zeros)
        with self._lock:
            now = self._clock() if now is None else now
            record = self._records.get(token)
            if record is None:
                return VerifyResult(status="unknown")
            if record.state in TERMINAL_STATES:
                return VerifyResult(
                    status="terminal",
                    verdict=_FINAL_VERDICT[record.state],
                    attempts_remaining=record.attempts_remaining,
                )
            if self._expire_if_due(record, now):
                return VerifyResult(
                    status="ok",
                    verdict=VERDICT_EXPIRED,
                    attempts_remaining=record.attempts_remaining,
                )
            if digests_equal(record.answer_digest, answer_digest(record.salt, normalized)):
                self._transition(record, PASSED)
                return VerifyResult(
                    status="ok",
                    verdict=VERDICT_PASS,
                    attempts_remaining=record.attempts_remaining,
                )
            record.attempts_remaining -= 1
            self._journal_write(
                {
                    "event": "attempt",
                    "token": record.token,
                    "attempts_remaining": record.attempts_remaining,
                }
            )
            if record.attempts_remaining <= 0:
                self._transition(record, FAILED)
            return VerifyResult(
                status="ok",
                verdict=VERDICT_FAIL,
                attempts_remaining=record.attempts_remaining,
            )

    def expire_sweep(self, now: float | None = None) -> int:
        """Transition every overdue pending record to expired; idempotent."""
        count = 0
        with self._lock:
            now = self._clock() if now is None else now
            for record in self._records.values():
                if self._expire_if_due(record, now):
                    count += 1
        return count
