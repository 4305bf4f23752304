"""Prompt construction and chat-completion querying with a replay cache.

One fixed example sentence of length 4 to 7 is rendered into a
single-shot prompt per target sentence.  Raw responses are cached in an
append-only JSONL file keyed by (model, run id, sentence ordinal), so a
finished run can be re-evaluated offline with zero network traffic.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field

import numpy as np
import requests

from .conllu import DepTree, Sentence, Treebank

EXAMPLE_MIN_LEN = 4
EXAMPLE_MAX_LEN = 7

RETRYABLE_STATUSES = frozenset({429, 500, 502, 503, 504})


class TransportError(Exception):
    """All retry attempts failed."""


class EndpointError(Exception):
    """Non-retryable HTTP response."""

    def __init__(self, status: int, body: str):
        super().__init__(f"endpoint returned {status}: {body[:200]}")
        self.status = status
        self.body = body


def pick_example(treebank: Treebank, rng: np.random.Generator) -> tuple[Sentence, DepTree]:
    """Uniform choice among sentences of length 4 to 7."""
    pool = [
        (sent, tree)
        for sent, tree in treebank.sentences
        if EXAMPLE_MIN_LEN <= sent.n <= EXAMPLE_MAX_LEN
    ]
    if not pool:
        raise ValueError(
            f"{treebank.source_id}: no sentence of length "
            f"{EXAMPLE_MIN_LEN}..{EXAMPLE_MAX_LEN} to use as the prompt example"
        )
    return pool[int(rng.integers(len(pool)))]


def _bracketed(sent: Sentence) -> str:
    # tokens joined by single spaces, wrapped verbatim (no escaping)
    return "<" + " ".join(sent.forms) + ">"


def build_prompt(example: tuple[Sentence, DepTree], target: Sentence) -> str:
    """Render the one-example prompt.

    The example is shown as ten-column rows with ID, FORM, HEAD, and
    DEPREL filled in and underscores elsewhere.
    """
    ex_sent, ex_tree = example
    lines = [
        f"In dependency parsing the CoNLL format for the sentence {_bracketed(ex_sent)} is:"
    ]
    for tok, head in zip(ex_sent.tokens, ex_tree.heads):
        deprel = tok.deprel if tok.deprel else "_"
        lines.append(
            "\t".join(
                (str(tok.id), tok.form, "_", "_", "_", "_", str(head), deprel, "_", "_")
            )
        )
    lines.append(
        f"Now return the CoNLL format for the sentence: {_bracketed(target)}"
    )
    return "\n".join(lines)


@dataclass(frozen=True)
class PromptSpec:
    """A fully rendered prompt plus the pieces it came from."""

    example: tuple[Sentence, DepTree]
    target: Sentence
    rendered: str

    def __post_init__(self):
        n = self.example[0].n
        if not EXAMPLE_MIN_LEN <= n <= EXAMPLE_MAX_LEN:
            raise ValueError(f"example sentence length {n} outside "
                             f"[{EXAMPLE_MIN_LEN}, {EXAMPLE_MAX_LEN}]")

    @classmethod
    def make(cls, example: tuple[Sentence, DepTree], target: Sentence) -> "PromptSpec":
        return cls(example=example, target=target, rendered=build_prompt(example, target))


@dataclass(frozen=True)
class RetryPolicy:
    attempts: int = 5
    base_delay: float = 0.5
    max_delay: float = 8.0

    def delay(self, attempt: int) -> float:
        return min(self.max_delay, self.base_delay * (2 ** attempt))


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model: str
    api_key_env: str = "LLM_API_KEY"
    temperature: float = 0.0
    timeout: float = 60.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)

    def max_tokens(self, target_len: int) -> int:
        # headroom for ten-column rows plus chatter around the table
        return 16 * target_len + 256


@dataclass(frozen=True)
class RunRecord:
    """One cached exchange; exactly one per (model, run, sentence)."""

    model: str
    endpoint: str
    run_id: str
    ordinal: int
    prompt: str
    response: str
    timestamp: float
    temperature: float
    max_tokens: int

    def key(self) -> tuple[str, str, int]:
        return (self.model, self.run_id, self.ordinal)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls(**json.loads(line))


class ResponseCache:
    """Append-only JSONL store; the last record for a key wins."""

    def __init__(self, path: str):
        self.path = path
        self._records: dict[tuple[str, str, int], RunRecord] = {}
        self._lock = threading.Lock()
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rec = RunRecord.from_json(line)
                        self._records[rec.key()] = rec

    def __len__(self) -> int:
        return len(self._records)

    def get(self, model: str, run_id: str, ordinal: int) -> RunRecord | None:
        return self._records.get((model, run_id, ordinal))

    def put(self, record: RunRecord) -> None:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
            self._records[record.key()] = record


class CompletionClient:
    """Chat-completion caller with bounded retries and the replay cache."""

    def __init__(
        self,
        config: EndpointConfig,
        cache: ResponseCache,
        run_id: str,
        sleep=time.sleep,
    ):
        self.config = config
        self.cache = cache
        self.run_id = run_id
        self._sleep = sleep
        self.network_calls = 0

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.config.api_key_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _post_once(self, prompt: str, max_tokens: int) -> str:
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        self.network_calls += 1
        resp = requests.post(
            url,
            json={
                "model": self.config.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": self.config.temperature,
                "max_tokens": max_tokens,
            },
            headers=self._headers(),
            timeout=self.config.timeout,
        )
        if resp.status_code in RETRYABLE_STATUSES:
            raise _Transient(f"status {resp.status_code}")
        if resp.status_code != 200:
            raise EndpointError(resp.status_code, resp.text)
        return resp.json()["choices"][0]["message"]["content"]

    def query(self, prompt: str, ordinal: int, target_len: int) -> str:
        """Return the assistant text for one sentence, cached."""
        hit = self.cache.get(self.config.model, self.run_id, ordinal)
        if hit is not None:
            return hit.response
        max_tokens = self.config.max_tokens(target_len)
        last_error: Exception | None = None
        for attempt in range(self.config.retry.attempts):
            if attempt:
                self._sleep(self.config.retry.delay(attempt - 1))
            try:
                text = self._post_once(prompt, max_tokens)
                break
            except _Transient as err:
                last_error = err
            except (requests.ConnectionError, requests.Timeout) as err:
                last_error = err
        else:
            raise TransportError(
                f"{self.config.model}: sentence {ordinal}: "
                f"{self.config.retry.attempts} attempts failed ({last_error})"
            )
        self.cache.put(
            RunRecord(
                model=self.config.model,
                endpoint=self.config.base_url,
                run_id=self.run_id,
                ordinal=ordinal,
                prompt=prompt,
                response=text,
                timestamp=time.time(),
                temperature=self.config.temperature,
                max_tokens=max_tokens,
            )
        )
        return text


class _Transient(Exception):
    pass
