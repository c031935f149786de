"""LLM gateway: HTTP completion client, transcript record/replay, and
extraction of Cypher from raw model output.

The live backend speaks the single-turn "generate" convention of local model
servers (POST {model, prompt, stream: false, options} -> {"response": ...}).
Every live completion can be recorded into a transcript; a replay backend
answers exclusively from a transcript, keyed by exact (model, prompt) match,
which makes any pipeline run reproducible offline. A replay miss raises: it
never silently falls back to a live call.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field

import requests

from .errors import GatewayError, ReplayMissError, ValidationError

TRANSCRIPT_SCHEMA_VERSION = "1"
ENDPOINT_ENV_VAR = "GRAPHQA_ENDPOINT"
DEFAULT_GENERATE_PATH = "/api/generate"
DEFAULT_TIMEOUT_S = 120.0


@dataclass
class CompletionRequest:
    model_name: str
    prompt: str
    temperature: float = 0.0
    max_tokens: int | None = None
    stop: list[str] | None = None

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")


def request_hash(model_name: str, prompt: str) -> str:
    digest = hashlib.sha256()
    digest.update(model_name.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(prompt.encode("utf-8"))
    return digest.hexdigest()


@dataclass
class TranscriptEntry:
    model_name: str
    prompt: str
    response: str
    timestamp: str = ""

    @property
    def key(self) -> tuple[str, str]:
        return (self.model_name, self.prompt)


class Transcript:
    """Recorded (model, prompt) -> response pairs, stored as JSON lines."""

    def __init__(self, entries: list[TranscriptEntry] | None = None):
        self.entries: list[TranscriptEntry] = list(entries or [])
        self._index: dict[tuple[str, str], str] = {e.key: e.response for e in self.entries}

    def add(self, entry: TranscriptEntry) -> None:
        self.entries.append(entry)
        self._index[entry.key] = entry.response

    def lookup(self, model_name: str, prompt: str) -> str | None:
        return self._index.get((model_name, prompt))

    def __len__(self) -> int:
        return len(self.entries)

    def dumps(self) -> str:
        lines = [json.dumps({"kind": "transcript", "schema_version": TRANSCRIPT_SCHEMA_VERSION})]
        for entry in self.entries:
            lines.append(
                json.dumps(
                    {
                        "request_sha256": request_hash(entry.model_name, entry.prompt),
                        "model": entry.model_name,
                        "prompt": entry.prompt,
                        "response": entry.response,
                        "timestamp": entry.timestamp,
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + "\n"

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "Transcript":
        transcript = cls()
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GatewayError(f"transcript line {lineno}: invalid JSON: {exc.msg}") from exc
            if obj.get("kind") == "transcript":
                if obj.get("schema_version") != TRANSCRIPT_SCHEMA_VERSION:
                    raise GatewayError(f"unsupported transcript schema_version {obj.get('schema_version')!r}")
                continue
            try:
                entry = TranscriptEntry(
                    model_name=obj["model"],
                    prompt=obj["prompt"],
                    response=obj["response"],
                    timestamp=obj.get("timestamp", ""),
                )
            except KeyError as exc:
                raise GatewayError(f"transcript line {lineno}: missing field {exc.args[0]!r}") from exc
            expected = obj.get("request_sha256")
            if expected and expected != request_hash(entry.model_name, entry.prompt):
                raise GatewayError(f"transcript line {lineno}: request hash mismatch")
            transcript.add(entry)
        return transcript

    @classmethod
    def load(cls, path: str) -> "Transcript":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.loads(fh.read())


class LiveBackend:
    """HTTP client for an Ollama-style generate endpoint."""

    def __init__(
        self,
        base_url: str | None = None,
        path: str = DEFAULT_GENERATE_PATH,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        session: requests.Session | None = None,
    ):
        base_url = base_url or os.environ.get(ENDPOINT_ENV_VAR)
        if not base_url:
            raise GatewayError(f"no endpoint URL configured (flag or {ENDPOINT_ENV_VAR})")
        self.url = base_url.rstrip("/") + path
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    def complete(self, request: CompletionRequest) -> str:
        options: dict = {"temperature": request.temperature}
        if request.max_tokens is not None:
            options["num_predict"] = request.max_tokens
        if request.stop:
            options["stop"] = list(request.stop)
        body = {
            "model": request.model_name,
            "prompt": request.prompt,
            "stream": False,
            "options": options,
        }
        try:
            http_response = self._session.post(self.url, json=body, timeout=self.timeout_s)
            http_response.raise_for_status()
            payload = http_response.json()
        except requests.RequestException as exc:
            raise GatewayError(f"completion request failed: {exc}") from exc
        except ValueError as exc:
            raise GatewayError(f"endpoint returned invalid JSON: {exc}") from exc
        if not isinstance(payload, dict) or "response" not in payload:
            raise GatewayError("endpoint response missing 'response' field")
        return str(payload["response"])


class ReplayBackend:
    """Answers completions from a transcript; a miss is an error."""

    def __init__(self, transcript: Transcript):
        self.transcript = transcript

    def complete(self, request: CompletionRequest) -> str:
        response = self.transcript.lookup(request.model_name, request.prompt)
        if response is None:
            raise ReplayMissError(
                f"no recorded response for model {request.model_name!r} "
                f"(request {request_hash(request.model_name, request.prompt)[:12]})"
            )
        return response


class Gateway:
    """Shared completion entry point with optional recording.

    A lock serializes in-flight requests by default (one model at a time on a
    memory-constrained device); pass ``serialize_requests=False`` to allow
    callers to manage concurrency themselves.
    """

    def __init__(self, backend, record_to: Transcript | None = None, serialize_requests: bool = True):
        self.backend = backend
        self.record_to = record_to
        self._lock = threading.Lock() if serialize_requests else None
        self.calls = 0

    def complete(self, request: CompletionRequest) -> str:
        if self._lock is not None:
            with self._lock:
                return self._complete(request)
        return self._complete(request)

    def _complete(self, request: CompletionRequest) -> str:
        self.calls += 1
        response = self.backend.complete(request)
        if self.record_to is not None:
            self.record_to.add(
                TranscriptEntry(model_name=request.model_name, prompt=request.prompt, response=response)
            )
        return response


# --- Cypher extraction -----------------------------------------------------------


@dataclass
class CypherCandidate:
    raw_llm_text: str
    extracted_query: str | None
    extraction_method: str | None = None  # fenced-block | keyword-scan | whole-text

    @property
    def ok(self) -> bool:
        return self.extracted_query is not None


_QUERY_STARTERS = ("MATCH", "RETURN")


def _starts_with_query(text: str) -> bool:
    stripped = text.lstrip()
    return any(
        stripped.startswith(word) and not stripped[len(word) : len(word) + 1].isalnum()
        for word in _QUERY_STARTERS
    )


def _first_fenced_block(text: str) -> str | None:
    start = text.find("```")
    if start < 0:
        return None
    body_start = text.find("\n", start)
    if body_start < 0:
        # One-line fence such as ```MATCH (n) RETURN n```
        body_start = start + 3
        end = text.find("```", body_start)
        return text[body_start:end] if end > body_start else None
    end = text.find("```", body_start)
    if end < 0:
        return text[body_start + 1 :]
    return text[body_start + 1 : end]


def _scan_statement(text: str) -> tuple[str, int] | None:
    """Find the first MATCH/RETURN and take through end of statement.

    The statement ends at a semicolon, a blank line, a closing code fence, or
    the end of the text, whichever comes first. Returns (statement, offset).
    """
    best: int | None = None
    for word in _QUERY_STARTERS:
        idx = text.find(word)
        while idx >= 0:
            before_ok = idx == 0 or not (text[idx - 1].isalnum() or text[idx - 1] == "_")
            after = text[idx + len(word) : idx + len(word) + 1]
            after_ok = not (after.isalnum() or after == "_")
            if before_ok and after_ok:
                if best is None or idx < best:
                    best = idx
                break
            idx = text.find(word, idx + 1)
    if best is None:
        return None
    tail = text[best:]
    cut = len(tail)
    for terminator in (";", "\n\n", "```"):
        pos = tail.find(terminator)
        if pos >= 0:
            cut = min(cut, pos + (1 if terminator == ";" else 0))
    return tail[:cut].strip(), best


def extract_cypher(llm_text: str) -> CypherCandidate:
    """Pull a Cypher query out of raw model output.

    Precedence: first fenced code block, then the first statement starting at
    a MATCH/RETURN keyword, then the whole text when it already is a bare
    query. A candidate always begins with MATCH or RETURN after trimming; if
    none is found the candidate is empty (downstream this grades as a failed
    query, the "nan" database outcome).
    """
    fenced = _first_fenced_block(llm_text)
    if fenced is not None:
        block = fenced.strip()
        # Drop a language tag line such as "cypher".
        first_line, _, rest = block.partition("\n")
        if first_line.strip().lower() in ("cypher", "cql", "sql") and rest.strip():
            block = rest.strip()
        if _starts_with_query(block):
            return CypherCandidate(llm_text, block.rstrip(";").strip(), "fenced-block")
        scanned = _scan_statement(block)
        if scanned is not None:
            return CypherCandidate(llm_text, scanned[0].rstrip(";").strip(), "fenced-block")

    scanned = _scan_statement(llm_text)
    if scanned is not None:
        statement, offset = scanned
        method = "whole-text" if llm_text.strip() == statement else "keyword-scan"
        return CypherCandidate(llm_text, statement.rstrip(";").strip(), method)

    return CypherCandidate(llm_text, None, None)
