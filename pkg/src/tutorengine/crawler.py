"""Depth-limited breadth-first crawler and HTML text extraction.

Seeds sit at depth 0 and traversal is FIFO, so "depth" means link
distance from a seed. Every canonical URL is fetched at most once per
job, robots exclusions are honored, fetches against one host are spaced
by a politeness delay, and stored documents are deduplicated by content
hash. Per-URL failures land in the report and never abort the job.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import urllib.robotparser
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import urljoin, urlsplit, urlunsplit

import requests

USER_AGENT = "tutorengine-crawler/0.1"

_SKIP_TAGS = {"script", "style", "nav", "footer", "head", "noscript", "template"}
_BLOCK_TAGS = {
    "p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul", "ol",
    "table", "tr", "br", "hr", "section", "article", "header", "aside",
    "blockquote", "pre", "form", "main", "figure", "figcaption", "title",
}
_TEXT_CONTENT_TYPES = ("text/html", "text/plain", "application/xhtml")


class InvalidSeedError(ValueError):
    pass


@dataclass(frozen=True)
class CrawlJob:
    seeds: tuple[str, ...]
    subject: str
    max_depth: int = 1
    max_pages: int = 100
    same_host_only: bool = False
    timeout: float = 10.0
    politeness_delay: float = 0.2
    workers: int = 1  # parallel fetchers; frontier order stays deterministic

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.max_pages < 1:
            raise ValueError("max_pages must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class Document:
    id: str
    url: str
    subject: str
    raw_text: str
    fetched_at: str

    @classmethod
    def from_text(cls, url: str, subject: str, raw_text: str,
                  fetched_at: str | None = None) -> "Document":
        return cls(
            id=content_hash(raw_text),
            url=url,
            subject=subject,
            raw_text=raw_text,
            fetched_at=fetched_at or datetime.now(timezone.utc).isoformat(),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "url": self.url,
            "subject": self.subject,
            "raw_text": self.raw_text,
            "fetched_at": self.fetched_at,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Document":
        return cls(
            id=payload["id"],
            url=payload["url"],
            subject=payload["subject"],
            raw_text=payload["raw_text"],
            fetched_at=payload["fetched_at"],
        )


@dataclass
class CrawlReport:
    fetched: int = 0
    skipped: int = 0
    errors: list[dict] = field(default_factory=list)


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


_BLOCK_BREAK = "\x00"  # sentinel so source newlines stay plain whitespace


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag in _BLOCK_TAGS:
            self.parts.append(_BLOCK_BREAK)

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag in _BLOCK_TAGS:
            self.parts.append(_BLOCK_BREAK)

    def handle_data(self, data):
        if self._skip_depth == 0 and data:
            self.parts.append(data)


def extract_text(html: str) -> str:
    """Visible text: skip containers removed, blocks newline-separated."""
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    lines = []
    for chunk in "".join(parser.parts).split(_BLOCK_BREAK):
        collapsed = " ".join(chunk.split())
        if collapsed:
            lines.append(collapsed)
    return "\n".join(lines)


class _LinkExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            for name, value in attrs:
                if name == "href" and value:
                    self.hrefs.append(value)


def extract_links(html: str, base_url: str) -> list[str]:
    parser = _LinkExtractor()
    parser.feed(html)
    parser.close()
    links = []
    for href in parser.hrefs:
        canon = canonicalize(urljoin(base_url, href))
        if canon is not None:
            links.append(canon)
    return links


def canonicalize(url: str) -> str | None:
    """Lowercase scheme/host, strip fragment; None for non-http(s)."""
    parts = urlsplit(url.strip())
    if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
        return None
    return urlunsplit((
        parts.scheme.lower(), parts.netloc.lower(), parts.path or "/",
        parts.query, "",
    ))


class DocumentStore:
    """Content-hash-deduplicated document set, optionally JSONL-backed.

    The on-disk layout is one JSON object per line at corpus/<subject>.jsonl.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.documents: list[Document] = []
        self._ids: set[str] = set()
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._append(Document.from_dict(json.loads(line)))

    def _append(self, doc: Document) -> None:
        self.documents.append(doc)
        self._ids.add(doc.id)

    def add(self, doc: Document) -> bool:
        """Store unless the content hash is already present."""
        if doc.id in self._ids:
            return False
        self._append(doc)
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(doc.to_dict(), sort_keys=True) + "\n")
        return True

    def __len__(self) -> int:
        return len(self.documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._ids


class _RobotsCache:
    def __init__(self, session: requests.Session, timeout: float):
        self.session = session
        self.timeout = timeout
        self._parsers: dict[str, urllib.robotparser.RobotFileParser] = {}

    def allowed(self, url: str) -> bool:
        parts = urlsplit(url)
        origin = f"{parts.scheme}://{parts.netloc}"
        parser = self._parsers.get(origin)
        if parser is None:
            parser = urllib.robotparser.RobotFileParser()
            try:
                resp = self.session.get(
                    origin + "/robots.txt", timeout=self.timeout,
                    headers={"User-Agent": USER_AGENT},
                )
                if resp.status_code == 200:
                    parser.parse(resp.text.splitlines())
                else:
                    parser.allow_all = True
            except requests.RequestException:
                parser.allow_all = True
            self._parsers[origin] = parser
        return parser.can_fetch(USER_AGENT, url)


def _fetch_one(session: requests.Session, url: str, job: CrawlJob,
               last_fetch: dict[str, float], pace_lock: threading.Lock):
    host = urlsplit(url).netloc
    with pace_lock:
        start_at = max(time.monotonic(),
                       last_fetch.get(host, 0.0) + job.politeness_delay)
        last_fetch[host] = start_at
    wait = start_at - time.monotonic()
    if wait > 0:
        time.sleep(wait)
    try:
        resp = session.get(url, timeout=job.timeout,
                           headers={"User-Agent": USER_AGENT})
        resp.raise_for_status()
        return resp, None
    except requests.RequestException as exc:
        return None, exc


def crawl(job: CrawlJob, store: DocumentStore,
          session: requests.Session | None = None) -> CrawlReport:
    """Breadth-first fetch of the seed graph into the store.

    With workers > 1 a batch of frontier URLs (at most one per host, so
    politeness holds) is fetched in parallel; results are processed in
    dequeue order, which keeps link expansion and the stored set
    deterministic.
    """
    seeds = []
    for seed in job.seeds:
        canon = canonicalize(seed)
        if canon is None:
            raise InvalidSeedError(f"invalid seed URL: {seed!r}")
        seeds.append(canon)
    if session is None:
        session = requests.Session()
    report = CrawlReport()
    robots = _RobotsCache(session, job.timeout)
    seed_hosts = {urlsplit(s).netloc for s in seeds}
    frontier: deque[tuple[str, int]] = deque()
    enqueued: set[str] = set()
    seen_paths: set[tuple[str, str]] = set()
    last_fetch: dict[str, float] = {}
    pace_lock = threading.Lock()
    executor = (
        ThreadPoolExecutor(max_workers=job.workers) if job.workers > 1 else None
    )

    for seed in seeds:
        if seed not in enqueued:
            frontier.append((seed, 0))
            enqueued.add(seed)
            seen_paths.add(_host_path(seed))

    try:
        while frontier and report.fetched < job.max_pages:
            batch: list[tuple[str, int]] = []
            batch_hosts: set[str] = set()
            deferred: list[tuple[str, int]] = []
            budget = job.max_pages - report.fetched
            while frontier and len(batch) < min(job.workers, budget):
                url, depth = frontier.popleft()
                if depth > job.max_depth:
                    continue
                if not robots.allowed(url):
                    report.skipped += 1
                    continue
                host = urlsplit(url).netloc
                if host in batch_hosts:
                    deferred.append((url, depth))
                    continue
                batch_hosts.add(host)
                batch.append((url, depth))
            for item in reversed(deferred):
                frontier.appendleft(item)
            if not batch:
                continue
            if executor is not None and len(batch) > 1:
                outcomes = list(executor.map(
                    lambda item: _fetch_one(session, item[0], job,
                                            last_fetch, pace_lock),
                    batch,
                ))
            else:
                outcomes = [
                    _fetch_one(session, url, job, last_fetch, pace_lock)
                    for url, _ in batch
                ]
            for (url, depth), (resp, exc) in zip(batch, outcomes):
                if exc is not None:
                    report.errors.append({"url": url, "error": str(exc)})
                    continue
                content_type = resp.headers.get("Content-Type", "").lower()
                if content_type and not content_type.startswith(_TEXT_CONTENT_TYPES):
                    report.skipped += 1
                    continue
                report.fetched += 1
                text = (
                    extract_text(resp.text) if "html" in content_type
                    else resp.text
                )
                if not store.add(Document.from_text(url, job.subject, text)):
                    report.skipped += 1
                if depth >= job.max_depth or "html" not in content_type:
                    continue
                for link in extract_links(resp.text, url):
                    if link in enqueued:
                        continue
                    link_host = urlsplit(link).netloc
                    if job.same_host_only:
                        if link_host not in seed_hosts:
                            continue
                        hp = _host_path(link)
                        if hp in seen_paths:
                            continue
                        seen_paths.add(hp)
                    frontier.append((link, depth + 1))
                    enqueued.add(link)
    finally:
        if executor is not None:
            executor.shutdown(wait=False)
    return report


def _host_path(url: str) -> tuple[str, str]:
    parts = urlsplit(url)
    return (parts.netloc, parts.path)


def fetch_source(url: str, timeout: float = 10.0,
                 session: requests.Session | None = None) -> str:
    """Depth-0 fetch+extract used when question sources are URLs."""
    if session is None:
        session = requests.Session()
    canon = canonicalize(url)
    if canon is None:
        raise InvalidSeedError(f"invalid source URL: {url!r}")
    resp = session.get(canon, timeout=timeout, headers={"User-Agent": USER_AGENT})
    resp.raise_for_status()
    content_type = resp.headers.get("Content-Type", "").lower()
    if "html" in content_type or not content_type:
        return extract_text(resp.text)
    return resp.text
