"""Crawling a subject corpus and building its tf-idf index
==========================================================

Serves a tiny site from this process, spiders it breadth-first to a
bounded depth, then builds the per-subject document-frequency index that
supplies idf weights to concept scoring.
"""

import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import requests

from tutorengine.crawler import CrawlJob, DocumentStore, crawl
from tutorengine.textprep import preprocess
from tutorengine.tfidf import build_index

PAGES = {
    "/": "<h1>American Revolution</h1>"
         '<p>Overview of the war. <a href="/crossing">The crossing</a> '
         '<a href="/forge">Valley Forge</a></p>',
    "/crossing": "<h1>Delaware Crossing</h1>"
                 "<p>George Washington crossed the Delaware River in 1776 "
                 "before the battle of Trenton.</p>",
    "/forge": "<h1>Valley Forge</h1>"
              "<p>The continental army endured the winter at Valley Forge.</p>",
}


class Handler(BaseHTTPRequestHandler):
    def do_GET(self):
        body = PAGES.get(self.path, "").encode()
        self.send_response(200 if body else 404)
        self.send_header("Content-Type", "text/html")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"

# crawl: seeds at depth 0, every unique page stored once, hash-deduplicated
session = requests.Session()
session.trust_env = False
store = DocumentStore()  # pass a path to persist corpus/<subject>.jsonl
job = CrawlJob(seeds=(base + "/",), subject="demo-history",
               max_depth=1, max_pages=10, politeness_delay=0.0)
report = crawl(job, store, session=session)
print(f"fetched={report.fetched} skipped={report.skipped} errors={len(report.errors)}")
for doc in store.documents:
    print(f"  {doc.id[:12]}  {doc.url.replace(base, '')!r:14} {doc.raw_text[:44]!r}")

# index: df counts stems per document, idf favours rare terms
tokens = [preprocess(d.raw_text).content_stems() for d in store.documents]
index = build_index("demo-history", tokens)
print(f"\nindex: {index.n_docs} docs, {index.vocab_size} stems")
for term in ("washington", "armi", "winter", "war", "unseen"):
    print(f"  idf({term:<10}) = {index.idf(term):.4f}  (df={index.df.get(term, 0)})")

server.shutdown()
