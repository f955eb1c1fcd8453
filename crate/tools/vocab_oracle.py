"""Independent vocabulary for the synthetic corpus.

Tokenizes, filters and stems every record with NLTK's Porter stemmer
(original algorithm) and writes the vocabulary TSV the Rust pipeline is
expected to produce at the default thresholds.

    python3 tools/vocab_oracle.py crates/core > crates/core/fixtures/golden/vocab.tsv
"""

import json
import math
import sys
from collections import Counter
from pathlib import Path

from nltk.stem.porter import PorterStemmer

MIN_DF = 5
MAX_DF_RATIO = 0.5


def word_list(path):
    words = set()
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return words


def strip_edges(s, extra=""):
    ok = lambda c: c.isalnum() or c in extra
    i, j = 0, len(s)
    while i < j and not ok(s[i]):
        i += 1
    while j > i and not ok(s[j - 1]):
        j -= 1
    return s[i:j]


def tokens(text):
    for raw in text.split():
        low = raw.lower().replace("’", "'").replace("‘", "'")
        if "http://" in low or "https://" in low:
            continue
        core = strip_edges(low, "#@")
        if core.startswith("t.co/") or core.startswith("http") or "@" in core:
            continue
        body = strip_edges(core.replace("#", ""))
        if body and not body.startswith("http"):
            yield body


def main():
    root = Path(sys.argv[1])
    stop = word_list(root / "data" / "stoplist.txt")
    domain = word_list(root / "data" / "domain_terms.txt")
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    df = Counter()
    n = 0
    for line in (root / "fixtures" / "synthetic_corpus.jsonl").read_text().splitlines():
        rec = json.loads(line)
        terms = {stemmer.stem(t) for t in tokens(rec["text"]) if t not in stop and t not in domain}
        df.update(terms)
        n += 1
    kept = [(t, d) for t, d in df.items() if d >= MIN_DF and d / n <= MAX_DF_RATIO]
    kept.sort(key=lambda x: (-x[1], x[0]))
    out = [f"# n_docs={n}", "term\tid\tdf\tidf"]
    for i, (t, d) in enumerate(kept):
        idf = 0.0 if d == n else math.log(n / d)
        out.append(f"{t}\t{i}\t{d}\t{idf:.6f}")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
