"""Reference stems for the Porter stemmer tests.

Collects every lowercase word of three or more letters from the Python
standard library sources and stems it with NLTK's Porter stemmer in
original-algorithm mode. The third column stems the stem again; Porter
is not idempotent, so it sometimes differs from the second.

    python3 tools/stem_oracle.py > crates/core/fixtures/stems.tsv
"""

import glob
import re
import sys
import sysconfig

from nltk.stem.porter import PorterStemmer


def main():
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    words = set()
    for path in sorted(glob.glob(sysconfig.get_paths()["stdlib"] + "/*.py")):
        with open(path, encoding="utf-8", errors="ignore") as f:
            words.update(re.findall(r"\b[a-z]{3,}\b", f.read()))
    out = sys.stdout
    out.write("# word\tstem\trestem\n")
    for w in sorted(words):
        s = stemmer.stem(w)
        out.write(f"{w}\t{s}\t{stemmer.stem(s)}\n")


if __name__ == "__main__":
    main()
