"""Regenerate src/bagorder/data/toy.txt from a tiny seeded grammar."""

import random
import sys
from pathlib import Path

NOUNS = ["the cat", "the dog", "a bird", "mary", "john", "the old man", "a child"]
INTRANSITIVE = ["sleeps", "runs", "sings", "waits"]
TRANSITIVE = ["sees", "likes", "chases", "feeds"]
PLACES = ["in the park", "on the mat", "at home", "by the river"]
ADVERBS = ["quietly", "today", "again"]


def sentence(rng):
    subj = rng.choice(NOUNS)
    form = rng.randrange(5)
    if form == 0:
        words = [subj, rng.choice(INTRANSITIVE)]
    elif form == 1:
        words = [subj, rng.choice(TRANSITIVE), rng.choice(NOUNS)]
    elif form == 2:
        words = [subj, rng.choice(INTRANSITIVE), rng.choice(PLACES)]
    elif form == 3:
        words = [subj, rng.choice(TRANSITIVE), rng.choice(NOUNS), rng.choice(ADVERBS)]
    else:
        words = [subj, rng.choice(INTRANSITIVE), rng.choice(ADVERBS)]
    return " ".join(words)


def main(out, n=200, seed=7, max_len=8):
    rng = random.Random(seed)
    lines = []
    while len(lines) < n:
        s = sentence(rng)
        if len(s.split()) <= max_len:
            lines.append(s)
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/bagorder/data/toy.txt")
