#!/usr/bin/env python3
"""Regenerates the derived asset files under data/assets/.

Inputs are the unpacked wheels of three permissively licensed packages:
  emoji 2.16.0          (BSD)      -> emoji.tsv
  vaderSentiment 3.3.2  (MIT)      -> lexicon.tsv (subset, rescaled)
  english-words 2.0.2   (MIT; web2 + gcide word lists) -> dictionary.txt
wordfreq 3.1.1 (large_en) is used only to rank candidate words; none of its
data is shipped.

Usage: build_assets.py WHEEL_DIR OUT_DIR
"""
import gzip
import re
import sys
from pathlib import Path


def load_rank(wheel_dir):
    import msgpack
    path = wheel_dir / "wordfreq" / "data" / "large_en.msgpack.gz"
    buckets = msgpack.load(gzip.open(path, "rb"), raw=False, strict_map_key=False)
    rank = {}
    for bucket in buckets[1:]:
        for w in bucket:
            rank.setdefault(w, len(rank))
    return rank


def alias(name):
    name = name.strip(":").lower()
    name = re.sub(r"[^a-z]+", "_", name).strip("_")
    return re.sub(r"_+", "_", name)


def build_emoji(wheel_dir, out):
    sys.path.insert(0, str(wheel_dir))
    import emoji
    rows = []
    for seq, info in emoji.EMOJI_DATA.items():
        a = alias(info["en"])
        if a:
            rows.append((seq, a))
    rows.sort(key=lambda r: [ord(c) for c in r[0]])
    with open(out / "emoji.tsv", "w", encoding="utf-8") as f:
        f.write("# Emoji alias table (trabsa_lab v1), derived from emoji 2.16.0 (BSD).\n")
        f.write("# codepoint-sequence<TAB>alias; aliases normalized to [a-z_].\n")
        for seq, a in rows:
            f.write(f"{seq}\t{a}\n")


def build_lexicon(wheel_dir, out, rank):
    rows = []
    for line in open(wheel_dir / "vaderSentiment" / "vader_lexicon.txt", encoding="utf-8"):
        parts = line.rstrip("\n").split("\t")
        tok, val = parts[0], float(parts[1])
        if re.fullmatch(r"[a-z]{2,}", tok):
            rows.append((rank.get(tok, 10**9), tok, val))
    rows.sort()
    rows = sorted(rows[:3000], key=lambda r: r[1])
    boosters_up = ("absolutely amazingly awfully completely considerably decidedly deeply enormously "
                   "entirely especially exceptionally extremely fabulously flipping fully greatly hella "
                   "highly hugely incredibly intensely majorly more most particularly purely quite really "
                   "remarkably so substantially thoroughly totally tremendously uber unbelievably "
                   "unusually utterly very").split()
    boosters_down = ("almost barely hardly just enough kinda kindof less little marginally occasionally "
                     "partly scarcely slightly somewhat sorta").split()
    negations = "not no nor never none nobody nothing neither nowhere cannot without".split()
    with open(out / "lexicon.tsv", "w", encoding="utf-8") as f:
        f.write("# Demonstration polarity lexicon (trabsa_lab v1).\n")
        f.write("# Entries: 3000 most frequent alphabetic tokens of the vaderSentiment 3.3.2 lexicon (MIT).\n")
        f.write("# polarity = valence / 4; pos = max(polarity, 0); neg = max(-polarity, 0).\n")
        f.write("[entries]\n")
        for _, tok, val in rows:
            p = round(val / 4.0, 4)
            f.write(f"{tok}\t{p:.4f}\t{max(p, 0.0):.4f}\t{max(-p, 0.0):.4f}\n")
        f.write("[boosters]\n")
        for b in sorted(set(boosters_up)):
            f.write(f"{b}\t0.293\n")
        for b in sorted(set(boosters_down)):
            f.write(f"{b}\t-0.293\n")
        f.write("[negations]\n")
        for n in negations:
            f.write(n + "\n")
    return [r[1] for r in rows]


def build_dictionary(wheel_dir, out, rank, extra):
    sys.path.insert(0, str(wheel_dir))
    import english_words
    words = english_words.get_english_words_set(["web2", "gcide"], alpha=True, lower=True)
    cand = sorted((rank[w], w) for w in words if w in rank and 1 <= len(w) <= 15)
    chosen = {w for _, w in cand[:25000]}
    chosen.update(extra)
    for line in open(out / "stopwords.txt", encoding="utf-8"):
        if line.strip() and not line.startswith("#"):
            chosen.add(line.strip())
    with open(out / "dictionary.txt", "w", encoding="utf-8") as f:
        f.write("# Repeat-collapse dictionary (trabsa_lab v1): ~25k frequent words from the\n")
        f.write("# web2 + gcide lists of english-words 2.0.2 (MIT), ranked by wordfreq 3.1.1.\n")
        for w in sorted(chosen):
            f.write(w + "\n")


def main():
    wheel_dir, out = Path(sys.argv[1]), Path(sys.argv[2])
    rank = load_rank(wheel_dir)
    build_emoji(wheel_dir, out)
    lex_tokens = build_lexicon(wheel_dir, out, rank)
    build_dictionary(wheel_dir, out, rank, lex_tokens)


if __name__ == "__main__":
    main()
