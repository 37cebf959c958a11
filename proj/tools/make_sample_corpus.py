#!/usr/bin/env python3
"""Writes the synthetic 300-tweet sample corpus (id,text,label).

Every tweet is made up from word lists below; nothing is scraped. The gold
label is the polarity the template was drawn for.

Usage: make_sample_corpus.py [OUT_CSV] [--seed N] [--count N]
"""
import argparse
import csv
import random

POSITIVE = ["love", "great", "amazing", "happy", "awesome", "wonderful", "excellent", "best",
            "beautiful", "fantastic", "enjoy", "glad", "nice", "perfect", "brilliant", "fun",
            "excited", "proud", "lovely", "good", "thanks", "success", "win", "smile"]
NEGATIVE = ["hate", "terrible", "awful", "sad", "worst", "horrible", "angry", "bad", "disappointed",
            "ugly", "broken", "fail", "boring", "annoying", "stupid", "pain", "lost", "problem",
            "crash", "sick", "upset", "wrong", "hurt", "mess"]
TOPICS = ["chatgpt", "the new model", "this app", "the update", "ai tools", "the chatbot",
          "openai", "my laptop", "the release", "prompt engineering", "the api", "gpt answers"]
NEUTRAL = ["today", "tomorrow", "meeting", "report", "version", "people", "question", "use",
           "company", "news", "week", "data", "article", "video", "office", "plan"]
URLS = ["https://t.co/abc123", "http://example.com/post", "https://news.example.org/a?b=1"]
MENTIONS = ["@openai", "@sam", "@techdaily", "@user42"]
HASHTAGS = ["#ai", "#chatgpt", "#tech", "#AI", "#future"]
POS_EMOJI = ["\U0001F600", "\U0001F60D", "\U0001F44D", "❤️"]
NEG_EMOJI = ["\U0001F620", "\U0001F622", "\U0001F44E"]

POS_TEMPLATES = [
    "I {p} {t}, it is {p2}",
    "{t} is so {p} {e}",
    "really {p} with {t} today",
    "{t} isn't bad at all, quite {p}",
    "sooooo goooood, {t} is {p}",
    "can't stop using {t}, {p} and {p2}",
    "{t} made my {n} {p}!!!",
]
NEG_TEMPLATES = [
    "I {q} {t}, it is {q2}",
    "{t} is so {q} {e}",
    "really {q} with {t} today",
    "{t} isn't good, totally {q}",
    "{t} keeps giving {q} results, {q2}",
    "don't like {t}, {q} {n}",
    "why is {t} this {q}???",
]
NEU_TEMPLATES = [
    "{t} {n} at ten",
    "reading an {n} about {t}",
    "{t} has a new {n}",
    "is {t} available this {n}",
    "posted a {n} on {t}",
    "our {n} uses {t}",
]


def noise(rng, text):
    if rng.random() < 0.3:
        text = rng.choice(MENTIONS) + " " + text
    if rng.random() < 0.3:
        text += " " + rng.choice(URLS)
    if rng.random() < 0.4:
        text += " " + rng.choice(HASHTAGS)
    if rng.random() < 0.15:
        text = text.upper()
    return text


def tweet(rng, label):
    fill = {"t": rng.choice(TOPICS), "n": rng.choice(NEUTRAL)}
    if label == 1:
        tpl = rng.choice(POS_TEMPLATES)
        fill.update(p=rng.choice(POSITIVE), p2=rng.choice(POSITIVE), e=rng.choice(POS_EMOJI))
    elif label == -1:
        tpl = rng.choice(NEG_TEMPLATES)
        fill.update(q=rng.choice(NEGATIVE), q2=rng.choice(NEGATIVE), e=rng.choice(NEG_EMOJI))
    else:
        tpl = rng.choice(NEU_TEMPLATES)
    return noise(rng, tpl.format(**fill))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", nargs="?", default="data/sample_corpus.csv")
    ap.add_argument("--seed", type=int, default=2023)
    ap.add_argument("--count", type=int, default=300)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    labels = [1, 0, -1] * (args.count // 3) + [1, 0, -1][: args.count % 3]
    rng.shuffle(labels)
    seen = set()
    rows = []
    for i, label in enumerate(labels):
        text = tweet(rng, label)
        while text in seen:
            text = tweet(rng, label)
        seen.add(text)
        rows.append([f"t{i + 1:03d}", text, str(label)])
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "text", "label"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
