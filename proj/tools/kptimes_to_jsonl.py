#!/usr/bin/env python3
"""Convert KPTimes-style records to graphite JSONL.

Accepts JSON lines with a "title" and keyphrases in either a "keyword" string
separated by ';' or a list field ("keyphrases" or "keywords").

    kptimes_to_jsonl.py KPTimes.train.jsonl > train.jsonl
"""
import argparse
import json
import sys


def keyphrases(record):
    for field in ("keyphrases", "keywords"):
        if isinstance(record.get(field), list):
            return [k for k in record[field] if isinstance(k, str)]
    value = record.get("keyword", "")
    return [k.strip() for k in value.split(";") if k.strip()] if isinstance(value, str) else []


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input", type=argparse.FileType("r", encoding="utf-8"))
    args = parser.parse_args()
    written = skipped = 0
    for line in args.input:
        if not line.strip():
            continue
        record = json.loads(line)
        title = record.get("title")
        labels = keyphrases(record)
        if not isinstance(title, str) or not title.strip() or not labels:
            skipped += 1
            continue
        sys.stdout.write(json.dumps({"title": title, "keyphrases": labels}, ensure_ascii=False) + "\n")
        written += 1
    print(f"wrote {written} records, skipped {skipped}", file=sys.stderr)


if __name__ == "__main__":
    main()
