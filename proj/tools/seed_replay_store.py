#!/usr/bin/env python3
"""Fill a replay store with synthetic responses for `rubeval prompts` output.

Reads the prompts JSONL on stdin. Each response is derived from the prompt
hash, so reseeding the same prompts reproduces the same store.
"""

import argparse
import json
import math
import random
import sys
from pathlib import Path


def tokens(rng, lo, hi, binary):
    if binary:
        p = rng.uniform(0.05, 0.95)
        out = [["YES", math.log(p)], ["NO", math.log(1 - p)]]
    else:
        mu = rng.uniform(lo, hi)
        out = [[str(s), -((s - mu) ** 2) / 0.5] for s in range(lo, hi + 1)]
    out = [[t, round(lp, 6)] for t, lp in out if lp > -12]
    out.sort(key=lambda t: -t[1])
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("store", type=Path)
    ap.add_argument("--min", type=int, default=1)
    ap.add_argument("--max", type=int, default=6)
    ap.add_argument("--binary", action="store_true")
    args = ap.parse_args()
    args.store.mkdir(parents=True, exist_ok=True)

    for line in sys.stdin:
        if not line.strip():
            continue
        p = json.loads(line)
        rng = random.Random(p["prompt_hash"])
        positions = [tokens(rng, args.min, args.max, args.binary) for _ in p["criteria"]]
        resp = {
            "prompt_hash": p["prompt_hash"],
            "prompt_text": p["prompt"],
            "answer_tokens": positions[0],
            "raw_text": "\n".join(pos[0][0] for pos in positions),
        }
        if len(positions) > 1:
            resp["answer_positions"] = positions
        with open(args.store / f"{p['prompt_hash']}.json", "w", encoding="utf-8") as f:
            json.dump(resp, f, indent=1, ensure_ascii=False)
            f.write("\n")


if __name__ == "__main__":
    main()
