#!/usr/bin/env python3
"""Generate the synthetic rating fixtures under fixtures/.

Output is a pure function of the seeds below. Rerunning overwrites
records.jsonl and config.json; goldens are produced separately by
`rubeval run`.
"""

import argparse
import json
import math
import random
from pathlib import Path

AES_CRITERIA = ["ideas", "organization", "style", "conventions"]


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


def record(item, rater, kind, domain, condition, criterion, value=None, tokens=None):
    r = {
        "schema_version": 1,
        "item_id": item,
        "rater_id": rater,
        "rater_kind": kind,
        "domain": domain,
        "condition": condition,
        "criterion": criterion,
    }
    if value is not None:
        r["value"] = value
    if tokens is not None:
        r["answer_tokens"] = tokens
    return r


def score_tokens(mu, lo, hi, width):
    """Top-logprob list peaked at mu, most likely first."""
    toks = []
    for s in range(lo, hi + 1):
        lp = -((s - mu) ** 2) / (2 * width * width)
        if lp > -12:
            toks.append((str(s), round(lp, 6)))
    toks.sort(key=lambda t: -t[1])
    return [list(t) for t in toks]


def yes_no_tokens(p_yes):
    p_yes = clamp(p_yes, 0.01, 0.99)
    toks = [["YES", round(math.log(p_yes), 6)], ["NO", round(math.log(1 - p_yes), 6)]]
    toks.sort(key=lambda t: -t[1])
    return toks


def make_aes(out: Path, seed: int, n_items: int):
    rng = random.Random(seed)
    rows = []
    for i in range(n_items):
        item = f"essay{i:03d}"
        truth = rng.uniform(1.0, 6.0)
        crit = {c: truth + rng.gauss(0, 0.6) for c in AES_CRITERIA}

        for h in ("h1", "h2"):
            rows.append(record(item, h, "human", "AES", "holistic/full", "OVERALL",
                               clamp(round(truth + rng.gauss(0, 0.35)), 1, 6)))
        for c in AES_CRITERIA:
            rows.append(record(item, "h1", "human", "AES", "analytic/separate/0ex", c,
                               clamp(round(crit[c] + rng.gauss(0, 0.3)), 1, 6)))

        for cond, noise in (("holistic/full", 0.3), ("holistic/3ex", 1.6)):
            mu = clamp(truth + rng.gauss(0, noise), 1, 6)
            rows.append(record(item, "judge", "autorater", "AES", cond, "OVERALL",
                               tokens=score_tokens(mu, 1, 6, 0.45)))
        for cond, noise in (("analytic/separate/3ex/edited", 0.2), ("analytic/separate/0ex", 0.9),
                            ("analytic/batch/0ex", 2.2)):
            for c in AES_CRITERIA:
                mu = clamp(crit[c] + rng.gauss(0, noise), 1, 6)
                rows.append(record(item, "judge", "autorater", "AES", cond, c,
                                   tokens=score_tokens(mu, 1, 6, 0.45)))

    human_h = {"rater": "human", "condition": "holistic/full"}
    human_a = {"rater": "human", "condition": "analytic/separate/0ex"}

    def auto(cond):
        return {"rater": "autorater", "condition": cond}

    config = {
        "title": "Synthetic essay scoring agreement",
        "domain": "AES",
        "datasets": ["records.jsonl"],
        "scales": {"holistic": {"min": 1, "max": 6}, "analytic": {"min": 1, "max": 6}},
        "criteria": AES_CRITERIA,
        "consolidation": {"human_holistic": "average", "human_analytic": "average",
                          "autorater_holistic": "average", "autorater_analytic": "average"},
        "seed": 42,
        "resamples": 1000,
        "tables": [
            {
                "name": "rater_holistic",
                "title": "Human vs autorater, holistic",
                "kind": "DeltaRater",
                "columns": [
                    {"label": "full", "a": human_h, "b": auto("holistic/full")},
                    {"label": "3ex", "a": human_h, "b": auto("holistic/3ex")},
                ],
                "significance": [{"type": "pair", "columns": ["full", "3ex"]}],
            },
            {
                "name": "rater_analytic",
                "title": "Human vs autorater, analytic",
                "kind": "DeltaRater",
                "columns": [
                    {"label": "separate", "a": human_a, "b": auto("analytic/separate/0ex")},
                    {"label": "batch", "a": human_a, "b": auto("analytic/batch/0ex")},
                    {"label": "edited", "a": human_a, "b": auto("analytic/separate/3ex/edited")},
                ],
                "significance": [{"type": "triple", "separate": "separate", "batch": "batch",
                                  "edited": "edited"}],
            },
            {
                "name": "rubric",
                "title": "Holistic vs analytic rubric",
                "kind": "DeltaRubric",
                "columns": [
                    {"label": "human", "a": human_h, "b": human_a},
                    {"label": "autorater", "a": auto("holistic/full"), "b": auto("analytic/separate/3ex/edited")},
                ],
            },
            {
                "name": "rater_rubric",
                "title": "Human holistic vs autorater analytic",
                "kind": "DeltaRaterRubric",
                "columns": [
                    {"label": "separate", "a": human_h, "b": auto("analytic/separate/0ex")},
                    {"label": "edited", "a": human_h, "b": auto("analytic/separate/3ex/edited")},
                ],
            },
        ],
    }
    write(out, rows, config)


def make_if(out: Path, seed: int, n_items: int, n_questions: int):
    rng = random.Random(seed)
    rows = []
    questions = [f"q{k + 1}" for k in range(n_questions)]
    for i in range(n_items):
        item = f"resp{i:03d}"
        quality = rng.random()
        follows = {q: rng.random() < quality for q in questions}
        ratio = sum(follows.values()) / n_questions
        # Strata: about a quarter unanimous, half with one dissent, the rest split three ways.
        base = round(1 + 4 * ratio)
        mode = rng.random()
        if mode < 0.25:
            holistic = [base, base, base]
        elif mode < 0.75:
            other = base + 1 if base < 5 else base - 1
            holistic = [base, base, other]
            rng.shuffle(holistic)
        else:
            lo = clamp(base - 1, 1, 3)
            holistic = [lo, lo + 1, lo + 2]
            rng.shuffle(holistic)
        for r, h in zip(("r1", "r2", "r3"), holistic):
            rows.append(record(item, r, "human", "IF", "holistic/0ex", "OVERALL", h))
            for q in questions:
                flip = rng.random() < 0.1
                rows.append(record(item, r, "human", "IF", "analytic/separate/0ex", q,
                                   1 if follows[q] != flip else 0))

        mu = clamp(1 + 4 * ratio + rng.gauss(0, 0.5), 1, 5)
        rows.append(record(item, "judge", "autorater", "IF", "holistic/0ex", "OVERALL",
                           tokens=score_tokens(mu, 1, 5, 0.5)))
        for cond, sharp in (("analytic/separate/0ex", 0.85), ("analytic/batch/0ex", 0.7)):
            for q in questions:
                p = sharp if follows[q] else 1 - sharp
                p = clamp(p + rng.gauss(0, 0.1), 0.02, 0.98)
                rows.append(record(item, "judge", "autorater", "IF", cond, q, tokens=yes_no_tokens(p)))

    human_h = {"rater": "human", "condition": "holistic/0ex"}
    human_a = {"rater": "human", "condition": "analytic/separate/0ex"}

    def auto(cond):
        return {"rater": "autorater", "condition": cond}

    config = {
        "title": "Synthetic instruction following agreement",
        "domain": "IF",
        "datasets": ["records.jsonl"],
        "scales": {"holistic": {"min": 1, "max": 5}, "analytic": {"kind": "binary"}},
        "consolidation": {"human_holistic": "average", "human_analytic": "majority",
                          "autorater_holistic": "average", "autorater_analytic": "average"},
        "seed": 42,
        "resamples": 1000,
        "stratify": {"rater": "human", "condition": "holistic/0ex"},
        "tables": [
            {
                "name": "rater",
                "title": "Human vs autorater",
                "kind": "DeltaRater",
                "columns": [
                    {"label": "holistic", "a": human_h, "b": auto("holistic/0ex")},
                    {"label": "separate", "a": human_a, "b": auto("analytic/separate/0ex")},
                    {"label": "batch", "a": human_a, "b": auto("analytic/batch/0ex")},
                ],
                "significance": [{"type": "pair", "columns": ["separate", "batch"]}],
            },
            {
                "name": "rater_rubric",
                "title": "Human holistic vs autorater analytic",
                "kind": "DeltaRaterRubric",
                "columns": [
                    {"label": "separate", "a": human_h, "b": auto("analytic/separate/0ex")},
                ],
            },
        ],
    }
    write(out, rows, config)


def write(out: Path, rows, config):
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.jsonl", "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open(out / "config.json", "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, ensure_ascii=False)
        f.write("\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "fixtures")
    args = ap.parse_args()
    make_aes(args.out / "aes", seed=20240601, n_items=120)
    make_if(args.out / "if", seed=20240602, n_items=150, n_questions=5)


if __name__ == "__main__":
    main()
