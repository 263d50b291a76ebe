#!/usr/bin/env python3
"""Regenerates the synthetic English corpus under data/.

The toy n-gram backend needs a training corpus and a pool of held-out
"human" reference texts. Shipping real news datasets is not an option
(licensing), so we synthesize template-based English prose instead:
function-word skeletons give the n-gram model predictable transitions,
content slots give it branching. Held-out texts draw from extra word
banks and templates the training side never sees, so they score like
out-of-distribution text under the trained model.

Usage: python3 scripts/make_corpus.py [--out data/]
Deterministic: fixed seed, stable iteration order.
"""

import argparse
import json
import random
from pathlib import Path

PEOPLE = [
    "engineer", "gardener", "teacher", "sailor", "baker", "carpenter",
    "librarian", "merchant", "farmer", "painter", "weaver", "clerk",
    "surveyor", "shepherd", "printer", "mason", "cartographer", "cook",
    "fisherman", "botanist", "archivist", "tailor", "miller", "glassblower",
]
PEOPLE_EXTRA = ["astronomer", "bookbinder", "innkeeper", "locksmith",
                "potter", "saddler", "chandler", "cooper"]

PLACES = [
    "harbor", "village", "orchard", "workshop", "library", "market",
    "station", "bridge", "garden", "mill", "quarry", "lighthouse",
    "courtyard", "granary", "meadow", "canal", "observatory", "archive",
    "foundry", "square",
]
PLACES_EXTRA = ["estuary", "cloister", "terrace", "boatyard", "vineyard",
                "causeway", "depot", "arcade"]

OBJECTS = [
    "lantern", "ledger", "telescope", "basket", "compass", "manuscript",
    "barometer", "kettle", "chisel", "atlas", "spindle", "bellows",
    "sextant", "inkwell", "scaffold", "pulley", "hourglass", "anvil",
    "crate", "banner", "loom", "satchel", "beacon", "charter",
]
OBJECTS_EXTRA = ["astrolabe", "gazette", "trowel", "flask", "pennant",
                 "stencil", "gimlet", "almanac"]

ADJECTIVES = [
    "quiet", "narrow", "ancient", "bright", "heavy", "careful", "distant",
    "steady", "modest", "crooked", "patient", "faded", "sturdy", "clever",
    "hollow", "gentle", "weathered", "spare", "orderly", "restless",
    "polished", "uneven", "brisk", "solemn",
]
ADJECTIVES_EXTRA = ["austere", "limber", "pallid", "genial", "stark",
                    "supple", "wry", "candid"]

VERBS = [
    "repaired", "measured", "carried", "sketched", "inspected", "sorted",
    "balanced", "recorded", "polished", "assembled", "unloaded", "traded",
    "catalogued", "mended", "weighed", "stacked", "delivered", "examined",
    "gathered", "restored",
]
VERBS_EXTRA = ["appraised", "ferried", "tallied", "burnished", "collated",
               "rigged", "glazed", "threshed"]

ABSTRACT = [
    "patience", "rhythm", "balance", "routine", "caution", "precision",
    "habit", "judgment", "effort", "order", "practice", "attention",
    "economy", "skill", "timing", "discipline",
]
ABSTRACT_EXTRA = ["candor", "thrift", "poise", "vigor", "tact", "nerve"]

OPENERS = [
    "Before dawn", "After the storm", "By late afternoon", "In early spring",
    "Near the end of the season", "On market days", "During the long winter",
    "At first light", "Toward evening", "In the dry months",
    "Once the frost lifted", "When the tide turned",
]
OPENERS_EXTRA = ["Past midsummer", "Under a waning moon", "Come harvest",
                 "At the turn of the year"]

TEMPLATES = [
    "The {p} {v} the {a} {o} near the {pl}.",
    "{op}, the {p} walked to the {pl} and {v} a {a} {o}.",
    "Every morning the {p} {v} the {o} beside the old {pl}.",
    "The {a} {o} stayed in the {pl} until the {p} returned.",
    "{op}, a {a} {p} {v} two {o2}s along the {pl} road.",
    "With great {ab}, the {p} {v} the {o} and left the {pl}.",
    "The {p} kept a {a} {o} in the corner of the {pl}.",
    "Neighbors said the {p} {v} the {pl} gate with unusual {ab}.",
    "{op}, the {pl} was quiet, and the {p} {v} the {a} {o} alone.",
    "A {a} wind crossed the {pl} while the {p} {v} the {o}.",
    "The {p} and the {p2} {v} the {o} before the rain reached the {pl}.",
    "It took {ab} to move the {a} {o} from the {pl} to the {pl2}.",
    "The {p} {v} the {o}, then carried it past the {a} {pl}.",
    "Records from the {pl} show the {p} {v} the {o} twice that year.",
    "{op}, the {p} traded a {a} {o} for a {a2} {o2} at the {pl}.",
    "Nobody at the {pl} remembered why the {p} {v} the {a} {o}.",
]
TEMPLATES_EXTRA = [
    "Against all advice, the {p} {v} the {a} {o} inside the {pl}.",
    "The {pl} ledger notes that a {p} {v} one {a} {o} for the {p2}.",
    "Half the {pl} turned out to watch the {p} as the {o} was {v}.",
]


def pick(rng, bank, extra, extra_prob):
    if extra and rng.random() < extra_prob:
        return rng.choice(extra)
    return rng.choice(bank)


def sentence(rng, extra_prob=0.0, extra_templates=False):
    pool = TEMPLATES + (TEMPLATES_EXTRA if extra_templates else [])
    t = rng.choice(pool)
    return t.format(
        p=pick(rng, PEOPLE, PEOPLE_EXTRA, extra_prob),
        p2=pick(rng, PEOPLE, PEOPLE_EXTRA, extra_prob),
        pl=pick(rng, PLACES, PLACES_EXTRA, extra_prob),
        pl2=pick(rng, PLACES, PLACES_EXTRA, extra_prob),
        o=pick(rng, OBJECTS, OBJECTS_EXTRA, extra_prob),
        o2=pick(rng, OBJECTS, OBJECTS_EXTRA, extra_prob),
        a=pick(rng, ADJECTIVES, ADJECTIVES_EXTRA, extra_prob),
        a2=pick(rng, ADJECTIVES, ADJECTIVES_EXTRA, extra_prob),
        v=pick(rng, VERBS, VERBS_EXTRA, extra_prob),
        ab=pick(rng, ABSTRACT, ABSTRACT_EXTRA, extra_prob),
        op=pick(rng, OPENERS, OPENERS_EXTRA, extra_prob),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--train-sentences", type=int, default=4000)
    ap.add_argument("--human-records", type=int, default=220)
    ap.add_argument("--sentences-per-record", type=int, default=15)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(20240611)
    train = [sentence(rng) for _ in range(args.train_sentences)]
    (out / "train_corpus.txt").write_text("\n".join(train) + "\n", encoding="utf-8")

    rng = random.Random(77003191)
    records = []
    for i in range(args.human_records):
        sents = [sentence(rng, extra_prob=0.25, extra_templates=True)
                 for _ in range(args.sentences_per_record)]
        text = " ".join(sents)
        records.append({"id": f"h{i:04d}", "text": text})
    with (out / "human_texts.jsonl").open("w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")

    lens = [len(r["text"]) for r in records]
    print(f"train sentences: {len(train)}")
    print(f"human records: {len(records)}, chars min/median/max: "
          f"{min(lens)}/{sorted(lens)[len(lens)//2]}/{max(lens)}")


if __name__ == "__main__":
    main()
