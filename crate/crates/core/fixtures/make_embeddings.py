"""Builds embeddings.json: synthetic clustered vectors for every fixture word.

Each pool (a WORDS line in a script, or a puzzle group) gets its own axis.
A word points along the axis of the first pool it appears in, with a small
weight on any later pool, plus a noise component that grows with its
position in the pool. The first four words of every pool are therefore its
most cohesive quartet (checked below for pools that share no words with
earlier pools), which the scripted replies rely on.
"""
import glob
import itertools
import json
import math
import re

AXES = 40
NOISE = 8
DIM = AXES + NOISE

pools = []
for path in sorted(glob.glob("scripts/*.json")):
    for reply in json.load(open(path)):
        for m in re.finditer(r"^WORDS(?: \d)?: (.*)$", reply, re.M):
            pools.append([w.strip().lower() for w in m.group(1).split(",")])
for path in sorted(glob.glob("puzzles/*.json")):
    for p in json.load(open(path)):
        for g in p["groups"]:
            pools.append([w.lower() for w in g["words"]])
assert len(pools) <= AXES, len(pools)

vectors = {}
first = {}
for k, pool in enumerate(pools):
    for j, w in enumerate(pool):
        if w not in vectors:
            v = [0.0] * DIM
            v[k] = 1.0
            v[AXES + j] = 0.3 * (1.0 + 0.6 * j)
            vectors[w] = v
            first[w] = k
        else:
            vectors[w][k] += 0.3


def cos(a, b):
    a, b = vectors[a], vectors[b]
    dot = sum(x * y for x, y in zip(a, b))
    return dot / math.sqrt(sum(x * x for x in a) * sum(y * y for y in b))


def sim(q):
    return sum(cos(a, b) for a, b in itertools.combinations(q, 2)) / 6


for k, pool in enumerate(pools):
    if len(pool) == 8 and all(first[w] == k for w in pool):
        best = max(itertools.combinations(pool, 4), key=sim)
        assert set(best) == set(pool[:4]), (pool, best)

json.dump({"dimension": DIM, "vectors": {w: vectors[w] for w in sorted(vectors)}}, open("embeddings.json", "w"))
print(len(pools), "pools,", len(vectors), "words")
