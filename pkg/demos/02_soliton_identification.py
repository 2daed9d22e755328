"""Identifying solitons two ways and tracking them through collisions.

The batch algorithm repeatedly removes the leftmost run at least as long as
its predecessor; the streaming algorithm keeps a stack of runs and emits a
soliton whenever the top two runs reach equal length.  Both name the same
solitons, and tails become heads one step later, which lets us follow each
soliton through a collision.
"""

from boxball import (
    apply_T,
    format_config,
    identify_batch,
    identify_stream,
    pair_one_step,
    parse_config,
)

word = parse_config("110110011100000")
print("word:", format_config(word))
print("\nbatch report:")
print(identify_batch(word).report())
print("\nstream report:")
print(identify_stream(word).report())
assert identify_batch(word) == identify_stream(word)

# the longer worked stream: three 1-solitons and one each of 2, 3, 5
long_word = parse_config("11110010111010000110110000")
counts = identify_stream(long_word).size_counts()
print("\nlong word sizes:", dict(sorted(counts.items())))

# follow a 3-soliton overtaking a 1-soliton
cfg = parse_config("111000100000000000000000")
print("\ntracking through a takeover:")
sols = identify_stream(cfg)
labels = {s: f"{s.size}-soliton" for s in sols.all()}
for t in range(5):
    placed = {labels[s]: s.leftmost for s in labels}
    print(f"t={t}: {format_config(cfg)[:20]}  positions {placed}")
    nxt = apply_T(cfg)
    mapping = pair_one_step(sols, nxt)
    labels = {mapping[s]: name for s, name in labels.items()}
    sols = identify_stream(nxt)
    cfg = nxt
# the big one gained 2 extra sites, the small one lost two steps
