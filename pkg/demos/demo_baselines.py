"""Walk through the eight uninformed baselines on a toy corpus.

Every generator sees only the sentence length (S also sees a reference
treebank), so the predictions here are what these systems would emit
for ANY ten-word sentence.
"""

from blindparse import (
    BaselineKind, build_length_index, generate, make_rng, parse_conllu, uas,
)

# a throwaway reference treebank for the sampling baseline
REFERENCE = """\
1\tThe\t_\tDET\t_\t_\t2\tdet\t_\t_
2\tcat\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tslept\t_\tVERB\t_\t_\t0\troot\t_\t_

1\tBirds\t_\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tsing\t_\tVERB\t_\t_\t0\troot\t_\t_
3\tloudly\t_\tADV\t_\t_\t2\tadvmod\t_\t_

1\tShe\t_\tPRON\t_\t_\t2\tnsubj\t_\t_
2\treads\t_\tVERB\t_\t_\t0\troot\t_\t_
"""

train = parse_conllu(REFERENCE, source_id="toy-train")
index = build_length_index(train)

n = 10
print(f"one draw of each baseline for a sentence of {n} words")
print()
for kind in BaselineKind:
    rng = make_rng(7)  # same seed everywhere: differences come from the system
    extra = {"index": index} if kind is BaselineKind.S else {}
    tree = generate(kind, n, rng, **extra)
    print(f"  {kind.value:3s} heads = {list(tree.heads)}")

# The deterministic chains never change; the random ones do.
print()
print("three draws of RD* (uniform shape, then a random projective order)")
for seed in (0, 1, 2):
    tree = generate(BaselineKind.RDstar, n, make_rng(seed))
    print(f"  seed {seed}: {list(tree.heads)}")

# Score every baseline against the toy reference itself, using fresh
# per-sentence seeds the way the command-line driver does.
print()
print("UAS against the three toy sentences (self-referee, tiny numbers)")
for kind in BaselineKind:
    preds = []
    for ordinal, (sent, _) in enumerate(train.sentences):
        extra = {"index": index} if kind is BaselineKind.S else {}
        preds.append(generate(kind, sent.n, make_rng(100 + ordinal), **extra))
    print(f"  {kind.value:3s} UAS = {uas(train, preds):5.1f}")

# S with an exact length match returns a stored gold tree, so on this
# corpus it reproduces one of the reference analyses every time.
tree = generate(BaselineKind.S, 3, make_rng(0), index=index)
print()
print(f"S for a 3-word sentence copies a reference tree: {list(tree.heads)}")
print(f"lengths seen by the index: {index.lengths()}")
