"""Repair a messy model transcript into a valid dependency tree.

The two-step pipeline: first make the text tabular (step 1), then make
the head vector a tree (step 2).  The classification NP / P1 / P2
records how much surgery was needed.
"""

from blindparse import (
    RawOutput, Sentence, Token, extract_heads, format_table, make_rng,
    postprocess, repair_format, repair_tree, validate_heads,
)

# a typical transcript: chatter, missing columns, a bad HEAD, no row 7
MESSY = (
    "Sure thing! Here is the parse you asked for:\n"
    "1\tAll\t_\t_\t_\t_\t2\tdet\t_\t_\n"
    "2\tsystems\t_\t_\t_\t_\t3\tnsubj\n"
    "3\tfail\t_\t_\t_\t_\t0\troot\t_\t_\n"
    "4\tsometimes\t_\t_\t_\t_\t9\tadvmod\t_\t_\n"
    "5\t.\t_\t_\t_\t_\t3\tpunct\t_\t_\n"
    "6\t.\t_\t_\t_\t_\t5\tpunct\t_\t_\n"
    "Hope that helps!"
)

target = Sentence(tokens=[
    Token(id=i, form=f)
    for i, f in enumerate(["All", "systems", "fail", "sometimes", ".", "?!"], 1)
])

print("raw transcript")
print("-" * 40)
print(MESSY)
print("-" * 40)

# Step 1 only touches the text: prose goes away silently and the short
# row 2 is rebuilt to ten columns (an absent row would be synthesized).
rows, fmt_touched = repair_format(RawOutput(MESSY, target))
print()
print(f"after format repair (columns rebuilt: {fmt_touched})")
print(format_table(rows))

heads = extract_heads(rows)
print()
print(f"extracted heads: {heads}")
print(f"verdict on that vector: {validate_heads(heads)}")

# Step 2 works on the numbers alone: head 9 points past the six words,
# so that arc is rerouted to the root.  The same pass would also break
# cycles and collapse extra roots.
fixed, tree_touched = repair_tree(heads, make_rng(0))
print()
print(f"after tree repair: {fixed} (changed: {tree_touched})")
print(f"verdict now: {validate_heads(fixed)}")

# postprocess runs both steps and reports the repair level
tree, level = postprocess(RawOutput(MESSY, target), make_rng(0))
print()
print(f"postprocess level = {level.value} (P2: the tree itself needed repair)")

# a clean transcript sails through untouched
CLEAN = "\n".join(
    "\t".join([str(i), f, "_", "_", "_", "_", str(h), "dep", "_", "_"])
    for i, (f, h) in enumerate(zip(["Birds", "sing"], [2, 0]), 1)
)
clean_target = Sentence(tokens=[Token(id=1, form="Birds"), Token(id=2, form="sing")])
tree, level = postprocess(RawOutput(CLEAN, clean_target), make_rng(0))
print(f"clean transcript level = {level.value}, heads = {list(tree.heads)}")
