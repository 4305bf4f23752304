"""Score predictions and read the diagnostic tables.

Besides UAS and exact match, the evaluator reports accuracy per PoS tag
of the dependent and precision/recall/F1 per signed displacement
(dependent position minus head position, with root arcs in their own
bucket).
"""

from blindparse import (
    DepTree, displacement_tsv, evaluate, parse_conllu, per_pos_tsv,
)

GOLD = """\
1\tThe\t_\tDET\t_\t_\t2\tdet\t_\t_
2\tcat\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tslept\t_\tVERB\t_\t_\t0\troot\t_\t_
4\t.\t_\tPUNCT\t_\t_\t3\tpunct\t_\t_

1\tDogs\t_\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tbark\t_\tVERB\t_\t_\t0\troot\t_\t_
3\tloudly\t_\tADV\t_\t_\t2\tadvmod\t_\t_
4\tat\t_\tADP\t_\t_\t5\tcase\t_\t_
5\tnight\t_\tNOUN\t_\t_\t2\tobl\t_\t_
"""

bank = parse_conllu(GOLD, source_id="toy")

# a right-branching guess for each sentence: word i hangs off word i-1
preds = [DepTree(tuple(range(sent.n))) for sent, _ in bank.sentences]

report = evaluate(bank, preds)
print(f"UAS  = {report.uas:.2f}   (arcs correct out of {report.token_count})")
print(f"UM   = {report.um:.2f}   (sentences fully correct)")
print(f"%w   = {report.pct_w:.2f}   (all predictions are already trees)")
print(f"sentences = {report.sentence_count}")

print()
print("accuracy by dependent PoS")
print(per_pos_tsv(report.per_pos))

# Right-branching hangs every non-first word one position after its
# head, so all predicted mass lands in the +1 displacement bucket (its
# recall there is perfect, its precision is not).
print("precision/recall/F1 by displacement")
print(displacement_tsv(report.per_displacement))

# repair_histogram counts NP / P1 / P2 classifications; hand-built
# DepTree predictions are always NP
print("repair histogram:",
      {lv.value: c for lv, c in report.repair_histogram.items()})
