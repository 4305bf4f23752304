"""Uninformed dependency-parsing baselines, LLM output repair, and evaluation.

The package generates dependency trees that ignore sentence content
(chains, flat trees, random trees, random projective trees, optimal
linear arrangements, treebank resampling), repairs raw CoNLL-format
model output into valid trees, and scores any predictions against gold
treebanks with unlabeled attachment metrics.
"""

from .baselines import BaselineKind, LengthIndex, build_length_index, generate
from .conllu import (
    VALID,
    ConlluError,
    DepTree,
    ParseError,
    Sentence,
    Token,
    Treebank,
    TreeValidityError,
    parse_conllu,
    validate_heads,
    write_conllu,
)
from .llmclient import (
    CompletionClient,
    EndpointConfig,
    PromptSpec,
    ResponseCache,
    RetryPolicy,
    build_prompt,
    pick_example,
)
from .metrics import (
    ROOT_BUCKET,
    EvalReport,
    displacement_fscore,
    displacement_tsv,
    evaluate,
    fmt_pct,
    fmt_score,
    pct_wellformed,
    per_pos_tsv,
    uas,
    uas_by_pos,
    um,
)
from .repair import (
    RawOutput,
    RepairLevel,
    extract_heads,
    format_table,
    postprocess,
    repair_format,
    repair_tree,
)
from .treealg import (
    Arrangement,
    TreeShape,
    count_unlabeled_trees,
    is_projective,
    linearize,
    make_rng,
    min_linear_arrangement,
    min_projective_arrangement,
    randbelow,
    random_labeled_tree,
    random_projective_arrangement,
    random_unlabeled_tree,
)

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BaselineKind",
    "CompletionClient",
    "ConlluError",
    "DepTree",
    "EndpointConfig",
    "EvalReport",
    "LengthIndex",
    "ParseError",
    "PromptSpec",
    "ROOT_BUCKET",
    "RawOutput",
    "RepairLevel",
    "ResponseCache",
    "RetryPolicy",
    "Sentence",
    "Token",
    "Treebank",
    "TreeShape",
    "TreeValidityError",
    "VALID",
    "build_length_index",
    "build_prompt",
    "count_unlabeled_trees",
    "displacement_fscore",
    "displacement_tsv",
    "evaluate",
    "extract_heads",
    "fmt_pct",
    "fmt_score",
    "format_table",
    "generate",
    "is_projective",
    "linearize",
    "make_rng",
    "min_linear_arrangement",
    "min_projective_arrangement",
    "parse_conllu",
    "pct_wellformed",
    "per_pos_tsv",
    "pick_example",
    "postprocess",
    "randbelow",
    "random_labeled_tree",
    "random_projective_arrangement",
    "random_unlabeled_tree",
    "repair_format",
    "repair_tree",
    "uas",
    "uas_by_pos",
    "um",
    "validate_heads",
    "write_conllu",
]
