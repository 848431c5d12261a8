"""Distribution-shift benchmark toolkit for drug-drug interactions.

Thin wrapper over the compiled extension; everything public lives in
ddishift._core.
"""

from ddishift._core import (
    Dataset,
    DrugSplit,
    Error,
    TaskSplit,
    accuracy,
    assemble_tasks,
    cohen_kappa,
    consistency_index,
    generate_synthetic,
    load_dataset,
    load_drug_split,
    macro_f1,
    make_split,
    pr_auc,
    roc_auc,
    run_benchmark,
    tanimoto,
    write_drug_split,
    write_task_split,
    __version__,
)

__all__ = [
    "Dataset",
    "DrugSplit",
    "Error",
    "TaskSplit",
    "accuracy",
    "assemble_tasks",
    "cohen_kappa",
    "consistency_index",
    "generate_synthetic",
    "load_dataset",
    "load_drug_split",
    "macro_f1",
    "make_split",
    "pr_auc",
    "roc_auc",
    "run_benchmark",
    "tanimoto",
    "write_drug_split",
    "write_task_split",
    "__version__",
]
