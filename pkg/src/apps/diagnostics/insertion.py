import numpy as np
from scipy.stats import kstest

from apps.core.exceptions import PreconditionError
from apps.diagnostics.models import InsertionOrderTest


def normalized_ranks(records, num_live):
    """Insertion ranks mapped to (rank + 0.5) / K."""
    ranks = np.array([record.insertion_rank for record in records], dtype=float)
    return (ranks + 0.5) / num_live


def insertion_order_ks(records, num_live):
    """
    Kolmogorov-Smirnov test of insertion ranks against the uniform distribution.

    A correct likelihood-restricted sampler inserts the new live point at a
    uniformly random position of the sorted live set.

    Args:
        records (Sequence[IterationRecord]): Non-empty trace.
        num_live (int): K, at least 2.

    Returns:
        InsertionOrderTest: Statistic and asymptotic p-value.
    """
    if num_live < 2:
        raise PreconditionError("num_live must be at least 2")
    if not records:
        raise PreconditionError("insertion order test needs at least one record")
    result = kstest(normalized_ranks(records, num_live), "uniform", method="asymp")
    return InsertionOrderTest(
        ks_statistic=float(result.statistic),
        p_value=float(result.pvalue),
        num_samples=len(records),
    )
