"""Classical reference designs: two-level full factorials and definitive screening designs."""

from __future__ import annotations

from itertools import product

import numpy as np

from screenopt.core.models import Design
from screenopt.errors import ErrorCode, InconsistentSpecError

_MAX_ORDER: int = 200


def full_factorial(k: int) -> Design:
    """All 2^k runs of a two-level factorial, first factor varying slowest."""
    if k < 1:
        raise InconsistentSpecError(
            message="A factorial needs at least one factor.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    return Design(settings=np.array(list(product((-1.0, 1.0), repeat=k))))


def _is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    return all(q % f for f in range(3, int(q**0.5) + 1, 2))


def conference_matrix(order: int) -> np.ndarray:
    """Paley conference matrix C of the given order, with C'C = (order - 1) I.

    ``order - 1`` must be an odd prime q. C is symmetric when q = 1 (mod 4) and
    skew-symmetric when q = 3 (mod 4).

    Raises:
        InconsistentSpecError: If order - 1 is not an odd prime.
    """
    q = order - 1
    if not _is_odd_prime(q):
        raise InconsistentSpecError(
            message=f"No Paley conference matrix of order {order}; order - 1 must be an odd prime.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    residues = {(x * x) % q for x in range(1, q)}
    chi = np.array([0.0] + [1.0 if a in residues else -1.0 for a in range(1, q)])
    core = np.array([[chi[(j - i) % q] for j in range(q)] for i in range(q)])
    c = np.zeros((order, order))
    c[0, 1:] = 1.0
    c[1:, 0] = 1.0 if q % 4 == 1 else -1.0
    c[1:, 1:] = core
    return c


def definitive_screening_design(k: int, center_runs: int = 1) -> Design:
    """Three-level definitive screening design for k factors.

    Stacks the first k columns of the smallest Paley conference matrix of
    order at least k, its foldover, and ``center_runs`` rows of zeros.

    Raises:
        InconsistentSpecError: If k < 2 or center_runs < 0.
    """
    if k < 2 or center_runs < 0:
        raise InconsistentSpecError(
            message=f"Cannot build a definitive screening design with k={k} and {center_runs} center runs.",
            error_code=ErrorCode.INCONSISTENT_SPEC,
        )
    order = next(m for m in range(max(k, 4), _MAX_ORDER) if _is_odd_prime(m - 1))
    c = conference_matrix(order)[:, :k]
    return Design(settings=np.vstack((c, -c, np.zeros((center_runs, k)))))
