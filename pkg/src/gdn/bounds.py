"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Closed-form bounds on critical exponents and indices of primitivity of
n-by-n GDN matrices, the sign-change matrix W and the per-entry caps on
negativity components.
"""

from gdn import errors
from gdn import models


def _require_order(n, smallest=1):
    if not isinstance(n, int) or isinstance(n, bool) or n < smallest:
        raise errors.PreconditionViolated(f"n must be an integer >= {smallest}, not {n!r}")


def sign_change_matrix(epm):
    """
    Returns W, where w[i][j] is the number of sign alternations in the
    coefficients of entry (i, j), ordered by decreasing eigenvalue.

    Args:
        epm (EntryPolyMatrix): The entry polynomials of a matrix.

    Returns:
        SignChangeMatrix: The matrix W.
    """
    return models.SignChangeMatrix(
        n=epm.n,
        w=[[epm.polys[i][j].sign_changes() for j in range(epm.n)] for i in range(epm.n)],
    )


def component_cap(w, diagonal):
    """
    Returns the largest number of negativity components in (1, ∞) an entry
    with w sign changes can have: ⌊(w−1)/2⌋ off the diagonal, ⌊w/2⌋ on it.

    Args:
        w (int): The sign-change count, w ≥ 0.
        diagonal (bool): Whether the entry lies on the diagonal.
    """
    if w < 0:
        raise errors.PreconditionViolated(f"sign-change count must be >= 0, not {w}")
    if w == 0:
        return 0
    return w // 2 if diagonal else (w - 1) // 2


def theorem_upper_bound(n):
    """
    Returns the upper bound k(n) on the critical exponent of n-by-n GDN
    matrices: (n²−3n+4)/2 for odd n and (n²−2n)/2 for even n.
    """
    _require_order(n)
    if n % 2:
        return (n * n - 3 * n + 4) // 2
    return (n * n - 2 * n) // 2


def component_budget(n):
    """
    Returns the number of negativity components a single column can have in
    [1, ∞): (n−1)⌊(n−2)/2⌋ + ⌊(n−1)/2⌋, which is (n²−3n+2)/2 for odd n and
    (n²−2n)/2 for even n.
    """
    _require_order(n, 2)
    return (n - 1) * ((n - 2) // 2) + (n - 1) // 2


def reduced_component_budget(n):
    """
    Returns the component count left once the column containing a component in
    (0, 1) is accounted for; one less than the budget for even n. Together
    with the unit interval below 1 it gives theorem_upper_bound(n).
    """
    budget = component_budget(n)
    return budget if n % 2 else budget - 1


def mip_upper_bound(n):
    """ Returns 2n − 3, the bound on the index of primitivity of a GDN matrix with positive spectrum. """
    _require_order(n, 2)
    return 2 * n - 3


def wielandt_bound(n):
    """ Returns n² − 2n + 2, the largest index of primitivity of any primitive n-by-n pattern. """
    _require_order(n)
    return n * n - 2 * n + 2


def dn_critical_exponent(n):
    """ Returns n − 2, the critical exponent of n-by-n doubly nonnegative matrices. """
    _require_order(n, 2)
    return n - 2


def bounds_table(n):
    """
    Returns every closed-form bound for order n as a dictionary.
    """
    _require_order(n, 2)
    return {
        "n": n,
        "theorem_upper_bound": theorem_upper_bound(n),
        "component_budget": component_budget(n),
        "reduced_component_budget": reduced_component_budget(n),
        "mip_upper_bound": mip_upper_bound(n),
        "wielandt_bound": wielandt_bound(n),
        "dn_critical_exponent": dn_critical_exponent(n),
    }
