"""Independent reference implementations used only by the tests."""

from fractions import Fraction

from oscillax.seb import SEBFactorization, multiplier_count, x_offset


def laplace_det(rows):
    """Cofactor expansion along the first row; exponential but independent
    of the elimination kernel it checks."""
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        coeff = rows[0][j]
        if coeff == 0:
            continue
        sub = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = coeff * laplace_det(sub)
        total += term if j % 2 == 0 else -term
    return total


def laplace_minor(matrix, row_set, col_set):
    sub = [[matrix[i - 1, j - 1] for j in col_set] for i in row_set]
    return laplace_det(sub)


def staircase_flat(n, rng, side):
    """Random flat multipliers in elimination-canonical form: each chain's
    positive slots form a contiguous run anchored at the chain's own factor."""
    k = multiplier_count(n)
    flat = [Fraction(0)] * k
    for i in range(2, n + 1):
        width = n - i + 1
        t = rng.randint(0, width)
        x = x_offset(i, n) - 1
        span = range(x + width - t, x + width) if side == "l" else range(x, x + t)
        for pos in span:
            flat[pos] = Fraction(rng.randint(1, 9))
    return tuple(flat)


def random_canonical_factorization(n, rng):
    return SEBFactorization(
        n,
        staircase_flat(n, rng, "l"),
        tuple(Fraction(rng.randint(1, 5)) for _ in range(n)),
        staircase_flat(n, rng, "u"),
    )
