"""Independent oracles and random-market generators for the test suite."""

from fractions import Fraction as F
from random import Random

from corematch import Market
from corematch.matching import enumerate_all_matchings

ZERO = F(0)


def matching_value(m: Market, pairs) -> F:
    return sum((m.matrix[i][j] for i, j in pairs), ZERO)


def brute_force_optimum(m: Market) -> F:
    """Max matching value by plain exhaustive enumeration."""
    return max(matching_value(m, pairs) for pairs in enumerate_all_matchings(m))


def brute_force_optimal_pair_sets(m: Market):
    best = brute_force_optimum(m)
    return {
        frozenset(pairs)
        for pairs in enumerate_all_matchings(m)
        if matching_value(m, pairs) == best
    }


def brute_force_core_membership(g, z) -> bool:
    """Core test over every coalition of a game table."""
    if sum(z, ZERO) != g.values[g.grand_mask]:
        return False
    sums = g.payoff_sums(list(z))
    return all(
        sums[mask] >= g.values[mask] for mask in range(1, g.grand_mask)
    )


def brute_force_convex(g) -> bool:
    """v(S + i) - v(S) nondecreasing in S, checked over all pairs S <= T."""
    n = g.n_players
    for i in range(n):
        bit = 1 << i
        for t in range(g.grand_mask + 1):
            if t & bit:
                continue
            dt = g.values[t | bit] - g.values[t]
            s = t
            while True:
                if g.values[s | bit] - g.values[s] > dt:
                    return False
                if s == 0:
                    break
                s = (s - 1) & t
    return True


def random_fraction(rng: Random, max_num=8) -> F:
    return F(rng.randint(0, max_num), rng.choice((1, 1, 2, 3)))


def random_balanced_market(rng: Random, n_workers=None, max_num=8) -> Market:
    n = n_workers if n_workers is not None else rng.randint(2, 5)
    m = rng.randint(1, min(3, n))
    caps = [1] * m
    for _ in range(n - m):
        caps[rng.randrange(m)] += 1
    matrix = tuple(
        tuple(random_fraction(rng, max_num) for _ in range(n)) for _ in range(m)
    )
    return Market(
        tuple(f"f{i}" for i in range(1, m + 1)),
        tuple(caps),
        tuple(f"w{j}" for j in range(1, n + 1)),
        matrix,
    )


def random_market(rng: Random, max_workers=5) -> Market:
    """Possibly unbalanced market."""
    n = rng.randint(1, max_workers)
    m = rng.randint(1, 3)
    caps = tuple(rng.randint(1, 3) for _ in range(m))
    matrix = tuple(
        tuple(random_fraction(rng) for _ in range(n)) for _ in range(m)
    )
    return Market(
        tuple(f"f{i}" for i in range(1, m + 1)),
        caps,
        tuple(f"w{j}" for j in range(1, n + 1)),
        matrix,
    )
