import random

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("latlab", deadline=None, suppress_health_check=[HealthCheck.too_slow],
                          derandomize=True)
settings.load_profile("latlab")


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> list[list[int]]:
    """Product of random elementary row operations and sign flips."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            m[0] = [-x for x in m[0]]
            continue
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.2:
            m[i] = [-x for x in m[i]]
    return m


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, lo=-9, hi=9):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]


@st.composite
def symmetric_matrices(draw, max_n=6, lo=-5, hi=5):
    n = draw(st.integers(1, max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(st.integers(lo, hi))
    return m
