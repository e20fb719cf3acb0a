import math

import pytest

from coxwall import new_system

INF = math.inf


def dihedral(m):
    return new_system([[1, m], [m, 1]], ["s", "t"])


def path_system(labels, names=None):
    """Rank len(labels)+1 system whose diagram is a path with the given
    labels; off-path entries are 2."""
    n = len(labels) + 1
    rows = [[2] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    for i, m in enumerate(labels):
        rows[i][i + 1] = m
        rows[i + 1][i] = m
    return new_system(rows, names)


def bipartite_system(p, q, r):
    """W(p, K_{q,r}): parts of q and r vertices, every cross pair carries
    p/2, same-part pairs are infinite."""
    n = q + r
    rows = [[INF] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    for i in range(q):
        for j in range(q, n):
            rows[i][j] = p // 2
            rows[j][i] = p // 2
    names = ["s%d" % (i + 1) for i in range(q)] + ["t%d" % (j + 1) for j in range(r)]
    return new_system(rows, names)


def h3bar_system():
    """Rank-7 non-rigid hyperbolic fixture: two infinite triples s*, t*
    bridged by 5-labels, a cone generator u with 3s to t* and 2s to s*."""
    names = ["s1", "s2", "s3", "t1", "t2", "t3", "u"]
    rows = [[1] * 7 for _ in range(7)]
    for i in range(7):
        for j in range(7):
            if i == j:
                continue
            a, b = names[i][0], names[j][0]
            if a == b:
                rows[i][j] = INF
            elif {a, b} == {"s", "t"}:
                rows[i][j] = 5
            elif {a, b} == {"t", "u"}:
                rows[i][j] = 3
            else:
                rows[i][j] = 2
    return new_system(rows, names)


def pentagon_system(m):
    """W(2m, C5): five generators in a cycle, adjacent pairs labeled m,
    non-adjacent pairs infinite."""
    rows = [[INF] * 5 for _ in range(5)]
    for i in range(5):
        rows[i][i] = 1
        rows[i][(i + 1) % 5] = m
        rows[(i + 1) % 5][i] = m
    return new_system(rows, ["v%d" % i for i in range(5)])


@pytest.fixture(scope="session")
def A2():
    return dihedral(3)


@pytest.fixture(scope="session")
def B2():
    return dihedral(4)


@pytest.fixture(scope="session")
def I25():
    return dihedral(5)


@pytest.fixture(scope="session")
def Dinf():
    return dihedral(INF)


@pytest.fixture(scope="session")
def A3():
    return path_system([3, 3], ["a", "b", "c"])


@pytest.fixture(scope="session")
def B3():
    return path_system([4, 3], ["a", "b", "c"])


@pytest.fixture(scope="session")
def H3():
    return path_system([5, 3], ["a", "b", "c"])


@pytest.fixture(scope="session")
def A2t():
    return new_system([[1, 3, 3], [3, 1, 3], [3, 3, 1]], ["a", "b", "c"])


@pytest.fixture(scope="session")
def C5w4():
    return pentagon_system(2)


@pytest.fixture(scope="session")
def K33():
    return bipartite_system(6, 3, 3)


@pytest.fixture(scope="session")
def H3bar():
    return h3bar_system()


@pytest.fixture(scope="session")
def DinfxDinf():
    # two commuting infinite dihedrals: the flat-plane pattern
    rows = [
        [1, INF, 2, 2],
        [INF, 1, 2, 2],
        [2, 2, 1, INF],
        [2, 2, INF, 1],
    ]
    return new_system(rows, ["s1", "s2", "s3", "s4"])
