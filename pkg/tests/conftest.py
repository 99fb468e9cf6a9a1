import itertools

import pytest

from weakseq.groups import TableGroup


def s3_table():
    """Cayley table of S3 under composition, identity at index 0."""
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    # (p + q)(x) = p(q(x)); non-commutative
    return [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]


@pytest.fixture
def s3():
    return TableGroup(s3_table(), spec="S3")


@pytest.fixture
def s3_file(tmp_path):
    rows = s3_table()
    path = tmp_path / "s3.txt"
    path.write_text("6\n" + "\n".join(" ".join(map(str, r)) for r in rows) + "\n")
    return path
