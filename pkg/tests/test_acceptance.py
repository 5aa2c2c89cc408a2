"""The thirteen acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``criterion N: PASS|FAIL`` line.  Run directly with
``python3 tests/test_acceptance.py`` for the summary without pytest.
"""
import sys

import pytest

from snakecr.acceptance import CRITERIA
from snakecr.report import PASS

# sample sizes fixed by the criteria themselves
SIZES = {3: 200, 6: 100, 8: 20, 9: 20, 10: 20, 11: 20}


def _run(k: int):
    kwargs = {"seed": 0}
    if k in SIZES:
        kwargs["points"] = SIZES[k]
    return CRITERIA[k](**kwargs)


def _line(k, check) -> str:
    word = "PASS" if check.status == PASS else "FAIL"
    return f"criterion {k}: {word}  ({check.id}, value={check.value!r})"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    check = _run(k)
    with capsys.disabled():
        print("\n" + _line(k, check))
    assert check.status == PASS, check.detail


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        c = _run(k)
        failed += c.status != PASS
        print(_line(k, c), flush=True)
    sys.exit(1 if failed else 0)
