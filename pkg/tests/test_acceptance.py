"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from netcode.claims import run_claim

CRITERIA = [
    (1, "example2_fields"),
    (2, "example2_code"),
    (3, "example3"),
    (4, "example1"),
    (5, "lift"),
    (6, "convert"),
    (7, "equal_depth"),
    (8, "nonuniform"),
    (9, "uniform"),
    (10, "fig4"),
    (11, "algebra"),
    (12, "sim"),
]


@pytest.mark.parametrize("number,name", CRITERIA, ids=[f"criterion{n:02d}_{c}" for n, c in CRITERIA])
def test_criterion(number, name):
    result = run_claim(name)
    print(f"[criterion {number}] {result.line()}")
    assert result.passed, result.detail
