"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import pytest

from multibrot.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, *_ in CRITERIA], ids=[f"criterion-{n}" for n, *_ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
