import pytest

from pgcode.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion_{n}")
def test_criterion(number):
    result = run_criterion(number)
    print(result.line)
    assert result.passed, result.line
