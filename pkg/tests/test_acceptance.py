"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import pytest

from skewlat import harness


@pytest.mark.parametrize("criterion", harness.CRITERIA,
                         ids=[f"criterion_{i}" for i in range(1, len(harness.CRITERIA) + 1)])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.failures
