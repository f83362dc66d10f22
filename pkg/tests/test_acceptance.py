"""The ten acceptance criteria, each at its stated tolerance."""

import pytest

from natanzon.verify import ACCEPTANCE


@pytest.mark.parametrize("label,check", ACCEPTANCE, ids=[f"criterion_{k}" for k, _ in ACCEPTANCE])
def test_criterion(label, check, capsys):
    result = check()
    with capsys.disabled():
        print(f"\ncriterion {label}: {'PASS' if result.passed else 'FAIL'} ({result.name}, {result.seconds:.2f} s)")
    assert result.passed, result.metrics
