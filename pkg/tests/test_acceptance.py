"""The nine acceptance criteria at full size, one line of output per criterion."""
import pytest

from cycnorm.selftest import CRITERIA

import conftest

# wall-clock limits stated with the criteria
LIMITS = {1: 120, 3: 300, 6: 600}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    outcome = CRITERIA[number]()
    line = outcome.line()
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    if not outcome.ok:
        pytest.fail(f"{line}; first failures: {outcome.failures[:3]}", pytrace=False)
    if number in LIMITS:
        assert outcome.seconds <= LIMITS[number], f"took {outcome.seconds:.0f}s"
