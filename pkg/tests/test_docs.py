import doctest

import critblaschke


def test_package_docstring_example():
    result = doctest.testmod(critblaschke)
    assert result.attempted > 0 and result.failed == 0
