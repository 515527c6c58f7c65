# coding: utf-8
"""Run the examples in the docstrings of every `uscqed` module.
"""
import doctest
import importlib
import pkgutil
import unittest
import warnings

import numpy

import uscqed


def _iter_modules(package):
    """Yield every submodule of ``package``, depth first."""
    for info in pkgutil.iter_modules(package.__path__):
        if info.name == "__main__":
            continue
        module = importlib.import_module("{}.{}".format(package.__name__, info.name))
        yield module
        if info.ispkg:
            for submodule in _iter_modules(module):
                yield submodule


def _doctest_suite():
    def setUp(test):
        warnings.simplefilter("ignore")

    def tearDown(test):
        warnings.simplefilter(warnings.defaultaction)

    suite = unittest.TestSuite()
    for module in _iter_modules(uscqed):
        globs = dict(module.__dict__, numpy=numpy, uscqed=uscqed)
        suite.addTests(
            doctest.DocTestSuite(
                module,
                globs=globs,
                setUp=setUp,
                tearDown=tearDown,
                optionflags=doctest.ELLIPSIS | doctest.NORMALIZE_WHITESPACE,
            )
        )
    return suite


# pytest ignores the `load_tests` protocol, so each doctest becomes a
# method of a regular test case.


class TestDoctest(unittest.TestCase):
    pass


def _wrap(case):
    def _test(self):
        case.setUp()
        try:
            case.runTest()
        finally:
            case.tearDown()

    return _test


for _case in _doctest_suite():
    setattr(TestDoctest, "test_" + _case.id().replace(".", "_"), _wrap(_case))
