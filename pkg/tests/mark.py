import os
import unittest

import pytest

_RUN_SLOW = os.environ.get("USCQED_SLOW") == "1"


def slow(cls):
    cls = pytest.mark.slow(cls)
    return unittest.skipUnless(_RUN_SLOW, "set USCQED_SLOW=1 to run")(cls)
