import sys

import unittest


def _loaded():
    return {
        name: module
        for name, module in sys.modules.items()
        if name == "uscqed" or name.startswith("uscqed.")
    }


class TestImports(unittest.TestCase):
    def test_import_path(self):
        """Test import uscqed also imports the public symbols."""
        restore = _loaded()
        for name in restore:
            sys.modules.pop(name)
        try:
            import uscqed

            uscqed.hilbert
            uscqed.build_model
            uscqed.diagonalize
            uscqed.assemble_liouvillian
            uscqed.steady_state
            uscqed.spectrum_qrt
            uscqed.spectrum_saa
            uscqed.run
            uscqed.compare_goldens
            uscqed.Gauge
            uscqed.ModelConfig
        finally:
            for name in _loaded():
                sys.modules.pop(name)
            sys.modules.update(restore)
