"""Select the kernel-core implementation: compiled extension or plain source.

Setting ZZMORSE_PURE=1 forces the interpreted version even when the
extension built by setup.py is present.
"""

import importlib.util
import os

if os.environ.get("ZZMORSE_PURE"):
    _spec = importlib.util.spec_from_file_location(
        "zzmorse._kernel_core_pure",
        os.path.join(os.path.dirname(__file__), "_kernel_core.py"))
    core = importlib.util.module_from_spec(_spec)
    _spec.loader.exec_module(core)
else:
    from . import _kernel_core as core
