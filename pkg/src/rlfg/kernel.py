"""Selects the chart kernel: compiled if importable, else pure Python.

Set ``RLFG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _chart_py

python_build_chart = _chart_py.build_chart
native_build_chart = None

if not os.environ.get("RLFG_PURE_PYTHON"):
    try:
        from ._chart import MAX_EQUATIONS, MAX_FORMULAS, MAX_RESOURCES
        from ._chart import build_chart as native_build_chart
    except ImportError:
        native_build_chart = None

BACKEND = "cython" if native_build_chart is not None else "python"


def build_chart(leaves, ant, cons, lift, peq, single_use, max_items, order="fifo"):
    if (
        native_build_chart is not None
        and order == "fifo"
        and len(leaves) <= MAX_RESOURCES
        and len(ant) < MAX_FORMULAS
        and single_use < (1 << MAX_EQUATIONS)
        and all(j < MAX_EQUATIONS for row in peq for j, _ in row)
    ):
        return native_build_chart(leaves, ant, cons, lift, peq, single_use, max_items)
    return python_build_chart(leaves, ant, cons, lift, peq, single_use, max_items, order)
