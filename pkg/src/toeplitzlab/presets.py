"""Shipped tower configurations so the CLI and tests need no external data.

threeadic: the regular 3-adic odometer line, nonnegative domains, divergent
index sum.  irregular-demo: centered odd moduli growing fast enough that the
decided-density interval stays below 1/4.
"""

from fractions import Fraction

from .errors import InvalidIndex
from .tower import (KIND_LINE, STYLE_CENTERED, STYLE_NONNEG, TAIL_DIVERGENT,
                    TAIL_GEOMETRIC, TowerConfig)

# the deepest level each preset is meant to be built to; past this the
# declared tail takes over in bounds
PRESET_DEPTH = {"threeadic": 10, "irregular-demo": 5}


def preset_config(name):
    if name == "threeadic":
        return TowerConfig(KIND_LINE, indices=[3] * 10, style=STYLE_NONNEG,
                           tail={"kind": TAIL_DIVERGENT})
    if name == "irregular-demo":
        return TowerConfig(KIND_LINE, indices=[15, 31, 63, 127, 255],
                           style=STYLE_CENTERED,
                           tail={"kind": TAIL_GEOMETRIC,
                                 "ratio": str(Fraction(1, 2))})
    raise InvalidIndex(f"no preset {name!r}; have {sorted(PRESET_DEPTH)}")


def preset_names():
    return sorted(PRESET_DEPTH)
