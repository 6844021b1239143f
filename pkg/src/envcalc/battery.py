"""Named test-function battery: expression files shipped as package data.

Each entry records the structural facts tests rely on (dimension, sign,
convexity class, coercivity, lower semicontinuity).  `property_suite`
lists the ten entries used by the envelope property suite; `spike` is
kept out of it because its grid infimum lives off the node lattice (the
continuum infimum 0 is not a sampled value), which makes the discretized
infimum-preservation identity fail by one level-gap by construction.
"""

from dataclasses import dataclass
from importlib import resources

from .core import FunctionSpec
from .funcdsl import spec_from_source

__all__ = ["BatteryEntry", "ENTRIES", "load_spec", "entry", "property_suite", "nonneg_1d"]


@dataclass(frozen=True)
class BatteryEntry:
    name: str
    dim: int
    nonneg: bool
    convex: bool
    level_convex: bool
    lsc: bool
    coercive: bool
    description: str


ENTRIES = {
    e.name: e
    for e in [
        BatteryEntry("abs1d", 1, True, True, True, True, True, "absolute value |x|"),
        BatteryEntry("doublewell", 1, True, False, False, True, True, "double well (x^2-1)^2"),
        BatteryEntry("spike", 1, True, False, False, False, True, "|x| with value 1 at the origin"),
        BatteryEntry("dots1d", 1, True, False, False, True, True, "0 on {-1, 1}, +inf elsewhere"),
        BatteryEntry("indicator_box", 1, True, True, True, True, True, "indicator of [-1, 1] (0 inside, +inf outside)"),
        BatteryEntry("chi_outside", 1, True, False, True, True, False, "0 on [-1, 1], 1 outside"),
        BatteryEntry("wedge", 1, True, False, True, True, True, "|x| inside [-1, 1], |x|+1 outside (jump, level convex)"),
        BatteryEntry("maxlin", 1, True, True, True, True, False, "max(x, 0)"),
        BatteryEntry("chi2d", 2, True, False, False, True, False, "0 on the x-axis and at (0,1), 1 elsewhere"),
        BatteryEntry("cone2d", 2, True, True, True, True, True, "Euclidean norm |xi|"),
        BatteryEntry("well2d", 2, True, False, False, True, True, "radial double well (|xi|^2-1)^2"),
    ]
}


def source(name: str) -> str:
    if name not in ENTRIES:
        raise KeyError(f"unknown battery entry {name!r}; known: {', '.join(sorted(ENTRIES))}")
    return (resources.files("envcalc") / "battery_data" / f"{name}.fn").read_text(encoding="utf-8").strip()


def entry(name: str) -> BatteryEntry:
    if name not in ENTRIES:
        raise KeyError(f"unknown battery entry {name!r}; known: {', '.join(sorted(ENTRIES))}")
    return ENTRIES[name]


def load_spec(name: str) -> FunctionSpec:
    e = entry(name)
    return spec_from_source(source(name), name=name, coercive=e.coercive)


def property_suite() -> list[str]:
    return [n for n in ENTRIES if n != "spike"]


def nonneg_1d() -> list[str]:
    return [n for n, e in ENTRIES.items() if e.dim == 1 and e.nonneg]
