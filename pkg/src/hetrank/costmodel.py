"""Bill-of-materials, power and cost comparison of receiver architectures."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

COMPONENT_CLASSES = ("mixer", "adc", "lna")


class Architecture(enum.Enum):
    HYBRID = "Hybrid"
    PROPOSED = "Proposed"
    FULLY_DIGITAL = "Fully digital"


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    unit_cost: float   # EUR
    unit_power: float  # W

    def __post_init__(self):
        if self.unit_cost < 0 or self.unit_power < 0:
            raise ValueError(f"{self.name}: cost and power must be non-negative")


@dataclass(frozen=True)
class ArchitectureBOM:
    architecture: Architecture
    n_antennas: int
    n_rf_chains: int
    mixers: int
    adcs: int
    lnas: int

    def counts(self) -> dict[str, int]:
        return {"mixer": self.mixers, "adc": self.adcs, "lna": self.lnas}


def bom(architecture: Architecture, n_antennas: int, n_chains: int = 2) -> ArchitectureBOM:
    """Count the components of an architecture.

    Every RF chain needs an I/Q pair of mixers and ADCs.  The proposed design
    down-converts every antenna individually (2N mixers, like a fully digital
    receiver) but keeps the ADC count of the hybrid design.
    """
    if n_antennas < 1 or n_chains < 1:
        raise ValueError("need at least one antenna and one RF chain")
    if architecture is Architecture.HYBRID:
        mixers, adcs = 2 * n_chains, 2 * n_chains
    elif architecture is Architecture.PROPOSED:
        mixers, adcs = 2 * n_antennas, 2 * n_chains
    else:
        mixers, adcs = 2 * n_antennas, 2 * n_antennas
    return ArchitectureBOM(architecture, n_antennas, n_chains, mixers, adcs, n_antennas)


def parse_catalog(text: str) -> dict[str, ComponentSpec]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    catalog = {}
    for row in csv.DictReader(io.StringIO("\n".join(lines))):
        try:
            spec = ComponentSpec(row["name"].strip(), float(row["unit_cost_eur"]),
                                 float(row["unit_power_w"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed catalog record {row!r}: {exc}") from exc
        catalog[spec.name] = spec
    return catalog


def load_catalog(path: str | Path | None = None) -> dict[str, ComponentSpec]:
    """Read a catalog CSV (``name,unit_cost_eur,unit_power_w``); default is the bundled one."""
    if path is None:
        text = resources.files("hetrank").joinpath("data/catalog.csv").read_text()
    else:
        text = Path(path).read_text()
    return parse_catalog(text)


def _lookup(catalog: dict[str, ComponentSpec], name: str) -> ComponentSpec:
    try:
        return catalog[name]
    except KeyError:
        raise KeyError(f"catalog has no entry for {name!r}") from None


def power_table(b: ArchitectureBOM, catalog: dict[str, ComponentSpec]) -> dict[str, float]:
    """Power per component class and ``total``, in W."""
    table = {name: count * _lookup(catalog, name).unit_power for name, count in b.counts().items()}
    table["total"] = sum(table.values())
    return table


def cost_table(b: ArchitectureBOM, catalog: dict[str, ComponentSpec]) -> dict[str, float]:
    """Cost per component class and ``total``, in EUR rounded to the cent."""
    table = {name: round(count * _lookup(catalog, name).unit_cost, 2)
             for name, count in b.counts().items()}
    table["total"] = round(sum(table.values()), 2)
    return table


def adc_datarate(n_adcs: int, sample_rate: float, resolution: int) -> float:
    """Raw ADC output in bit/s."""
    if n_adcs <= 0 or sample_rate <= 0 or resolution <= 0:
        raise ValueError("ADC count, sample rate and resolution must be positive")
    return n_adcs * sample_rate * resolution


def format_watts(w: float) -> str:
    return f"{w * 1e3:.0f} mW" if w < 1 else f"{w:.2f} W"


def report(n_antennas: int = 32, n_chains: int = 2, catalog=None,
           sample_rate: float = 500e6, resolution: int = 12) -> str:
    """Text tables of component counts, power, cost and ADC data rate."""
    catalog = catalog or load_catalog()
    boms = [bom(a, n_antennas, n_chains) for a in Architecture]
    out = [f"Components (N={n_antennas}, K={n_chains})",
           f"{'Architecture':<14}{'Mixers':>8}{'ADCs':>8}{'LNAs':>8}"]
    out += [f"{b.architecture.value:<14}{b.mixers:>8}{b.adcs:>8}{b.lnas:>8}" for b in boms]

    out += ["", "Power", f"{'Architecture':<14}{'Mixers':>10}{'ADCs':>10}{'LNAs':>10}{'Total':>10}"]
    for b in boms:
        p = power_table(b, catalog)
        out.append(f"{b.architecture.value:<14}"
                   + "".join(f"{format_watts(p[k]):>10}" for k in (*COMPONENT_CLASSES, "total")))

    out += ["", "Cost (EUR)", f"{'Architecture':<14}{'Mixers':>10}{'ADCs':>10}{'LNAs':>10}{'Total':>10}"]
    for b in boms:
        c = cost_table(b, catalog)
        out.append(f"{b.architecture.value:<14}"
                   + "".join(f"{c[k]:>10.2f}" for k in (*COMPONENT_CLASSES, "total")))

    out += ["", f"ADC data rate ({sample_rate / 1e6:g} Msps, {resolution} bit)"]
    for b in boms:
        out.append(f"{b.architecture.value:<14}{adc_datarate(b.adcs, sample_rate, resolution) / 1e9:>8g} Gbps")
    return "\n".join(out)
