"""Report schema and (de)serialization of instances, models and covers.

Reports are JSON with sorted keys; wall-clock timing lives under the
single key "timing" so that byte-comparisons of reports may strip it.
Fractions serialize as "p/q" strings; slice sets as piece quadruples.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .boxes import Box, Component, FlowModel, Height
from .constants import ConstantsLedger
from .cover import LongBoxCover
from .slice1d import ArcSet, Piece, Slice1D, SliceAction, SliceMap
from .tree import ComplexInstance


# ---------------------------------------------------------------------------
# fractions and basic values
# ---------------------------------------------------------------------------


def frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 \
        else str(f.numerator)


def parse_frac(s) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# instance files: plain "key: value" lines
# ---------------------------------------------------------------------------


def parse_instance_text(text: str) -> ComplexInstance:
    fields: Dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"bad instance line {line!r}")
        key, val = line.split(":", 1)
        fields[key.strip()] = val.strip().strip('"')
    return ComplexInstance(
        generator_count=int(fields["generators"]),
        radius=int(fields["radius"]),
        base_metric=fields.get("base_metric", "graph"),
    )


def instance_text(instance: ComplexInstance) -> str:
    return (
        f"generators: {instance.generator_count}\n"
        f"radius: {instance.radius}\n"
        f'base_metric: "{instance.base_metric}"\n'
    )


# ---------------------------------------------------------------------------
# models and covers
# ---------------------------------------------------------------------------


def slice_to_json(s: Slice1D) -> dict:
    return {"length": frac_str(s.length), "wrap": s.wrap}


def slice_from_json(d: dict) -> Slice1D:
    return Slice1D(parse_frac(d["length"]), bool(d["wrap"]))


def action_to_json(a: SliceAction) -> dict:
    return {
        str(g): {"eps": a.maps[g].eps, "shift": frac_str(a.maps[g].shift)}
        for g in a.elements
    }


def action_from_json(s: Slice1D, d: dict) -> SliceAction:
    return SliceAction(
        s,
        {g: SliceMap(int(v["eps"]), parse_frac(v["shift"]))
         for g, v in d.items()},
    )


def component_to_json(c: Component) -> dict:
    out = {
        "kind": c.kind,
        "slice": slice_to_json(c.slice),
        "action": action_to_json(c.action),
        "window": [frac_str(c.window[0]), frac_str(c.window[1])],
    }
    if c.lattice is not None:
        out["lattice"] = frac_str(c.lattice)
    if c.circle is not None:
        out["circle"] = frac_str(c.circle)
        out["rotation_order"] = c.rotation_order
    return out


def component_from_json(d: dict) -> Component:
    s = slice_from_json(d["slice"])
    return Component(
        kind=d["kind"],
        slice=s,
        action=action_from_json(s, d["action"]),
        lattice=parse_frac(d["lattice"]) if "lattice" in d else None,
        circle=parse_frac(d["circle"]) if "circle" in d else None,
        rotation_order=int(d.get("rotation_order", 1)),
        window=(parse_frac(d["window"][0]), parse_frac(d["window"][1])),
    )


def model_to_json(m: FlowModel) -> dict:
    return {"components": [component_to_json(c) for c in m.components]}


def model_from_json(d: dict) -> FlowModel:
    return FlowModel([component_from_json(c) for c in d["components"]])


def arcs_to_json(a: ArcSet) -> list:
    return [[frac_str(p.lo), frac_str(p.hi), p.lo_open, p.hi_open]
            for p in a.pieces]


def arcs_from_json(s: Slice1D, data: list) -> ArcSet:
    return ArcSet(s, [Piece(parse_frac(lo), parse_frac(hi), bool(o1), bool(o2))
                      for lo, hi, o1, o2 in data])


def height_to_json(h: Height) -> dict:
    if h.breaks is None:
        return {"const": frac_str(h.value)}
    return {"breaks": [[frac_str(x), frac_str(y)] for x, y in h.breaks]}


def height_from_json(d: dict) -> Height:
    if "const" in d:
        return Height.constant(parse_frac(d["const"]))
    return Height.piecewise([(parse_frac(x), parse_frac(y))
                             for x, y in d["breaks"]])


def box_to_json(b: Box) -> dict:
    return {
        "component": b.component,
        "region": arcs_to_json(b.region),
        "height": height_to_json(b.height),
        "length": frac_str(b.length),
    }


def box_from_json(model: FlowModel, d: dict) -> Box:
    s = model.component(int(d["component"])).slice
    return Box(int(d["component"]), arcs_from_json(s, d["region"]),
               height_from_json(d["height"]), parse_frac(d["length"]))


def cover_to_json(cover: LongBoxCover) -> dict:
    return {
        "ledger": cover.ledger.as_dict(),
        "model": model_to_json(cover.model),
        "boxes": [box_to_json(b) for b in cover.boxes],
        "targets": [box_to_json(b) for b in cover.targets],
    }


def cover_from_json(d: dict) -> LongBoxCover:
    model = model_from_json(d["model"])
    led = d["ledger"]
    ledger = ConstantsLedger(
        int(led["k_G"]), int(led["d_X"]), parse_frac(led["alpha"]),
        parse_frac(led["epsilon"]), int(led["N_orbits"]),
    )
    return LongBoxCover(
        model, ledger,
        [box_from_json(model, b) for b in d["boxes"]],
        [box_from_json(model, b) for b in d["targets"]],
    )


# ---------------------------------------------------------------------------
# the report container
# ---------------------------------------------------------------------------


@dataclass
class Report:
    subcommand: str
    config: dict
    checks: List[dict] = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)

    def add(self, name: str, claim: str, ok: bool, **extra):
        entry = {"name": name, "claim": claim,
                 "verdict": "pass" if ok else "fail"}
        for key, val in extra.items():
            if isinstance(val, Fraction):
                val = frac_str(val)
            entry[key] = val
        self.checks.append(entry)

    @property
    def violations(self) -> int:
        return sum(1 for c in self.checks if c["verdict"] != "pass")

    def finish(self) -> dict:
        return {
            "tool": "flowcover",
            "subcommand": self.subcommand,
            "config": self.config,
            "checks": self.checks,
            "violations": self.violations,
            "timing": {"wall_time_s": round(time.perf_counter() -
                                            self.started, 6)},
        }

    def write(self, path: Optional[str]) -> dict:
        data = self.finish()
        text = dump_report(data)
        if path:
            with open(path, "w") as fh:
                fh.write(text)
        return data


def dump_report(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) \
        + "\n"


def _json_default(x):
    if isinstance(x, Fraction):
        return frac_str(x)
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"cannot serialize {type(x)}")


def strip_timing(text: str) -> str:
    data = json.loads(text)
    data.pop("timing", None)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
