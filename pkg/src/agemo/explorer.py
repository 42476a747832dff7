"""Seeded walks through components of the ℧-quiver.

Vertices are iso classes of indecomposable non-projective modules and there
is an arrow ``℧X -> X`` for every torsionless ``X``. Following arrows is taking
syzygies; walking against them is taking cosyzygies. A walk records the chain
in arrow order, so the first vertex is the source-most one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .catalog import name_module
from .config import DEFAULT_SEED, DEFAULT_WALK_HORIZON
from .homological import cosyzygy, first_nonvanishing_ext, is_projective, syzygy
from .modules import Module, is_indecomposable, is_isomorphic, is_reflexive, is_torsionless

FORMATS = ("json", "dot", "text")


class WalkHalt(Exception):
    """A step could not be decided (indecomposability or isomorphism unknown)."""


class WalkError(ValueError):
    pass


@dataclass
class Vertex:
    name: str
    dim: int
    torsionless: bool
    reflexive: bool
    semi_gp_horizon: int  # Ext^i(M, A) = 0 for 1 <= i <= this value
    projective_halt: bool = False

    def as_dict(self):
        return {"name": self.name, "dim": self.dim, "torsionless": self.torsionless,
                "reflexive": self.reflexive, "semi_gp_horizon": self.semi_gp_horizon,
                "projective_halt": self.projective_halt}


@dataclass
class ComponentReport:
    """Outcome of :func:`walk_component`.

    ``shape`` is ``A_n`` (both ends found), ``Ã_n`` (cycle with ``n+1``
    vertices), ``open-left`` (a source was found, the syzygy direction hit
    the horizon), ``open-right`` (a sink was found, the cosyzygy direction
    hit the horizon) or ``open-both``. For closed shapes ``horizon`` is the
    number of steps the walk actually needed, so re-walking with a larger
    budget gives the same report.
    """

    shape: str
    horizon: int
    closed: bool
    vertices: List[Vertex]
    arrows: List[Tuple[str, str]]
    halts: List[str]
    modules: List[Module] = field(default_factory=list, compare=False, repr=False)

    def as_dict(self):
        return {"shape": self.shape, "horizon": self.horizon, "closed": self.closed,
                "vertices": [v.as_dict() for v in self.vertices],
                "arrows": [list(a) for a in self.arrows], "halts": list(self.halts)}

    def vertex(self, name: str) -> Vertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.vertices]

    def sources(self) -> List[str]:
        ins = {b for _, b in self.arrows}
        return [v.name for v in self.vertices if v.name not in ins]

    def sinks(self) -> List[str]:
        outs = {a for a, _ in self.arrows}
        return [v.name for v in self.vertices if v.name not in outs]


# ---------------------------------------------------------------------------
# single steps

def _check_start(m: Module, seed: int):
    if m.dim == 0 or is_projective(m):
        raise WalkError("start module must be non-projective")
    verdict = is_indecomposable(m, seed)
    if verdict.status == "unknown":
        raise WalkHalt(f"indecomposability unknown: {verdict.reason}")
    if verdict.status != "indecomposable":
        raise WalkError("start module must be indecomposable")


def _same(a: Module, b: Module, seed: int) -> bool:
    v = is_isomorphic(a, b, seed=seed)
    if v.status == "unknown":
        raise WalkHalt(f"isomorphism unknown: {v.reason}")
    return v.status == "isomorphic"


def step_forward(m: Module, seed: int = DEFAULT_SEED) -> Optional[Module]:
    """``Omega m`` when ``Ext^1(m, A) = 0`` (an arrow ``m -> Omega m``), else ``None``."""
    if first_nonvanishing_ext(m, 1, seed) is not None:
        return None
    n = syzygy(m)
    if n.dim == 0 or is_projective(n):
        raise WalkHalt("syzygy is projective")
    if is_indecomposable(n, seed).status != "indecomposable":
        raise WalkHalt("syzygy not known to be indecomposable")
    if not _same(cosyzygy(n), m, seed):
        raise WalkHalt("cosyzygy of the syzygy does not return the module")
    return n


def step_backward(m: Module, seed: int = DEFAULT_SEED) -> Optional[Module]:
    """``℧ m`` when ``m`` is torsionless (an arrow ``℧m -> m``), else ``None``."""
    if not is_torsionless(m):
        return None
    n = cosyzygy(m)
    if n.dim == 0 or is_projective(n):
        raise WalkHalt("cosyzygy is projective")
    if is_indecomposable(n, seed).status != "indecomposable":
        raise WalkHalt("cosyzygy not known to be indecomposable")
    if not _same(syzygy(n), m, seed):
        raise WalkHalt("syzygy of the cosyzygy does not return the module")
    return n


# ---------------------------------------------------------------------------
# walking

def _label(m: Module, neighbour: Optional[str], op: str) -> str:
    name = name_module(m)
    if name:
        return name
    if neighbour:
        return f"{op}({neighbour})"
    return f"X{m.dim}:{m.digest()}"


def _vertex(m: Module, name: str, ext_horizon: int, seed: int) -> Vertex:
    bad = first_nonvanishing_ext(m, ext_horizon, seed)
    return Vertex(name, m.dim, is_torsionless(m), is_reflexive(m),
                  ext_horizon if bad is None else bad - 1)


def walk_component(m: Module, horizon: int = DEFAULT_WALK_HORIZON, seed: int = DEFAULT_SEED,
                   ext_horizon: Optional[int] = None) -> ComponentReport:
    """Walk the component of ``m`` up to ``horizon`` steps in each direction.

    Steps alternate between the syzygy and the cosyzygy direction. Every new
    module is compared with all modules seen so far; meeting the far end of
    the chain closes a cycle. ``ext_horizon`` (default ``horizon``) bounds
    the Ext computation behind the ``semi_gp_horizon`` flag.
    """
    if horizon < 1:
        raise WalkError("horizon must be >= 1")
    ext_horizon = horizon if ext_horizon is None else ext_horizon
    halts: List[str] = []
    try:
        _check_start(m, seed)
    except WalkHalt as exc:
        name = _label(m, None, "")
        return ComponentReport("unknown", 0, False, [_vertex(m, name, ext_horizon, seed)], [],
                               [str(exc)], [m])
    chain = [m]
    names = [name_module(m) or m.name or f"X{m.dim}:{m.digest()}"]
    fwd_done = back_done = False  # end found or budget used
    sink = source = False
    cycle = False
    steps = {"fwd": 0, "back": 0}
    unknown = False

    def seen(n: Module) -> Optional[int]:
        for k, x in enumerate(chain):
            if _same(n, x, seed):
                return k
        return None

    try:
        while not (fwd_done and back_done) and not cycle:
            if not fwd_done:
                if steps["fwd"] == horizon:
                    fwd_done = True
                    halts.append(f"horizon: {horizon} steps in the syzygy direction")
                else:
                    n = step_forward(chain[-1], seed)
                    if n is None:
                        fwd_done = sink = True
                        halts.append(f"sink: Ext^1({names[-1]}, A) != 0")
                    else:
                        steps["fwd"] += 1
                        k = seen(n)
                        if k is None:
                            chain.append(n)
                            names.append(_label(n, names[-1], "Ω"))
                        elif k == 0:
                            cycle = True
                            halts.append(f"cycle: Ω({names[-1]}) ≅ {names[0]}")
                        else:
                            raise WalkHalt(f"Ω({names[-1]}) ≅ {names[k]} breaks the chain")
            if cycle:
                break
            if not back_done:
                if steps["back"] == horizon:
                    back_done = True
                    halts.append(f"horizon: {horizon} steps in the cosyzygy direction")
                else:
                    n = step_backward(chain[0], seed)
                    if n is None:
                        back_done = source = True
                        halts.append(f"source: {names[0]} is not torsionless")
                    else:
                        steps["back"] += 1
                        k = seen(n)
                        if k is None:
                            chain.insert(0, n)
                            names.insert(0, _label(n, names[0], "℧"))
                        elif k == len(chain) - 1:
                            cycle = True
                            halts.append(f"cycle: ℧({names[0]}) ≅ {names[-1]}")
                        else:
                            raise WalkHalt(f"℧({names[0]}) ≅ {names[k]} breaks the chain")
    except WalkHalt as exc:
        halts.append(str(exc))
        unknown = True

    names = _unique(names)
    arrows = [(names[i], names[i + 1]) for i in range(len(chain) - 1)]
    n = len(chain)
    if unknown:
        shape, closed = "unknown", False
    elif cycle:
        arrows.append((names[-1], names[0]))
        shape, closed = f"Ã_{n - 1}", True
    elif sink and source:
        shape, closed = f"A_{n}", True
    elif source:
        shape, closed = "open-left", False
    elif sink:
        shape, closed = "open-right", False
    else:
        shape, closed = "open-both", False
    used = horizon if not closed else max(steps["fwd"], steps["back"])
    if closed:
        # budget-independent record
        halts = [h for h in halts if not h.startswith("horizon:")]
    vertices = [_vertex(x, nm, ext_horizon, seed) for x, nm in zip(chain, names)]
    return ComponentReport(shape, used, closed, vertices, arrows, halts, chain)


def _unique(names: List[str]) -> List[str]:
    out = []
    for nm in names:
        cand, k = nm, 2
        while cand in out:
            cand = f"{nm}#{k}"
            k += 1
        out.append(cand)
    return out


# ---------------------------------------------------------------------------
# rendering

def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_report(r: ComponentReport, fmt: str = "json") -> bytes:
    """JSON, DOT (arrows ``℧X -> X``) or a plain text table."""
    if fmt == "json":
        return (json.dumps(r.as_dict(), indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "dot":
        lines = ["digraph component {", "  rankdir=LR;",
                 f"  label={_dot_id(f'{r.shape} (horizon {r.horizon})')};"]
        for v in r.vertices:
            lines.append(f"  {_dot_id(v.name)} [label={_dot_id(f'{v.name}  dim {v.dim}')}];")
        for a, b in r.arrows:
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "text":
        width = max([len(v.name) for v in r.vertices] + [6])
        lines = [f"shape    {r.shape}", f"horizon  {r.horizon}", f"closed   {r.closed}", "",
                 f"{'module':<{width}}  dim  torsionless  reflexive  semi-GP"]
        for v in r.vertices:
            lines.append(f"{v.name:<{width}}  {v.dim:>3}  {str(v.torsionless):<11}  "
                         f"{str(v.reflexive):<9}  {v.semi_gp_horizon}")
        lines.append("")
        lines.extend(f"{a} -> {b}" for a, b in r.arrows)
        lines.extend(f"halt: {h}" for h in r.halts)
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def report_from_json(data) -> ComponentReport:
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    verts = [Vertex(v["name"], v["dim"], v["torsionless"], v["reflexive"], v["semi_gp_horizon"],
                    v["projective_halt"]) for v in data["vertices"]]
    return ComponentReport(data["shape"], data["horizon"], data["closed"], verts,
                           [tuple(a) for a in data["arrows"]], list(data["halts"]))
