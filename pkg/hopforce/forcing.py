#!/usr/bin/env python3
"""
Color change rules and the bookkeeping of a forcing process

Three rules are supported: hopping (H), standard zero forcing (Z) and the
combined rule floorZ where each force may be either kind. A force set is
the unordered set of forces of some chronological list; its greedy round
decomposition gives the propagation time of that set.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

from hopforce.errors import ForcingError, GraphError
from hopforce.graph import Graph, bits, popcount, to_mask


class Rule(str, Enum):
    H = "H"
    Z = "Z"
    FLOORZ = "floorZ"

    @classmethod
    def parse(cls, text):
        if isinstance(text, Rule):
            return text
        for rule in cls:
            if rule.value.lower() == str(text).lower():
                return rule
        raise GraphError(f"unknown rule {text!r}; use H, Z or floorZ")


class Status(str, Enum):
    WHITE = "white"
    DORMANT = "dormant"
    ACTIVE = "active"
    EXTINCT = "extinct"


@dataclass(frozen=True)
class ForcingState:
    blue: int
    extinct: int = 0

    @classmethod
    def start(cls, base):
        return cls(blue=base, extinct=0)

    def __post_init__(self):
        if self.extinct & ~self.blue:
            raise ForcingError("extinct vertices must be blue")


@dataclass(frozen=True, order=True)
class Force:
    src: int
    dst: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ForcingError(f"vertex {self.src} cannot force itself")

    def __str__(self):
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class ForceSet:
    base: int
    forces: tuple = ()

    def __post_init__(self):
        forces = tuple(sorted(set(self.forces)))
        object.__setattr__(self, "forces", forces)
        sources = [f.src for f in forces]
        targets = [f.dst for f in forces]
        if len(set(sources)) != len(sources):
            raise ForcingError("a vertex performs more than one force")
        if len(set(targets)) != len(targets):
            raise ForcingError("a vertex is forced more than once")
        if to_mask(targets) & self.base:
            raise ForcingError("a vertex of the base set is forced")

    @property
    def colored(self):
        return self.base | to_mask(f.dst for f in self.forces)


@dataclass(frozen=True)
class RoundSchedule:
    """rounds[0] is the base, rounds[t] the vertices forced at time t"""
    rounds: tuple
    round_forces: tuple = field(default=())

    @property
    def pt(self):
        return len(self.rounds) - 1

    @property
    def base(self):
        return self.rounds[0]

    def blue_after(self, i):
        mask = 0
        for r in self.rounds[:i + 1]:
            mask |= r
        return mask

    def forces(self):
        return [f for batch in self.round_forces for f in batch]

    def force_set(self):
        return ForceSet(self.base, tuple(self.forces()))


# validity

def white_mask(g, s):
    return g.full & ~s.blue


def is_hop_force(g, s, f):
    blue = s.blue
    return (blue >> f.src & 1 and not s.extinct >> f.src & 1
            and not blue >> f.dst & 1 and g.adj[f.src] & ~blue == 0)


def is_z_force(g, s, f):
    return bool(s.blue >> f.src & 1) and g.adj[f.src] & ~s.blue == 1 << f.dst


def force_kind(g, s, f, rule):
    """'hop' or 'z' for a valid force under the rule, None otherwise"""
    if rule is not Rule.Z and is_hop_force(g, s, f):
        return "hop"
    if rule is not Rule.H and is_z_force(g, s, f):
        return "z"
    return None


def vertex_status(g, s, v, rule):
    if not s.blue >> v & 1:
        return Status.WHITE
    if s.extinct >> v & 1:
        return Status.EXTINCT
    white_nbrs = g.adj[v] & ~s.blue
    hop_active = white_nbrs == 0 and white_mask(g, s) != 0
    z_active = popcount(white_nbrs) == 1
    if rule is Rule.H:
        active = hop_active
    elif rule is Rule.Z:
        active = z_active
    else:
        active = hop_active or z_active
    return Status.ACTIVE if active else Status.DORMANT


def valid_forces(g, s, rule):
    white = white_mask(g, s)
    forces = set()
    for v in bits(s.blue):
        white_nbrs = g.adj[v] & ~s.blue
        if rule is not Rule.H and popcount(white_nbrs) == 1:
            forces.add(Force(v, white_nbrs.bit_length() - 1))
        if rule is not Rule.Z and white_nbrs == 0 and not s.extinct >> v & 1:
            forces.update(Force(v, w) for w in bits(white))
    return forces


def apply_force(g, s, f, rule):
    if force_kind(g, s, f, rule) is None:
        raise ForcingError(f"force {f} is not valid under rule {rule.value}")
    return ForcingState(blue=s.blue | 1 << f.dst, extinct=s.extinct | 1 << f.src)


def execute_chronological(g, base, forces, rule):
    state = ForcingState.start(base)
    for index, f in enumerate(forces):
        if force_kind(g, state, f, rule) is None:
            raise ForcingError(f"force {f} is not valid under rule {rule.value}", index=index)
        state = ForcingState(blue=state.blue | 1 << f.dst, extinct=state.extinct | 1 << f.src)
    return state


def round_decompose(g, fs, rule):
    """Greedy earliest schedule: every force runs in the first round it is valid"""
    pending = list(fs.forces)
    state = ForcingState.start(fs.base)
    rounds = [fs.base]
    round_forces = [()]
    while pending:
        ready = [f for f in pending if force_kind(g, state, f, rule) is not None]
        if not ready:
            raise ForcingError(f"force set is not linearizable: {len(pending)} force(s) never become valid")
        pending = [f for f in pending if f not in ready]
        targets = to_mask(f.dst for f in ready)
        state = ForcingState(blue=state.blue | targets, extinct=state.extinct | to_mask(f.src for f in ready))
        rounds.append(targets)
        round_forces.append(tuple(ready))
    schedule = RoundSchedule(rounds=tuple(rounds), round_forces=tuple(round_forces))
    # the round order is also a chronological list
    execute_chronological(g, fs.base, schedule.forces(), rule)
    return schedule


def z_closure(g, blue):
    """Final coloring of standard zero forcing, all possible forces each round"""
    while True:
        reach = 0
        for v in bits(blue):
            white_nbrs = g.adj[v] & ~blue
            if popcount(white_nbrs) == 1:
                reach |= white_nbrs
        if not reach:
            return blue
        blue |= reach


# reversal and augmentation

def _require_complete(g, fs):
    if fs.colored != g.full:
        raise ForcingError("force set does not color every vertex")


def terminus(g, fs):
    _require_complete(g, fs)
    return g.full & ~to_mask(f.src for f in fs.forces)


def reverse(g, fs):
    _require_complete(g, fs)
    return ForceSet(terminus(g, fs), tuple(Force(f.dst, f.src) for f in fs.forces))


def augment(g, fs):
    """Add the edge uv for every force u->v; the base then Z-forces the result"""
    extra = []
    for f in fs.forces:
        if g.has_edge(f.src, f.dst):
            raise ForcingError(f"force {f} joins adjacent vertices, not a hop")
        extra.append((f.src, f.dst))
    logging.debug(f"augmenting with {len(extra)} edge(s)")
    return Graph.from_edges(g.n, g.edges() + extra, max_order=None)


# serialization

def schedule_to_dict(schedule, rule):
    forces = [{"src": f.src, "dst": f.dst, "round": t}
              for t, batch in enumerate(schedule.round_forces) for f in sorted(batch)]
    return {
        "base": sorted(bits(schedule.base)),
        "forces": forces,
        "rule": Rule.parse(rule).value,
        "pt": schedule.pt,
    }


def schedule_from_dict(g, data):
    """Rebuild and re-validate a schedule from its JSON form"""
    rule = Rule.parse(data["rule"])
    fs = ForceSet(to_mask(data["base"]), tuple(Force(f["src"], f["dst"]) for f in data["forces"]))
    schedule = round_decompose(g, fs, rule)
    return schedule, rule
