"""Adaptive quadtree subdivision of parameter rectangles.

The engine is generic over claims: a claim evaluates one parameter box to
a ClaimResult and hands a continuation seed to the children of that box.
Only Undetermined boxes are refined, children always in (SW, SE, NW, NE)
order, so two runs with the same configuration produce bit-identical
certificates regardless of the worker count.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .intervals import ComplexBox, Interval
from .verify import ClaimResult, Status

__all__ = [
    "TOOL_VERSION",
    "Leaf",
    "ScanTree",
    "ParamCertificate",
    "adaptive_scan",
    "component_rollup",
    "serialize",
    "parse",
]

TOOL_VERSION = "tricert-0.1.0"


def _hex(x: float) -> str:
    return struct.pack(">d", x).hex()


def _unhex(s: str) -> float:
    return struct.unpack(">d", bytes.fromhex(s))[0]


@dataclass(frozen=True)
class Leaf:
    depth: int
    box: ComplexBox
    status: Status
    effort: int = 0


@dataclass
class ScanTree:
    """Leaves of an adaptive scan, tiling the root rectangle exactly."""

    root: ComplexBox
    claim: str
    config: dict
    leaves: list[Leaf]

    def rollup(self) -> Status:
        if all(leaf.status is Status.TRUE for leaf in self.leaves):
            return Status.TRUE
        if any(leaf.status is Status.FALSE for leaf in self.leaves):
            return Status.FALSE
        return Status.UNDETERMINED

    def leaves_with(self, status: Status) -> list[Leaf]:
        return [leaf for leaf in self.leaves if leaf.status is status]

    def leaf_at(self, z: complex) -> Leaf:
        """Deepest leaf containing the point; first in leaf order on ties."""
        best = None
        for leaf in self.leaves:
            if leaf.box.contains(z) and (best is None or leaf.depth > best.depth):
                best = leaf
        if best is None:
            raise ValueError(f"point {z} outside the scanned rectangle")
        return best


def adaptive_scan(
    rect: ComplexBox,
    claim,
    max_depth: int,
    min_width: float = 0.0,
    workers: int = 1,
    min_depth: int = 0,
) -> ScanTree:
    """Classify rect by the claim, refining Undetermined boxes quadwise.

    Boxes above min_depth are split without being evaluated.  Budget
    exhaustion leaves Undetermined leaves in place, never failure.
    Results are independent of the worker count: boxes are keyed by their
    quadtree path and assembled in path order.
    """
    if rect.is_empty:
        raise ValueError("cannot scan an empty rectangle")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if not 0 <= min_depth <= max_depth:
        raise ValueError("min_depth must lie in [0, max_depth]")
    leaves: dict[tuple, Leaf] = {}
    frontier = [((), rect, claim.initial_seed(rect))]

    def process(node):
        path, box, seed = node
        if len(path) < min_depth:
            return path, box, None, seed
        result, child_seed = claim.evaluate(box, seed)
        return path, box, result, child_seed

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            if pool is not None:
                outcomes = list(pool.map(process, frontier))
            else:
                outcomes = [process(node) for node in frontier]
            frontier = []
            for path, box, result, child_seed in outcomes:
                depth = len(path)
                refine = result is None or (
                    result.status is Status.UNDETERMINED
                    and depth < max_depth
                    and box.width() > min_width
                )
                if refine:
                    for quadrant, child in enumerate(box.quarter()):
                        frontier.append((path + (quadrant,), child, child_seed))
                else:
                    leaves[path] = Leaf(depth, box, result.status, result.effort)
    finally:
        if pool is not None:
            pool.shutdown()

    ordered = [leaves[path] for path in sorted(leaves)]
    config = {
        "max_depth": str(max_depth),
        "min_depth": str(min_depth),
        "min_width": repr(min_width),
    }
    config.update(claim.config())
    return ScanTree(root=rect, claim=claim.name, config=config, leaves=ordered)


def component_rollup(tree: ScanTree, status: Status = Status.TRUE) -> list[list[int]]:
    """Connected components of same-status leaves under 4-adjacency.

    Two leaves are adjacent when they share an edge segment of positive
    length.  Returns lists of indices into tree.leaves.
    """
    idx = [i for i, leaf in enumerate(tree.leaves) if leaf.status is status]
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    def sweep(lo_key, hi_key, span):
        starts: dict[float, list[int]] = {}
        ends: dict[float, list[int]] = {}
        for i in idx:
            b = tree.leaves[i].box
            starts.setdefault(lo_key(b), []).append(i)
            ends.setdefault(hi_key(b), []).append(i)
        for v, left in ends.items():
            right = starts.get(v)
            if not right:
                continue
            for i in left:
                si = span(tree.leaves[i].box)
                for j in right:
                    sj = span(tree.leaves[j].box)
                    if max(si.lo, sj.lo) < min(si.hi, sj.hi):
                        union(i, j)

    sweep(lambda b: b.re.lo, lambda b: b.re.hi, lambda b: b.im)
    sweep(lambda b: b.im.lo, lambda b: b.im.hi, lambda b: b.re)

    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


@dataclass
class ParamCertificate:
    """A scan tree plus the claim metadata that makes it reproducible."""

    claim: str
    root: ComplexBox
    config: dict
    leaves: list[Leaf]
    assumptions: list[str] = field(default_factory=list)
    tool: str = TOOL_VERSION

    @staticmethod
    def from_tree(tree: ScanTree, assumptions: list[str] | None = None) -> "ParamCertificate":
        return ParamCertificate(
            claim=tree.claim,
            root=tree.root,
            config=dict(tree.config),
            leaves=list(tree.leaves),
            assumptions=list(assumptions or []),
        )

    def rollup(self, acknowledge_assumptions: bool = False) -> Status:
        """TRUE only if every leaf is TRUE and any assumptions are acknowledged."""
        if self.assumptions and not acknowledge_assumptions:
            return Status.UNDETERMINED
        if all(leaf.status is Status.TRUE for leaf in self.leaves):
            return Status.TRUE
        if any(leaf.status is Status.FALSE for leaf in self.leaves):
            return Status.FALSE
        return Status.UNDETERMINED


def serialize(cert: ParamCertificate) -> bytes:
    """Line-oriented UTF-8 certificate; bit-exact round-trip via hex endpoints."""
    lines = [
        f"#claim={cert.claim}",
        "#rect=" + " ".join(
            _hex(v)
            for v in (cert.root.re.lo, cert.root.re.hi, cert.root.im.lo, cert.root.im.hi)
        ),
        f"#tool={cert.tool}",
    ]
    for key in sorted(cert.config):
        lines.append(f"#config.{key}={cert.config[key]}")
    for assumption in cert.assumptions:
        lines.append(f"#assumption={assumption}")
    lines.append(f"#leaves={len(cert.leaves)}")
    for index, leaf in enumerate(cert.leaves):
        b = leaf.box
        lines.append(
            f"{leaf.depth} {index} {leaf.status.value} "
            f"{_hex(b.re.lo)} {_hex(b.re.hi)} {_hex(b.im.lo)} {_hex(b.im.hi)}"
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse(data: bytes) -> ParamCertificate:
    claim = tool = None
    rect = None
    config: dict = {}
    assumptions: list[str] = []
    leaves: list[Leaf] = []
    declared = None
    for line in data.decode("utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key == "claim":
                claim = value
            elif key == "rect":
                a, b, c, d = (_unhex(tok) for tok in value.split())
                rect = ComplexBox(Interval(a, b), Interval(c, d))
            elif key == "tool":
                tool = value
            elif key == "leaves":
                declared = int(value)
            elif key == "assumption":
                assumptions.append(value)
            elif key.startswith("config."):
                config[key[len("config."):]] = value
            else:
                raise ValueError(f"unknown header key: {key}")
            continue
        depth, _index, token, a, b, c, d = line.split()
        leaves.append(
            Leaf(
                int(depth),
                ComplexBox(
                    Interval(_unhex(a), _unhex(b)), Interval(_unhex(c), _unhex(d))
                ),
                Status(token),
            )
        )
    if claim is None or rect is None:
        raise ValueError("certificate missing claim or rect header")
    if declared is not None and declared != len(leaves):
        raise ValueError(f"leaf count mismatch: header {declared}, found {len(leaves)}")
    return ParamCertificate(
        claim=claim,
        root=rect,
        config=config,
        leaves=leaves,
        assumptions=assumptions,
        tool=tool or TOOL_VERSION,
    )
