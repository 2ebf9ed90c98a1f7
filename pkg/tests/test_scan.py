"""Adaptive subdivision, component rollup, and certificate round-trips."""

import hashlib
import struct

import pytest

from tricert.intervals import ComplexBox, Interval
from tricert.scan import (
    Leaf,
    ParamCertificate,
    ScanTree,
    adaptive_scan,
    component_rollup,
    parse,
    serialize,
)
from tricert.verify import ClaimResult, Status

UNIT = ComplexBox(Interval(0.0, 1.0), Interval(0.0, 1.0))


class _GridClaim:
    """Synthetic claim: refine to target_depth, then classify by a grid
    function of the box midpoint.  Deterministic and cheap."""

    def __init__(self, target_depth, classify):
        self.target_depth = target_depth
        self.classify = classify
        self.name = "synthetic-grid"
        self.calls = 0

    def config(self):
        return {"target_depth": str(self.target_depth)}

    def initial_seed(self, rect):
        return None

    def evaluate(self, box, seed):
        self.calls += 1
        if box.width() > (1.0 / 2 ** self.target_depth) * 1.001:
            return ClaimResult(Status.UNDETERMINED), None
        return ClaimResult(self.classify(box.midpoint())), None


def _checkerboard(depth):
    def classify(z):
        i = int(z.real * 2 ** depth)
        j = int(z.imag * 2 ** depth)
        return Status.TRUE if (i + j) % 2 == 0 else Status.FALSE

    return _GridClaim(depth, classify)


def _flood_fill_components(cells):
    """Brute-force 4-neighbor component count over a set of (i, j) cells."""
    remaining = set(cells)
    count = 0
    while remaining:
        count += 1
        stack = [remaining.pop()]
        while stack:
            i, j = stack.pop()
            for nb in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                if nb in remaining:
                    remaining.remove(nb)
                    stack.append(nb)
    return count


class TestAdaptiveScan:
    def test_depth_zero_single_leaf(self):
        claim = _GridClaim(0, lambda z: Status.TRUE)
        tree = adaptive_scan(UNIT, claim, 0)
        assert len(tree.leaves) == 1
        assert tree.rollup() is Status.TRUE

    def test_budget_exhaustion_keeps_undetermined(self):
        claim = _GridClaim(5, lambda z: Status.TRUE)
        tree = adaptive_scan(UNIT, claim, 2)
        assert tree.rollup() is Status.UNDETERMINED
        assert all(leaf.depth == 2 for leaf in tree.leaves)

    def test_min_depth_splits_without_evaluating(self):
        claim = _GridClaim(0, lambda z: Status.TRUE)
        tree = adaptive_scan(UNIT, claim, 3, min_depth=2)
        assert claim.calls == 16
        assert len(tree.leaves) == 16
        assert all(leaf.depth == 2 for leaf in tree.leaves)

    def test_min_depth_bounds_checked(self):
        claim = _GridClaim(0, lambda z: Status.TRUE)
        with pytest.raises(ValueError):
            adaptive_scan(UNIT, claim, 2, min_depth=3)

    def test_tiling_is_exact(self):
        tree = adaptive_scan(UNIT, _checkerboard(3), 3)
        area = sum(
            (leaf.box.re.hi - leaf.box.re.lo) * (leaf.box.im.hi - leaf.box.im.lo)
            for leaf in tree.leaves
        )
        assert area == 1.0
        hull = tree.leaves[0].box
        for leaf in tree.leaves[1:]:
            hull = hull.hull(leaf.box)
        assert hull == UNIT

    def test_leaf_at_prefers_deepest(self):
        tree = adaptive_scan(UNIT, _checkerboard(2), 2)
        leaf = tree.leaf_at(0.1 + 0.1j)
        assert leaf.box.contains(0.1 + 0.1j)
        with pytest.raises(ValueError):
            tree.leaf_at(5 + 5j)

    def test_determinism_across_worker_counts(self):
        digests = []
        for workers in (1, 4):
            tree = adaptive_scan(UNIT, _checkerboard(4), 4, workers=workers)
            cert = ParamCertificate.from_tree(tree)
            digests.append(hashlib.sha256(serialize(cert)).hexdigest())
        assert digests[0] == digests[1]


class TestComponentRollup:
    def test_all_true_single_component(self):
        claim = _GridClaim(2, lambda z: Status.TRUE)
        tree = adaptive_scan(UNIT, claim, 2)
        assert len(component_rollup(tree, Status.TRUE)) == 1

    def test_checkerboard_matches_flood_fill(self):
        for depth in (2, 3):
            tree = adaptive_scan(UNIT, _checkerboard(depth), depth)
            components = component_rollup(tree, Status.TRUE)
            cells = set()
            for leaf in tree.leaves_with(Status.TRUE):
                m = leaf.box.midpoint()
                cells.add((int(m.real * 2 ** depth), int(m.imag * 2 ** depth)))
            assert len(components) == _flood_fill_components(cells)
            # corner contact does not merge diagonal neighbors
            assert len(components) == 2 ** (2 * depth - 1)

    def test_mixed_depth_adjacency(self):
        # one deep TRUE leaf next to a shallow TRUE leaf sharing an edge
        left = Leaf(2, ComplexBox(Interval(0.0, 0.25), Interval(0.0, 0.25)), Status.TRUE)
        right = Leaf(1, ComplexBox(Interval(0.25, 0.5), Interval(0.0, 0.5)), Status.TRUE)
        far = Leaf(1, ComplexBox(Interval(0.5, 1.0), Interval(0.75, 1.0)), Status.TRUE)
        tree = ScanTree(UNIT, "synthetic", {}, [left, right, far])
        assert len(component_rollup(tree, Status.TRUE)) == 2


class TestCertificates:
    def _sample(self):
        tree = adaptive_scan(UNIT, _checkerboard(3), 3)
        return ParamCertificate.from_tree(tree, assumptions=["heuristic seed"])

    def test_round_trip_is_byte_identical(self):
        cert = self._sample()
        data = serialize(cert)
        again = serialize(parse(data))
        assert data == again

    def test_round_trip_preserves_content(self):
        cert = self._sample()
        back = parse(serialize(cert))
        assert back.claim == cert.claim
        assert back.root == cert.root
        assert back.assumptions == cert.assumptions
        assert back.config == cert.config
        assert len(back.leaves) == len(cert.leaves)
        for a, b in zip(back.leaves, cert.leaves):
            assert a.depth == b.depth
            assert a.box == b.box
            assert a.status is b.status

    def test_hex_endpoints_are_bit_exact(self):
        cert = self._sample()
        back = parse(serialize(cert))
        for a, b in zip(back.leaves, cert.leaves):
            assert struct.pack(">d", a.box.re.lo) == struct.pack(">d", b.box.re.lo)

    def test_leaf_count_mismatch_detected(self):
        data = serialize(self._sample()).decode()
        lines = data.splitlines()
        body = [ln for ln in lines if not ln.startswith("#")]
        tampered = "\n".join(
            ln for ln in lines if ln != body[-1]
        ) + "\n"
        with pytest.raises(ValueError):
            parse(tampered.encode())

    def test_unknown_header_rejected(self):
        with pytest.raises(ValueError):
            parse(b"#claim=x\n#mystery=1\n")

    def test_assumptions_gate_rollup(self):
        claim = _GridClaim(1, lambda z: Status.TRUE)
        tree = adaptive_scan(UNIT, claim, 1)
        cert = ParamCertificate.from_tree(tree, assumptions=["needs a human look"])
        assert cert.rollup() is Status.UNDETERMINED
        assert cert.rollup(acknowledge_assumptions=True) is Status.TRUE
