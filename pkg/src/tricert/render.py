"""Escape-time images and rasterization of scan trees.

Escape rendering is deliberately plain floating point: figures
illustrate, certificates certify.  Pixel centers are placed with integer
offsets from the grid midline, so a grid symmetric about the real axis
negates exactly and the tricorn image is mirror-symmetric pixel for
pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intervals import ComplexBox
from .scan import ScanTree
from .verify import Status

__all__ = [
    "ImageBuffer",
    "PALETTE",
    "MULTIPLIER_PALETTE",
    "PARABOLIC_PALETTE",
    "render_escape",
    "rasterize_scan",
    "write_ppm",
]

# the paper's box-classification vocabulary
PALETTE = {
    Status.TRUE: (0, 255, 255),  # cyan
    Status.FALSE: (0, 200, 0),  # green
    Status.UNDETERMINED: (0, 0, 200),  # blue
}
MULTIPLIER_PALETTE = {**PALETTE, Status.UNDETERMINED: (255, 215, 0)}  # yellow
PARABOLIC_PALETTE = {**PALETTE, Status.UNDETERMINED: (200, 0, 0)}  # red

_INTERIOR = (0, 0, 0)


@dataclass
class ImageBuffer:
    """Row-major 8-bit RGB image, top row first."""

    width: int
    height: int
    pixels: bytearray

    def __post_init__(self):
        if len(self.pixels) != 3 * self.width * self.height:
            raise ValueError("pixel buffer size must be 3 * width * height")

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        base = 3 * (y * self.width + x)
        return tuple(self.pixels[base:base + 3])


def _axis_centers(lo: float, hi: float, count: int, flip: bool) -> np.ndarray:
    """Pixel-center coordinates with exactly antisymmetric offsets.

    The offset numerators are the odd integers -(count-1) .. (count-1), so
    centers of mirror-paired pixels are exact float negations of each
    other whenever lo == -hi.
    """
    mid = 0.5 * (lo + hi)
    span = hi - lo
    nums = 2 * np.arange(count, dtype=np.float64) + 1.0 - count
    if flip:
        nums = -nums
    return mid + nums * (span / (2.0 * count))


def render_escape(
    region: ComplexBox,
    width: int,
    height: int,
    maxiter: int,
    mode: str = "tricorn",
    c: complex = 0j,
) -> ImageBuffer:
    """Escape-time image of the tricorn, Mandelbrot, or a Julia set.

    A point escapes at the first iterate with |z| > 2; points that never
    do within maxiter are interior (black).  Escaped pixels shade from
    blue by the escape iteration.
    """
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be >= 1")
    if maxiter < 1:
        raise ValueError("maxiter must be >= 1")
    if mode not in ("tricorn", "mandelbrot", "julia"):
        raise ValueError(f"unknown render mode: {mode}")
    xs = _axis_centers(region.re.lo, region.re.hi, width, flip=False)
    ys = _axis_centers(region.im.lo, region.im.hi, height, flip=True)
    grid = xs[np.newaxis, :] + 1j * ys[:, np.newaxis]
    if mode == "julia":
        z = grid.copy()
        param = np.full_like(grid, c)
    else:
        z = grid.copy()
        param = grid
    escape = np.zeros(grid.shape, dtype=np.int32)
    index = np.arange(grid.size)
    z = z.ravel()
    param = param.ravel()
    flat_escape = escape.ravel()
    for k in range(1, maxiter + 1):
        if mode == "tricorn":
            z = np.conj(z) ** 2 + param
        else:
            z = z * z + param
        escaped = np.abs(z) > 2.0
        if escaped.any():
            flat_escape[index[escaped]] = k
            keep = ~escaped
            z = z[keep]
            param = param[keep]
            index = index[keep]
            if index.size == 0:
                break
    shade = np.minimum(255, (flat_escape.astype(np.int64) * 255) // maxiter)
    rgb = np.zeros((grid.size, 3), dtype=np.uint8)
    hit = flat_escape > 0
    rgb[hit, 0] = shade[hit]
    rgb[hit, 1] = shade[hit]
    rgb[hit, 2] = 255
    rgb[~hit] = _INTERIOR
    return ImageBuffer(width, height, bytearray(rgb.tobytes()))


def rasterize_scan(
    tree: ScanTree,
    palette: dict[Status, tuple[int, int, int]],
    width: int,
    height: int,
) -> ImageBuffer:
    """Paint each pixel with the color of the deepest leaf containing its
    center (first leaf in tree order on depth ties)."""
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be >= 1")
    xs = _axis_centers(tree.root.re.lo, tree.root.re.hi, width, flip=False)
    ys = _axis_centers(tree.root.im.lo, tree.root.im.hi, height, flip=True)
    rgb = np.zeros((height, width, 3), dtype=np.uint8)
    # shallow first; within a depth, later-ordered leaves painted first so
    # the first containing leaf wins ties, matching ScanTree.leaf_at
    order = sorted(
        range(len(tree.leaves)),
        key=lambda i: (tree.leaves[i].depth, -i),
    )
    for i in order:
        leaf = tree.leaves[i]
        color = palette[leaf.status]
        cols = np.nonzero((xs >= leaf.box.re.lo) & (xs <= leaf.box.re.hi))[0]
        rows = np.nonzero((ys >= leaf.box.im.lo) & (ys <= leaf.box.im.hi))[0]
        if cols.size and rows.size:
            rgb[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1] = color
    return ImageBuffer(width, height, bytearray(rgb.tobytes()))


def write_ppm(img: ImageBuffer, sink=None) -> bytes:
    """Binary portable pixmap: P6, dimensions, 255, raw RGB."""
    data = f"P6\n{img.width} {img.height}\n255\n".encode("ascii") + bytes(img.pixels)
    if sink is not None:
        sink.write(data)
    return data
