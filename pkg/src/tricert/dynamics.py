"""Rigorous evaluation of the anti-quadratic family and its iterates.

The map is f_c(z) = conj(z)^2 + c.  Its second iterate
f_c^2(z) = (z^2 + conj(c))^2 + c is holomorphic, so even iterates carry an
ordinary complex derivative, accumulated through the factored chain-rule
form 4 z (z^2 + conj(c)).  Odd iterates are handled through the
holomorphic companion H with f_c^n(z) = conj(H(z)).

Interval-Newton certification of fixed points of f_c^n works on the
2x2 real Jacobian built from the Wirtinger derivative enclosures, which
covers the holomorphic and the conj-linear case uniformly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .intervals import ComplexBox, Interval, ZeroDivisionBoxError

__all__ = [
    "OrbitEnclosure",
    "OrbitOverflow",
    "EscapeResult",
    "NewtonStatus",
    "NewtonResult",
    "eval_f",
    "eval_f2",
    "iterate",
    "escape_test",
    "even_iterate",
    "holo_derivative",
    "antiholo_modulus",
    "conj_holomorphic_form",
    "interval_newton_fixed",
    "certify_cycle",
    "krawczyk_cycle",
    "krawczyk_absence",
    "float_f",
    "float_iterate",
    "float_newton_fixed",
    "float_newton_cycle",
    "omega_enclosure",
]

# escape beyond this endpoint magnitude is treated as numeric blow-up
_BLOWUP = 1e100


class OrbitOverflow(ArithmeticError):
    """An iterate enclosure left the representable range (escaped to infinity)."""

    def __init__(self, boxes):
        super().__init__("orbit enclosure escaped to infinity")
        self.boxes = boxes


@dataclass(frozen=True)
class OrbitEnclosure:
    """A certified periodic orbit: one box per orbit point.

    modulus encloses prod_i 2|z_i|; the multiplier of an odd-period cycle
    (the derivative of the doubled iterate) is the square of that product.
    unique means every box passed the interval-Newton interior test.
    """

    period: int
    boxes: tuple[ComplexBox, ...]
    modulus: Interval
    unique: bool


class EscapeResult:
    """Outcome of escape_test: certified escape, bounded-so-far, or unknown."""

    __slots__ = ("kind", "iterations")

    ESCAPED = "escaped"
    BOUNDED = "bounded"
    UNKNOWN = "unknown"

    def __init__(self, kind: str, iterations: int):
        self.kind = kind
        self.iterations = iterations

    @property
    def escaped(self) -> bool:
        return self.kind == EscapeResult.ESCAPED

    def __repr__(self) -> str:
        return f"EscapeResult({self.kind}, {self.iterations})"


def eval_f(c: ComplexBox, z: ComplexBox) -> ComplexBox:
    """Enclosure of f_c(z) = conj(z)^2 + c."""
    return z.sqr().conj() + c


def eval_f2(c: ComplexBox, z: ComplexBox) -> ComplexBox:
    """Enclosure of the holomorphic second iterate (z^2 + conj(c))^2 + c."""
    return (z.sqr() + c.conj()).sqr() + c


def iterate(c: ComplexBox, z0: ComplexBox, n: int) -> list[ComplexBox]:
    """Boxes enclosing f_c^k(z0) for k = 0..n.

    Raises OrbitOverflow (carrying the partial orbit) if an enclosure
    blows past the representable range.
    """
    boxes = [z0]
    z = z0
    for _ in range(n):
        z = eval_f(c, z)
        if max(abs(z.re.lo), abs(z.re.hi), abs(z.im.lo), abs(z.im.hi)) > _BLOWUP:
            raise OrbitOverflow(boxes)
        boxes.append(z)
    return boxes


def escape_test(c: ComplexBox, z0: ComplexBox, maxiter: int) -> EscapeResult:
    """Certified escape check for the orbit of z0.

    Escape at step k is certified when the enclosure of |z_k| has lower
    bound above both 2 and sup|c|; then |f_c(z)| >= |z|(1 + eps) for every
    point in the box, so divergence is proven.
    """
    cmag = c.abs().hi
    z = z0
    for k in range(maxiter + 1):
        a = z.abs()
        if a.lo > 2.0 and a.lo > cmag:
            return EscapeResult(EscapeResult.ESCAPED, k)
        if k == maxiter:
            break
        z = eval_f(c, z)
        if max(abs(z.re.lo), abs(z.re.hi), abs(z.im.lo), abs(z.im.hi)) > _BLOWUP:
            # enclosure blew up without a certified lower bound
            return EscapeResult(EscapeResult.UNKNOWN, k + 1)
        if z.width() > 8.0:
            return EscapeResult(EscapeResult.UNKNOWN, k + 1)
    return EscapeResult(EscapeResult.BOUNDED, maxiter)


def even_iterate(c: ComplexBox, z: ComplexBox, n: int) -> ComplexBox:
    """Enclosure of f_c^n(z) for even n >= 0."""
    if n % 2 != 0 or n < 0:
        raise ValueError("even_iterate needs even n >= 0")
    for _ in range(n // 2):
        z = eval_f2(c, z)
    return z


def holo_derivative(c: ComplexBox, z: ComplexBox, n: int) -> ComplexBox:
    """Enclosure of (f_c^n)'(z) for even n >= 2, via the f^2 chain rule.

    (f_c^2)'(w) = 4 w (w^2 + conj(c)), accumulated along the orbit of
    second iterates.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError("holo_derivative needs even n >= 2")
    cbar = c.conj()
    d = ComplexBox.point(1.0 + 0.0j)
    for _ in range(n // 2):
        d = d * (z * (z.sqr() + cbar)).scale(4.0)
        z = (z.sqr() + cbar).sqr() + c
    return d


def antiholo_modulus(orbit: list[ComplexBox]) -> Interval:
    """Enclosure of prod_i 2|z_i| along the orbit boxes."""
    prod = Interval.point(1.0)
    for z in orbit:
        prod = prod * z.abs().scale(2.0)
    return prod


class ConjHolomorphicForm:
    """Holomorphic H with f_c^n(z) = conj(H(z)) for odd n.

    H(z) = (f_c^{n-1}(z))^2 + conj(c) and
    H'(z) = 2 f_c^{n-1}(z) (f_c^{n-1})'(z).
    """

    def __init__(self, c: ComplexBox, n: int):
        if n % 2 != 1 or n < 1:
            raise ValueError("conj-holomorphic form needs odd n >= 1")
        self.c = c
        self.n = n

    def value(self, z: ComplexBox) -> ComplexBox:
        e = even_iterate(self.c, z, self.n - 1)
        return e.sqr() + self.c.conj()

    def value_and_derivative(self, z: ComplexBox) -> tuple[ComplexBox, ComplexBox]:
        c, cbar = self.c, self.c.conj()
        d = ComplexBox.point(1.0 + 0.0j)
        for _ in range((self.n - 1) // 2):
            d = d * (z * (z.sqr() + cbar)).scale(4.0)
            z = (z.sqr() + cbar).sqr() + c
        return z.sqr() + cbar, (z * d).scale(2.0)

    def derivative(self, z: ComplexBox) -> ComplexBox:
        return self.value_and_derivative(z)[1]


def conj_holomorphic_form(c: ComplexBox, n: int) -> ConjHolomorphicForm:
    return ConjHolomorphicForm(c, n)


# ---------------------------------------------------------------------------
# interval Newton on the 2x2 real Jacobian
# ---------------------------------------------------------------------------


class NewtonStatus(enum.Enum):
    CERTIFIED = "certified"  # unique zero, Newton image interior to the seed
    NONE = "none"  # Newton image disjoint from the seed: no zero
    UNKNOWN = "unknown"  # singular Jacobian or inconclusive geometry


@dataclass(frozen=True)
class NewtonResult:
    status: NewtonStatus
    box: ComplexBox


def newton_step(
    value_mid: ComplexBox,
    wirtinger_a: ComplexBox,
    wirtinger_b: ComplexBox,
    mid: complex,
    seed: ComplexBox,
) -> NewtonResult:
    """One interval-Newton step for F(z) = 0 on the seed box.

    wirtinger_a encloses dF/dz over the seed, wirtinger_b encloses
    dF/dconj(z); value_mid encloses F at the midpoint.  The real Jacobian is
        [[Re A + Re B, -Im A + Im B],
         [Im A + Im B,  Re A - Re B]].
    """
    j11 = wirtinger_a.re + wirtinger_b.re
    j12 = -wirtinger_a.im + wirtinger_b.im
    j21 = wirtinger_a.im + wirtinger_b.im
    j22 = wirtinger_a.re - wirtinger_b.re
    det = j11 * j22 - j12 * j21
    try:
        inv_det = det.recip()
    except ZeroDivisionBoxError:
        return NewtonResult(NewtonStatus.UNKNOWN, seed)
    fx, fy = value_mid.re, value_mid.im
    dx = (fx * j22 - fy * j12) * inv_det
    dy = (fy * j11 - fx * j21) * inv_det
    image = ComplexBox(Interval.point(mid.real) - dx, Interval.point(mid.imag) - dy)
    if seed.strictly_contains(image):
        return NewtonResult(NewtonStatus.CERTIFIED, image.intersection(seed))
    if not seed.intersects(image):
        return NewtonResult(NewtonStatus.NONE, ComplexBox.EMPTY)
    return NewtonResult(NewtonStatus.UNKNOWN, image.intersection(seed))


def _fixed_point_data(c: ComplexBox, n: int, z: ComplexBox, mid: ComplexBox):
    """F, A, B for F(z) = f_c^n(z) - z on (value at mid, derivatives over z)."""
    if n % 2 == 0:
        g_mid = even_iterate(c, mid, n)
        a = holo_derivative(c, z, n) - ComplexBox.point(1.0 + 0.0j)
        b = ComplexBox.point(0j)
        return g_mid - mid, a, b
    form = ConjHolomorphicForm(c, n)
    h_mid = form.value(mid)
    dh = form.derivative(z)
    return h_mid.conj() - mid, ComplexBox.point(-1.0 + 0.0j), dh.conj()


def interval_newton_fixed(
    c: ComplexBox,
    n: int,
    seed: ComplexBox,
    max_steps: int = 30,
) -> NewtonResult:
    """Certify a fixed point of f_c^n inside the seed box.

    Returns CERTIFIED with a contracted enclosure when the Newton image
    lands strictly inside the seed (existence and uniqueness), NONE when
    the image is disjoint from the seed (no fixed point), UNKNOWN otherwise.
    """
    box = seed
    certified = False
    for _ in range(max_steps):
        mid = ComplexBox.point(box.midpoint())
        fm, a, b = _fixed_point_data(c, n, box, mid)
        step = newton_step(fm, a, b, box.midpoint(), box)
        if step.status is NewtonStatus.NONE:
            if certified:
                # contraction lost the point only through rounding; keep box
                return NewtonResult(NewtonStatus.CERTIFIED, box)
            return NewtonResult(NewtonStatus.NONE, ComplexBox.EMPTY)
        if step.status is NewtonStatus.UNKNOWN and not certified:
            if step.box.is_empty or step.box.width() >= box.width():
                return NewtonResult(NewtonStatus.UNKNOWN, box)
            box = step.box
            continue
        if step.status is NewtonStatus.CERTIFIED:
            certified = True
        new_box = step.box
        if new_box.is_empty or new_box.width() >= 0.99 * box.width():
            return NewtonResult(
                NewtonStatus.CERTIFIED if certified else NewtonStatus.UNKNOWN, box
            )
        box = new_box
    return NewtonResult(NewtonStatus.CERTIFIED if certified else NewtonStatus.UNKNOWN, box)


def _cycle_residuals(c: ComplexBox, points: list[ComplexBox]) -> list[ComplexBox]:
    p = len(points)
    return [eval_f(c, points[i]) - points[(i + 1) % p] for i in range(p)]


def float_newton_cycle(
    c: complex,
    period: int,
    orbit_guess: list[complex],
    steps: int = 50,
) -> tuple[list[complex], float]:
    """Floating-point Newton on the coupled cyclic system.

    Refines the whole orbit at once, which stays stable where per-point
    iteration of f^period would wrap.  Returns the refined orbit and the
    final residual max |f(z_i) - z_{i+1}|; callers decide whether the
    residual is small enough to call it converged.
    """
    import numpy as np

    p = period
    orbit = list(orbit_guess)
    if len(orbit) != p:
        raise ValueError("orbit guess length must equal the period")
    for _ in range(steps):
        j0 = np.zeros((2 * p, 2 * p))
        g = np.zeros(2 * p)
        for i, z in enumerate(orbit):
            k = (i + 1) % p
            fz = float_f(c, z)
            g[2 * i] = (fz - orbit[k]).real
            g[2 * i + 1] = (fz - orbit[k]).imag
            j0[2 * i, 2 * i] = 2.0 * z.real
            j0[2 * i, 2 * i + 1] = -2.0 * z.imag
            j0[2 * i + 1, 2 * i] = -2.0 * z.imag
            j0[2 * i + 1, 2 * i + 1] = -2.0 * z.real
            j0[2 * i, 2 * k] -= 1.0
            j0[2 * i + 1, 2 * k + 1] -= 1.0
        try:
            delta = np.linalg.solve(j0, g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        orbit = [z - complex(delta[2 * i], delta[2 * i + 1]) for i, z in enumerate(orbit)]
        if np.abs(delta).max() < 1e-14:
            break
    residual = max(
        abs(float_f(c, orbit[i]) - orbit[(i + 1) % p]) for i in range(p)
    )
    return orbit, residual


def _krawczyk_image(c: ComplexBox, boxes: list[ComplexBox]) -> list[ComplexBox] | None:
    """One Krawczyk step for the coupled cyclic system G_i = f(z_i) - z_{i+1}.

    Returns the componentwise image K(Z) or None when the midpoint
    Jacobian is singular.  The preconditioner is the floating-point
    inverse of the midpoint Jacobian; the matrix I - Y J(Z) is formed
    entrywise so Y J(mid) cancels against I before interval widths add.
    G is exactly linear in c, so the parameter enters once per row with a
    signed coefficient and the orbit's c-sensitivities can cancel.
    """
    import numpy as np

    p = len(boxes)
    mids = [b.midpoint() for b in boxes]
    # float midpoint Jacobian: d f(z) / d(x, y) = [[2x, -2y], [-2y, -2x]]
    j0 = np.zeros((2 * p, 2 * p))
    for i, m in enumerate(mids):
        j0[2 * i, 2 * i] = 2.0 * m.real
        j0[2 * i, 2 * i + 1] = -2.0 * m.imag
        j0[2 * i + 1, 2 * i] = -2.0 * m.imag
        j0[2 * i + 1, 2 * i + 1] = -2.0 * m.real
        k = (i + 1) % p
        j0[2 * i, 2 * k] -= 1.0
        j0[2 * i + 1, 2 * k + 1] -= 1.0
    try:
        y = np.linalg.inv(j0)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(y)):
        return None
    c_mid = c.midpoint()
    cu = c.re - Interval.point(c_mid.real)
    cv = c.im - Interval.point(c_mid.imag)
    gm = _cycle_residuals(ComplexBox.point(c_mid), [ComplexBox.point(m) for m in mids])
    rvec: list[Interval] = []
    for b, m in zip(boxes, mids):
        rvec.extend((b.re - Interval.point(m.real), b.im - Interval.point(m.imag)))
    n = 2 * p
    dblocks = []
    for b in boxes:
        x2, y2 = b.re.scale(2.0), b.im.scale(2.0)
        dblocks.append(((x2, -y2), (-y2, -x2)))
    # K = m - Y G(m) + (I - Y J(Z)) (Z - m)
    kvec: list[Interval] = []
    for r in range(n):
        acc = Interval.point(0.0)
        for j in range(p):
            d = dblocks[j]
            prev = (j - 1) % p
            for col in (0, 1):
                cc = 2 * j + col
                yj = (
                    d[0][col].scale(y[r, 2 * j])
                    + d[1][col].scale(y[r, 2 * j + 1])
                    - Interval.point(y[r, 2 * prev + col])
                )
                m_entry = Interval.point(1.0 if r == cc else 0.0) - yj
                acc = acc + m_entry * rvec[cc]
        su = sv = 0.0
        for cidx in range(n):
            coeff = y[r, cidx]
            if cidx % 2 == 0:
                su += coeff
            else:
                sv += coeff
            if coeff != 0.0:
                half = gm[cidx // 2]
                g = half.re if cidx % 2 == 0 else half.im
                acc = acc - g.scale(coeff)
        acc = acc - cu.scale(su) - cv.scale(sv)
        base = mids[r // 2].real if r % 2 == 0 else mids[r // 2].imag
        kvec.append(Interval.point(base) + acc)
    return [ComplexBox(kvec[2 * i], kvec[2 * i + 1]) for i in range(p)]


def krawczyk_cycle(
    c: ComplexBox,
    period: int,
    orbit_guess: list[complex],
    radius: float,
    tighten: int = 3,
) -> tuple[NewtonStatus, list[ComplexBox]]:
    """Krawczyk existence certification of a full cycle as a coupled system.

    Each residual involves a single map application, so there is no
    iterate-depth wrapping.  Starts from boxes of the given radius around
    the guess and grows them by epsilon inflation, which hands every orbit
    point a radius matched to its own parameter sensitivity.  Returns
    (CERTIFIED, tight enclosures) or (UNKNOWN, []); absence is the job of
    krawczyk_absence, where the searched region is explicit.
    """
    p = period
    if len(orbit_guess) != p:
        raise ValueError("orbit guess length must equal the period")
    boxes = [ComplexBox.around(z, radius) for z in orbit_guess]
    certified = False
    remaining = max(tighten, 1)
    for _ in range(24):
        images = _krawczyk_image(c, boxes)
        if images is None:
            return NewtonStatus.UNKNOWN, []
        inside = all(b.strictly_contains(k) for b, k in zip(boxes, images))
        if inside:
            # contract toward the fixed point, then hand back tight boxes
            boxes = [k.intersection(b) for b, k in zip(boxes, images)]
            certified = True
            remaining -= 1
            if remaining <= 0:
                return NewtonStatus.CERTIFIED, boxes
            continue
        if certified:
            return NewtonStatus.CERTIFIED, boxes
        if any(not b.intersects(k) for b, k in zip(boxes, images)):
            return NewtonStatus.UNKNOWN, []
        grown = []
        for k in images:
            pad = 0.125 * k.width() + 4.0 * radius
            grown.append(
                ComplexBox(
                    Interval(k.re.lo - pad, k.re.hi + pad),
                    Interval(k.im.lo - pad, k.im.hi + pad),
                )
            )
        if max(g.width() for g in grown) > 0.5:
            return NewtonStatus.UNKNOWN, []
        boxes = grown
    return (NewtonStatus.CERTIFIED, boxes) if certified else (NewtonStatus.UNKNOWN, [])


def krawczyk_absence(
    c: ComplexBox,
    period: int,
    orbit_guess: list[complex],
    radius: float,
) -> bool:
    """Prove no cycle of the given period lives near the guessed orbit.

    Single Krawczyk step on boxes of the stated radius: when some image
    component misses its box, the coupled system has no solution with
    every orbit point within `radius` of the guess, for any parameter in
    c.  The tracked region is exactly these boxes, so a True here is a
    statement about that neighborhood only.
    """
    if len(orbit_guess) != period:
        raise ValueError("orbit guess length must equal the period")
    boxes = [ComplexBox.around(z, radius) for z in orbit_guess]
    images = _krawczyk_image(c, boxes)
    if images is None:
        return False
    return any(not b.intersects(k) for b, k in zip(boxes, images))


def certify_cycle(
    c: ComplexBox,
    period: int,
    orbit_guess: list[complex],
    radii,
) -> OrbitEnclosure | None:
    """Certify a period-`period` orbit near a floating-point guess.

    Runs interval Newton on f_c^period around each guessed orbit point,
    sweeping the seed radii independently per point (the certifiable
    window differs along the orbit), checks orbit consistency (f image of
    box i meets box i+1), and returns None when any certification fails.
    """
    if len(orbit_guess) != period:
        raise ValueError("orbit guess length must equal the period")
    if isinstance(radii, float):
        radii = (radii,)
    boxes = []
    for z in orbit_guess:
        box = None
        for radius in radii:
            res = interval_newton_fixed(c, period, ComplexBox.around(z, radius))
            if res.status is NewtonStatus.CERTIFIED:
                box = res.box
                break
        if box is None:
            return None
        boxes.append(box)
    for i in range(period):
        if not eval_f(c, boxes[i]).intersects(boxes[(i + 1) % period]):
            return None
    # distinct boxes certify the exact period
    for i in range(period):
        for j in range(i + 1, period):
            if boxes[i].intersects(boxes[j]):
                return None
    return OrbitEnclosure(
        period=period,
        boxes=tuple(boxes),
        modulus=antiholo_modulus(boxes),
        unique=True,
    )


# ---------------------------------------------------------------------------
# non-rigorous floating-point companions (seeds and oracles)
# ---------------------------------------------------------------------------


def float_f(c: complex, z: complex) -> complex:
    return z.conjugate() ** 2 + c


def float_iterate(c: complex, z: complex, n: int) -> complex:
    for _ in range(n):
        z = float_f(c, z)
    return z


def _float_fixed_point_data(c: complex, n: int, z: complex):
    if n % 2 == 0:
        d = 1.0 + 0.0j
        w = z
        cb = c.conjugate()
        for _ in range(n // 2):
            d *= 4.0 * w * (w * w + cb)
            w = (w * w + cb) ** 2 + c
        return w - z, d - 1.0, 0.0j
    cb = c.conjugate()
    d = 1.0 + 0.0j
    w = z
    for _ in range((n - 1) // 2):
        d *= 4.0 * w * (w * w + cb)
        w = (w * w + cb) ** 2 + c
    h = w * w + cb
    dh = 2.0 * w * d
    return h.conjugate() - z, -1.0 + 0.0j, dh.conjugate()


def float_newton_fixed(c: complex, n: int, z0: complex, steps: int = 80) -> complex | None:
    """Plain float Newton for a fixed point of f_c^n; None if it diverges."""
    z = z0
    for _ in range(steps):
        f, a, b = _float_fixed_point_data(c, n, z)
        j11 = a.real + b.real
        j12 = -a.imag + b.imag
        j21 = a.imag + b.imag
        j22 = a.real - b.real
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            return None
        dx = (f.real * j22 - f.imag * j12) / det
        dy = (f.imag * j11 - f.real * j21) / det
        z = complex(z.real - dx, z.imag - dy)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
        if abs(f) < 1e-14:
            return z
    return z if abs(_float_fixed_point_data(c, n, z)[0]) < 1e-10 else None


_SQRT3 = Interval.point(3.0).sqrt()

# enclosure of omega = (-1 + sqrt(3) i) / 2, the tricorn's rotational symmetry
OMEGA = ComplexBox(Interval.point(-0.5), _SQRT3.scale(0.5))


def omega_enclosure() -> ComplexBox:
    return OMEGA
