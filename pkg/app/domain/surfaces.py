"""Genus-two example surfaces, their lifts and the edge-paired length space."""

import logging
import math
from collections import deque
from collections.abc import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from app.config import settings
from app.domain.cyclic import b0, bisect_root, classify, defect_of, regular_radius
from app.domain.entities import (
    EdgePairing,
    GeodesicSegment,
    HIsometry,
    HPoint,
    InjCovRecord,
    OctagonSurface,
    PIotaPoint,
    PolygonClass,
    SurfaceConstants,
    SurfaceModel,
)
from app.domain.exceptions import BracketError, SurfaceError, VerificationError
from app.domain.hypgeo import (
    dist,
    interior_angle,
    pairwise_distances,
    segment_pairing_isometry,
    third_vertex,
)
from app.domain.tessellation import voronoi

logger = logging.getLogger(__name__)

# Octagon side pairs of the scheme a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹
SIDE_PAIRS = ((0, 2), (1, 3), (4, 6), (5, 7))

# Comparison values bracketing d_β and r_β from either side
COSH_D1 = 15.0166
COSH_R1 = 2.8298
COSH_R2 = 2.8299
COSH_D2 = 15.0167

ROOT_RESIDUAL = 1e-12  # endpoint accepted as a root below this residual
MATCH_TOLERANCE = 1e-9  # coordinate match when gluing triangle sides
T_LIMIT = 0.05  # deformation parameter range of F_t


def _equilateral_defect(side: float) -> float:
    return defect_of((side, side, side), 0.0)


def _solve_increasing(func: Callable[[float], float], lower: float, upper: float) -> float:
    """Root of an increasing function, accepting an endpoint that already solves it."""
    low_value = func(lower)
    if abs(low_value) <= ROOT_RESIDUAL:
        return lower
    high_value = func(upper)
    if abs(high_value) <= ROOT_RESIDUAL:
        return upper
    return bisect_root(func, lower, upper)


def d_alpha() -> float:
    """Side of the equilateral triangle with angles π/9."""
    return math.acosh(1.0 / (1.0 - math.cos(math.pi / 9.0)) - 1.0)


def d_beta() -> float:
    """Length whose hyperbolic cosine is the real root of x³ − 14x² − 15x − 4."""
    cosh_d = bisect_root(lambda x: x**3 - 14.0 * x**2 - 15.0 * x - 4.0, 14.0, 16.0)
    return math.acosh(cosh_d)


def constants() -> SurfaceConstants:
    """Named constants of F_α and F_β with the comparison values around them."""
    alpha = d_alpha()
    beta = d_beta()
    return SurfaceConstants(
        d_alpha=alpha,
        r_alpha=alpha / 2.0,
        d_beta=beta,
        r_beta=beta / 2.0,
        b_beta=b0([beta, beta]),
        d_1=math.acosh(COSH_D1),
        r_1=math.acosh(COSH_R1),
        r_2=math.acosh(COSH_R2),
        d_2=math.acosh(COSH_D2),
    )


def _deformed_sides(t: float) -> tuple[float, float]:
    side = d_beta() + t
    if side <= 0.0:
        raise SurfaceError(f"Deformation t={t} leaves no positive side length")
    return side, math.acosh(2.0 * math.cosh(side) - 1.0)


def _area_equation(t: float) -> Callable[[float], float]:
    side, diagonal = _deformed_sides(t)
    fixed = 3.0 * _equilateral_defect(side) + defect_of((diagonal, side, side), 0.0)

    def residual(d: float) -> float:
        return (
            fixed
            + defect_of((d, side, side), 0.0)
            + defect_of((diagonal, side, d), 0.0)
            - 4.0 * math.pi
        )

    return residual


def solve_d1_of_t(t: float) -> float:
    """Length d₁(t) keeping the total defect of the deformed octagon at 4π."""
    if abs(t) >= T_LIMIT:
        raise SurfaceError(f"Deformation parameter {t} outside (-{T_LIMIT}, {T_LIMIT})")

    side, diagonal = _deformed_sides(t)
    lower = 2.0 * math.asinh(0.5 * math.sinh(side / 2.0))
    try:
        return _solve_increasing(_area_equation(t), lower, diagonal)
    except BracketError as e:
        logger.error(f"No d1 solution at t={t}: {str(e)}", exc_info=True)
        raise SurfaceError(f"Cannot solve d1 at t={t}") from e


def d1_partial_d(t: float, d: float, step: float = 1e-6) -> float:
    """Central difference of the area equation in its d argument."""
    residual = _area_equation(t)
    return (residual(d + step) - residual(d - step)) / (2.0 * step)


def _fan_triangles() -> tuple[list[tuple[HPoint, HPoint, HPoint]], list[HPoint]]:
    side = d_alpha()
    center = HPoint.origin()
    spokes = [HPoint.from_polar(side, k * math.pi / 9.0) for k in range(7)]
    triangles = [(center, spokes[k], spokes[k + 1]) for k in range(6)]
    return triangles, [center, *spokes]


def _quadrilateral_triangles(
    t: float,
) -> tuple[list[tuple[HPoint, HPoint, HPoint]], list[HPoint]]:
    side, diagonal = _deformed_sides(t)
    long_side = solve_d1_of_t(t)

    a = HPoint.origin()
    b = HPoint.from_polar(diagonal, 0.0)
    x = third_vertex(a, b, side, side)
    y = third_vertex(b, a, long_side, side)
    z = third_vertex(y, a, side, side)
    w2 = third_vertex(x, b, side, side)
    w3 = third_vertex(a, x, side, side)
    w4 = third_vertex(b, y, side, side)

    triangles = [
        (a, b, x),
        (b, a, y),
        (y, a, z),
        (x, b, w2),
        (a, x, w3),
        (b, y, w4),
    ]
    return triangles, [a, z, y, w4, b, w2, x, w3]


def _same(p: HPoint, q: HPoint) -> bool:
    return bool(np.abs(p.vector - q.vector).max() <= MATCH_TOLERANCE * p.coords[0])


def _side_ends(
    triangles: Sequence[tuple[HPoint, HPoint, HPoint]], label: int
) -> tuple[HPoint, HPoint]:
    corners = triangles[label // 3]
    k = label % 3
    return corners[k - 1], corners[k]


def _glue(
    triangles: Sequence[tuple[HPoint, HPoint, HPoint]], octagon: Sequence[HPoint]
) -> tuple[EdgePairing, tuple[int, ...]]:
    size = 3 * len(triangles)
    involution = [-1] * size
    side_labels = [-1] * len(octagon)
    for label in range(size):
        start, end = _side_ends(triangles, label)
        for other in range(size):
            other_start, other_end = _side_ends(triangles, other)
            if other != label and _same(start, other_end) and _same(end, other_start):
                involution[label] = other
                break
        else:
            for m in range(len(octagon)):
                if _same(start, octagon[m]) and _same(end, octagon[(m + 1) % 8]):
                    side_labels[m] = label
                    break

    if min(side_labels) < 0:
        raise SurfaceError("Octagon boundary does not match the triangle sides")

    for i, j in SIDE_PAIRS:
        involution[side_labels[i]] = side_labels[j]
        involution[side_labels[j]] = side_labels[i]

    try:
        return EdgePairing(tuple(involution)), tuple(side_labels)
    except ValueError as e:
        raise SurfaceError(f"Invalid edge pairing: {e}") from e


def build_surface(model: SurfaceModel, t: float = 0.0) -> OctagonSurface:
    """Embed the octagon of a model surface and build its side-pairing holonomy."""
    logger.info(f"Building surface {model.value} at t={t}")
    if model is SurfaceModel.F_ALPHA:
        triangles, octagon = _fan_triangles()
        t = 0.0
    else:
        if model is SurfaceModel.F_BETA:
            t = 0.0
        triangles, octagon = _quadrilateral_triangles(t)

    pairing, side_labels = _glue(triangles, octagon)
    if not pairing.one_vertex:
        raise SurfaceError("Edge pairing does not identify all corners")

    generators = []
    for i, j in SIDE_PAIRS:
        source = GeodesicSegment.between(octagon[j], octagon[(j + 1) % 8])
        target = GeodesicSegment.between(octagon[i], octagon[(i + 1) % 8])
        generators.append(segment_pairing_isometry(source, target, flip=True))

    angle_sum = sum(
        interior_angle(corners[k], corners[k - 1], corners[(k + 1) % 3])
        for corners in triangles
        for k in range(3)
    )
    center = HPoint.from_vector(sum(point.vector for point in octagon))
    surface = OctagonSurface(
        model=model,
        t=t,
        triangles=tuple(triangles),
        octagon=tuple(octagon),
        center=center,
        pairing=pairing,
        side_pairs=SIDE_PAIRS,
        generators=tuple(generators),
        side_labels=side_labels,
        vertex_angle_sum=angle_sum,
        area=len(triangles) * math.pi - angle_sum,
    )
    logger.debug(f"Angle sum {angle_sum:.12f}, area {surface.area:.12f}")
    return surface


def surface_point(surface: OctagonSurface) -> PIotaPoint:
    """Side lengths of the octagon's triangles as a point of the paired length space."""
    lengths = tuple(
        dist(*_side_ends(surface.triangles, label))
        for label in range(3 * len(surface.triangles))
    )
    return PIotaPoint(lengths=lengths, pairing=surface.pairing)


def canonical_pairing() -> EdgePairing:
    """Edge pairing of the F_α fan, used for sampling the length space."""
    triangles, octagon = _fan_triangles()
    pairing, _ = _glue(triangles, octagon)
    return pairing


def defect_sum(point: PIotaPoint) -> float:
    """Σ D_0 over the six triangles."""
    return sum(defect_of(triple, 0.0) for triple in point.triples())


def octagon_reach(surface: OctagonSurface) -> float:
    return max(dist(surface.center, corner) for corner in surface.octagon)


def _dedupe(vectors: list[np.ndarray]) -> list[np.ndarray]:
    stacked = np.array(vectors)
    tree = cKDTree(stacked)
    search = settings.equidistance_tolerance * float(np.abs(stacked[:, 0]).max())
    kept: list[np.ndarray] = []
    claimed = np.zeros(len(vectors), dtype=bool)
    for index, vector in enumerate(stacked):
        if claimed[index]:
            continue
        claimed[tree.query_ball_point(vector, search)] = True
        kept.append(vector)
    return kept


def default_ball(surface: OctagonSurface) -> float:
    """Lift radius large enough for every Voronoi vertex around the basepoint to be exact."""
    widest = max(classify(triple).radius for triple in surface_point(surface).triples())
    return 2.0 * widest + settings.lift_margin


def lift_sites(surface: OctagonSurface, ball_radius: float | None = None) -> list[HPoint]:
    """Orbit of the octagon corners under the holonomy within a ball about P_0.

    The first returned site is the basepoint; the rest are sorted by distance.
    """
    ball = default_ball(surface) if ball_radius is None else ball_radius
    base = surface.octagon[0]
    reach = octagon_reach(surface)
    steps = [*surface.generators, *(g.inverse() for g in surface.generators)]

    identity = HIsometry.identity()
    seen = [surface.center.vector]
    tiles = [identity]
    queue: deque[tuple[HIsometry, int]] = deque([(identity, 0)])
    centers = cKDTree(np.array(seen))
    pending: list[np.ndarray] = []
    while queue:
        word, length = queue.popleft()
        if length >= settings.word_length_cap:
            continue
        for step in steps:
            candidate = word.compose(step)
            image = candidate.apply(surface.center)
            if dist(base, image) > ball + reach:
                continue
            vector = image.vector
            scale = settings.equidistance_tolerance * vector[0]
            if centers.query_ball_point(vector, scale) or any(
                np.abs(vector - other).max() <= scale for other in pending
            ):
                continue
            pending.append(vector)
            tiles.append(candidate)
            queue.append((candidate, length + 1))
            if len(tiles) > settings.orbit_cap:
                raise SurfaceError("Orbit enumeration exceeded the cap")
        if len(pending) > 64:
            seen.extend(pending)
            pending = []
            centers = cKDTree(np.array(seen))

    logger.debug(f"Lifted {len(tiles)} tiles within {ball + reach:.3f}")
    corners = [
        tile.matrix @ corner.vector for tile in tiles for corner in surface.octagon
    ]
    sites = [
        HPoint.from_vector(vector)
        for vector in _dedupe(corners)
        if dist(base, HPoint.from_vector(vector)) <= ball
    ]
    if len(sites) > settings.orbit_cap:
        raise SurfaceError("Orbit enumeration exceeded the cap")
    sites.sort(key=lambda site: dist(base, site))
    logger.info(f"Lifted {len(sites)} sites within radius {ball:.3f}")
    return sites


def injectivity_radius(sites: Sequence[HPoint]) -> float:
    """Half the minimum pairwise distance."""
    if len(sites) < 2:
        raise SurfaceError("Injectivity radius needs at least two sites")
    distances = pairwise_distances(np.array([site.vector for site in sites]))
    np.fill_diagonal(distances, np.inf)
    return float(distances.min()) / 2.0


def _check_r(r: float) -> tuple[float, float]:
    values = constants()
    slack = 1e-12
    if not values.r_beta - slack <= r <= values.r_alpha + slack:
        raise SurfaceError(
            f"Radius {r} outside [{values.r_beta:.12f}, {values.r_alpha:.12f}]"
        )
    return values.r_beta, values.r_alpha


def d1_of_r(r: float) -> float:
    """Paired length d₁(r) of the extremal point of the length space at injectivity radius r."""
    _check_r(r)
    side = 2.0 * r
    fixed = 4.0 * _equilateral_defect(side) - 4.0 * math.pi

    def residual(x: float) -> float:
        return fixed + 2.0 * defect_of((x, side, side), 0.0)

    try:
        return _solve_increasing(residual, side, b0([side, side]))
    except BracketError as e:
        logger.error(f"No d1 solution at r={r}: {str(e)}", exc_info=True)
        raise SurfaceError(f"Cannot solve d1 at r={r}") from e


def extremal_cover_sinh(r: float) -> float:
    """sinh of the covering radius at the extremal point (d₁(r), d₁(r), d_r, …)."""
    sinh_r = math.sinh(r)
    half = math.sinh(d1_of_r(r) / 2.0)
    return 2.0 * sinh_r**2 / math.sqrt(4.0 * sinh_r**2 - half**2)


def _is_exceptional(point: PIotaPoint) -> bool:
    beta = d_beta()
    diagonal = b0([beta, beta])
    band = settings.exceptional_dead_band
    long_labels = [
        i for i, length in enumerate(point.lengths) if abs(length - diagonal) <= band
    ]
    short = sum(abs(length - beta) <= band for length in point.lengths)
    return (
        len(long_labels) == 2
        and point.pairing.involution[long_labels[0]] == long_labels[1]
        and short == len(point.lengths) - 2
    )


def covering_radius(point: PIotaPoint) -> float:
    """Largest circumradius over the six triangles."""
    if _is_exceptional(point):
        logger.debug("Exceptional point: merging the two boundary triangles")
        return regular_radius(4, d_beta())

    radii = []
    for triple in point.triples():
        polygon = classify(triple)
        if polygon.polygon_class in (PolygonClass.NOT_CYCLIC, PolygonClass.NON_CENTERED):
            raise SurfaceError(
                f"Triangle {triple} is {polygon.polygon_class.value}, "
                "expected centered or boundary-centered"
            )
        radii.append(polygon.radius)
    return max(radii)


def covering_radius_geometric(sites: Sequence[HPoint], clip_radius: float) -> float:
    """Largest radius among exact Voronoi vertices around the first site."""
    complex_ = voronoi(sites, clip_radius, sites[0])
    around = [v.radius for v in complex_.interior_vertices if 0 in v.sites]
    if not around:
        raise SurfaceError("No exact Voronoi vertex around the basepoint")
    return max(around)


def _random_interior(
    surface: OctagonSurface, rng: np.random.Generator
) -> np.ndarray:
    corners = surface.triangles[int(rng.integers(len(surface.triangles)))]
    weights = rng.dirichlet(np.ones(3))
    vector = sum(w * corner.vector for w, corner in zip(weights, corners, strict=True))
    return HPoint.from_vector(vector).vector


def _strictly_inside(surface: OctagonSurface, vector: np.ndarray) -> bool:
    for a, b, c in surface.triangles:
        frame = np.array([a.vector, b.vector, c.vector])
        orientation = math.copysign(1.0, float(np.linalg.det(frame)))
        scale = MATCH_TOLERANCE * float(np.abs(frame).max()) ** 2 * abs(vector[0])
        if all(
            orientation * float(np.linalg.det(np.array([p, q, vector]))) > scale
            for p, q in ((a.vector, b.vector), (b.vector, c.vector), (c.vector, a.vector))
        ):
            return True
    return False


def poincare_check(surface: OctagonSurface, samples: int, seed: int) -> int:
    """Count sampled interior points whose generator image falls back inside the octagon."""
    rng = np.random.default_rng(seed)
    steps = [*surface.generators, *(g.inverse() for g in surface.generators)]
    overlaps = 0
    for _ in range(samples):
        vector = _random_interior(surface, rng)
        for step in steps:
            if _strictly_inside(surface, step.matrix @ vector):
                overlaps += 1
    if overlaps:
        logger.warning(f"{overlaps} sampled translates overlap the octagon")
    return overlaps


def _free_pairs(pairing: EdgePairing) -> list[tuple[int, int]]:
    return [(i, j) for i, j in pairing.pairs() if i // 3 != j // 3]


def _sample_point(
    pairing: EdgePairing, r: float, rng: np.random.Generator
) -> PIotaPoint | None:
    side = 2.0 * r
    pairs = pairing.pairs()
    free = _free_pairs(pairing)
    free_pair = free[int(rng.integers(len(free)))]
    rest = [pair for pair in pairs if pair != free_pair]
    pinned = rest[int(rng.integers(len(rest)))]
    direction = rng.uniform(0.0, 1.0, size=len(rest))
    direction[rest.index(pinned)] = 0.0

    def assemble(scale: float, free_value: float) -> list[float]:
        lengths = [0.0] * len(pairing.involution)
        for (i, j), weight in zip(rest, direction, strict=True):
            lengths[i] = lengths[j] = side + scale * weight
        lengths[free_pair[0]] = lengths[free_pair[1]] = free_value
        return lengths

    def total(lengths: list[float]) -> float:
        triples = [lengths[k : k + 3] for k in range(0, len(lengths), 3)]
        return sum(defect_of(triple, 0.0) for triple in triples) - 4.0 * math.pi

    spread = settings.sampling_spread
    if total(assemble(spread, side)) > 0.0:
        if total(assemble(0.0, side)) >= -ROOT_RESIDUAL:
            # Only the equilateral point is feasible at r_alpha
            spread = 0.0
        else:
            try:
                spread = bisect_root(lambda s: total(assemble(s, side)), 0.0, spread)
            except BracketError:
                return None
    lengths = assemble(float(rng.uniform(0.0, spread)), side)

    upper = min(
        b0([lengths[k] for k in range(3 * (label // 3), 3 * (label // 3) + 3) if k != label])
        for label in free_pair
    )
    if upper <= side:
        return None

    def residual(value: float) -> float:
        lengths[free_pair[0]] = lengths[free_pair[1]] = value
        return total(lengths)

    try:
        value = _solve_increasing(residual, side, upper)
    except BracketError:
        return None
    lengths[free_pair[0]] = lengths[free_pair[1]] = value

    try:
        point = PIotaPoint(lengths=tuple(lengths), pairing=pairing)
    except ValueError:
        return None
    if any(
        classify(triple).polygon_class
        in (PolygonClass.NOT_CYCLIC, PolygonClass.NON_CENTERED)
        for triple in point.triples()
    ):
        return None
    return point


def verify_theorem2(
    r_grid: Sequence[float], samples_per_r: int, seed: int
) -> list[InjCovRecord]:
    """Sample the length space at each r and bound sinh J by √2 sinh r."""
    pairing = canonical_pairing()
    children = np.random.SeedSequence(seed).spawn(len(r_grid))
    records = []
    for r, child in zip(r_grid, children, strict=True):
        _check_r(r)
        rng = np.random.default_rng(child)
        bound = math.sqrt(2.0) * math.sinh(r)
        accepted = 0
        attempts = 0
        max_sinh = 0.0
        while accepted < samples_per_r:
            attempts += 1
            if attempts > settings.sampling_attempts:
                raise SurfaceError(
                    f"Only {accepted} of {samples_per_r} samples accepted at r={r}"
                )
            point = _sample_point(pairing, r, rng)
            if point is None:
                continue
            accepted += 1
            sinh_cover = math.sinh(covering_radius(point))
            if sinh_cover > bound + settings.identity_tolerance:
                raise VerificationError(
                    f"sinh J = {sinh_cover:.12f} exceeds √2 sinh r = {bound:.12f}"
                )
            max_sinh = max(max_sinh, sinh_cover)

        extremal = extremal_cover_sinh(r)
        logger.debug(f"r={r:.6f}: {accepted} samples in {attempts} attempts")
        records.append(
            InjCovRecord(
                r=r,
                accepted=accepted,
                max_ratio=max_sinh / bound,
                extremal_ratio=extremal / bound,
                max_sinh_cover=max_sinh,
                extremal_sinh_cover=extremal,
            )
        )
    logger.info(f"Sampled {len(records)} grid points")
    return records
