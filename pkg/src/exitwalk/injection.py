"""Length- and projection-preserving injection on pairs of lattice paths.

Given two start heights on the left edge and two end heights on the right
edge of a region, the construction maps a pair of paths (first: A -> C,
second: B -> D) to a pair ending at the pulled-together heights
C' = C - (0, r) and D' = D + (0, r).  It raises the second path by a fixed
shift and swaps the step suffixes of the two paths at a canonical junction:
the first surviving vertex of the loop-erased raised path that the other
path visits, split at the visit whose incoming edge survives erasure on one
side and at the first visit on the other.  That occurrence rule makes a
single swap self-inverse, but the swap can drag an excursion of the raised
path above the region's ceiling onto the first output (or a dip of the first
path below the raised floor onto the second).  When that happens, a repair
round trims both paths just past their last out-of-band vertex, swaps the
in-band tails at their canonical junction, and the walk retries.  A swap
never creates or destroys vertices, so each side's out-of-band vertex
inventory -- and with it the trim positions -- is computable from the
outputs alone, which keeps every round reversible and the composite map
injective.  Because all swaps happen at shared vertices, total length and
the joint projection profile are preserved.

The module also ships the exhaustive verification harness used to audit
injectivity, codomain membership, and profile preservation over all pairs up
to a length bound, and the exact inverse (the same walk run from the primed
side).
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ConstructionFailure, InvalidInstance, NoIntersection
from .lattice import (
    LatticePath,
    LatticePoint,
    Region,
    boundary_paths,
    contains,
    path_in_region,
    projection_profile,
    shift_path,
)
from .paths import enumerate_free_paths

Vertices = tuple[LatticePoint, ...]


@dataclass(frozen=True)
class PathPair:
    first: LatticePath
    second: LatticePath

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "PathPair":
        return cls(
            LatticePath.from_json(data["first"]),
            LatticePath.from_json(data["second"]),
        )


def _erase_loops(verts: Vertices) -> tuple[list[LatticePoint], list[int]]:
    """Chronological loop erasure; cycles are removed as soon as they close.

    Returns the surviving vertices and, for each, the original index of the
    visit whose incoming edge survives (the first visit of that vertex after
    all earlier cycles through it are gone; the start vertex gets index 0).
    """
    stack: list[tuple[LatticePoint, int]] = []
    pos: dict[LatticePoint, int] = {}
    for i, v in enumerate(verts):
        if v in pos:
            cut = pos[v] + 1
            for w, _ in stack[cut:]:
                del pos[w]
            del stack[cut:]
        else:
            pos[v] = len(stack)
            stack.append((v, i))
    return [v for v, _ in stack], [i for _, i in stack]


def loop_erase(path: LatticePath) -> LatticePath:
    """Self-avoiding core of a path, erasing cycles in chronological order."""
    _, kept = _erase_loops(path.vertices)
    steps = tuple(path.steps[i - 1] for i in kept[1:])
    return LatticePath(path.start, steps)


def key_intersection(
    gamma1: LatticePath, gamma2: LatticePath, lambda_mask: Iterable[LatticePoint] | None = None
) -> tuple[int, int]:
    """Canonical meeting of two paths: indices (on gamma1, on gamma2).

    Scans the loop-erased gamma1 from its start and picks the first surviving
    vertex that gamma2 also visits (restricted to lambda_mask when given).
    The gamma1 index is the visit of that vertex whose incoming edge survives
    erasure (so every cycle through it that closed earlier sits strictly
    before the split); the gamma2 index is its first visit.  This occurrence
    asymmetry is exactly what makes the suffix swap at the meeting vertex
    self-inverse.
    """
    allowed = None if lambda_mask is None else frozenset(lambda_mask)
    verts1 = gamma1.vertices
    verts2 = gamma2.vertices
    shared = set(verts2)
    if allowed is not None:
        shared &= allowed
    if shared:
        le_verts, le_idx = _erase_loops(verts1)
        for v, i in zip(le_verts, le_idx):
            if v in shared:
                return i, verts2.index(v)
    raise NoIntersection("loop-erased first path never meets second path in the mask")


def fomin_swap(
    gamma1: LatticePath, gamma2: LatticePath, lambda_mask: Iterable[LatticePoint] | None = None
) -> tuple[LatticePath, LatticePath]:
    """Swap the step suffixes of two paths at their canonical meeting vertex."""
    i, j = key_intersection(gamma1, gamma2, lambda_mask)
    return (
        LatticePath(gamma1.start, gamma1.steps[:i] + gamma2.steps[j:]),
        LatticePath(gamma2.start, gamma2.steps[:j] + gamma1.steps[i:]),
    )


@dataclass(frozen=True)
class InjectionInstance:
    """A region with two start heights (a, b), two end heights (c, d), and a pull r.

    The map sends pairs of paths ((0,a) -> (m,c), (0,b) -> (m,d)) to pairs
    ending at heights c - r and d + r.  Requires r >= 1 and
    a - b <= (c - d) - r, with all six endpoint heights inside their columns.
    """

    region: Region
    a: int
    b: int
    c: int
    d: int
    r: int

    def __post_init__(self):
        vu = self.region.step_set.vertical_unit
        if self.r < 1:
            raise InvalidInstance(f"pull r must be >= 1, got {self.r}")
        if self.a - self.b > (self.c - self.d) - self.r:
            raise InvalidInstance(
                f"need a - b <= c - d - r, got {self.a - self.b} > {self.c - self.d - self.r}"
            )
        m = self.region.m
        for label, pt in (
            ("A", (0, self.a)),
            ("B", (0, self.b)),
            ("C", (m, self.c)),
            ("D", (m, self.d)),
            ("C'", (m, self.c - self.r)),
            ("D'", (m, self.d + self.r)),
        ):
            if not contains(self.region, pt):
                raise InvalidInstance(f"endpoint {label} = {pt} lies outside the region")
        if vu == 2:
            lo0 = self.region.lo(0)
            lom = self.region.lo(m)
            if (self.a - lo0) % 2 or (self.b - lo0) % 2:
                raise InvalidInstance("start heights must sit on the step sublattice")
            if (self.c - lom) % 2 or (self.d - lom) % 2:
                raise InvalidInstance("end heights must sit on the step sublattice")
            if self.r % 2:
                raise InvalidInstance("pull must be a multiple of the vertical unit")

    # -- derived data ------------------------------------------------------

    @property
    def shift(self) -> int:
        """Vertical displacement applied to the second path: c - d - r >= a - b."""
        return self.c - self.d - self.r

    @property
    def point_a(self) -> LatticePoint:
        return LatticePoint(0, self.a)

    @property
    def point_b(self) -> LatticePoint:
        return LatticePoint(0, self.b)

    @property
    def point_c(self) -> LatticePoint:
        return LatticePoint(self.region.m, self.c)

    @property
    def point_d(self) -> LatticePoint:
        return LatticePoint(self.region.m, self.d)

    @property
    def point_c_prime(self) -> LatticePoint:
        return LatticePoint(self.region.m, self.c - self.r)

    @property
    def point_d_prime(self) -> LatticePoint:
        return LatticePoint(self.region.m, self.d + self.r)

    def _composite(self, from_y: int, to_y: int, lower: bool) -> Vertices:
        """Edge-run composite: vertical run on column 0, boundary path, vertical
        run on column m.  lower=True follows the lower envelope (descend to it
        first), lower=False the upper envelope (ascend to it first)."""
        region = self.region
        vu = region.step_set.vertical_unit
        upper_path, lower_path, _, _ = boundary_paths(region)
        envelope = lower_path if lower else upper_path
        y_env0 = envelope.start.y
        y_env_m = envelope.end.y
        step = -vu if from_y > y_env0 else vu
        verts = [LatticePoint(0, y) for y in range(from_y, y_env0, step)]
        verts.extend(envelope.vertices)
        step = vu if to_y > y_env_m else -vu
        verts.extend(
            LatticePoint(region.m, y) for y in range(y_env_m + step, to_y + step, step)
        )
        return tuple(verts)

    @cached_property
    def lower_guide(self) -> Vertices:
        """Composite B -> D: down the left edge, along the lower envelope, up the right edge."""
        return self._composite(self.b, self.d, lower=True)

    @cached_property
    def upper_guide(self) -> Vertices:
        """Composite A -> C: up the left edge, along the upper envelope, down the right edge."""
        return self._composite(self.a, self.c, lower=False)

    @cached_property
    def shifted_floor(self) -> Vertices:
        """The lower guide raised by the shift; runs (0, b+shift) -> C'."""
        s = self.shift
        return tuple(p.shifted(s) for p in self.lower_guide)

    @cached_property
    def _shifted_floor_set(self) -> frozenset[LatticePoint]:
        return frozenset(self.shifted_floor)

    @cached_property
    def _upper_guide_set(self) -> frozenset[LatticePoint]:
        return frozenset(self.upper_guide)

    @cached_property
    def component(self) -> frozenset[LatticePoint]:
        """4-connected slab piece between the raised lower envelope and the
        upper envelope, grown from the right-edge segment [C', C]."""
        region = self.region
        s = self.shift
        m = region.m

        def inside(x: int, y: int) -> bool:
            return 0 <= x <= m and region.lo(x) + s <= y <= region.hi(x)

        seed = [LatticePoint(m, y) for y in range(self.c - self.r, self.c + 1)]
        seen = set(seed)
        queue = deque(seed)
        while queue:
            x, y = queue.popleft()
            for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if inside(nx, ny):
                    p = LatticePoint(nx, ny)
                    if p not in seen:
                        seen.add(p)
                        queue.append(p)
        return frozenset(seen)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "r": self.r}

    @classmethod
    def from_json(cls, region: Region, data: Mapping) -> "InjectionInstance":
        return cls(
            region,
            int(data["a"]),
            int(data["b"]),
            int(data["c"]),
            int(data["d"]),
            int(data["r"]),
        )


@dataclass
class ConstructionTrace:
    """Everything the suffix-swap walk looked at, for audit and drawing.

    The junction fields describe the first swap, whose junction vertex lies
    on both input paths (the first path and the raised second path).  The
    trim fields describe the first repair round, when one ran: its points sit
    on the paths produced by the preceding swap, whose vertices are all drawn
    from the input paths' vertex sets.  repair_rounds counts how many repair
    rounds the walk needed; fallback_used mirrors repair_rounds > 0.
    """

    shift: int
    lower_guide: Vertices
    upper_guide: Vertices
    shifted_floor: Vertices
    raised_second: LatticePath | None = None
    component: frozenset[LatticePoint] = frozenset()
    trim_first_index: int | None = None
    trim_first: LatticePoint | None = None
    trim_second_index: int | None = None
    trim_second: LatticePoint | None = None
    junction: LatticePoint | None = None
    junction_first_index: int | None = None
    junction_second_index: int | None = None
    junction_dropped: LatticePoint | None = None
    fallback_used: bool = False
    repair_rounds: int = 0


def _new_trace(instance: InjectionInstance) -> ConstructionTrace:
    return ConstructionTrace(
        shift=instance.shift,
        lower_guide=instance.lower_guide,
        upper_guide=instance.upper_guide,
        shifted_floor=instance.shifted_floor,
        component=instance.component,
    )


def _check_pair(instance: InjectionInstance, pair: PathPair, primed: bool):
    region = instance.region
    ends = (
        (instance.point_c_prime, instance.point_d_prime)
        if primed
        else (instance.point_c, instance.point_d)
    )
    for label, path, start, end in (
        ("first", pair.first, instance.point_a, ends[0]),
        ("second", pair.second, instance.point_b, ends[1]),
    ):
        if path.start != start or path.end != end:
            raise InvalidInstance(
                f"{label} path must run {start} -> {end}, got "
                f"{path.start} -> {path.end}"
            )
        for s in path.steps:
            if s not in region.step_set:
                raise InvalidInstance(f"{label} path uses step {s!r} outside the step set")
        if not path_in_region(region, path):
            raise InvalidInstance(f"{label} path leaves the region")


_WALK_CAP = 100_000


def _swap_suffixes(
    a: LatticePath, b: LatticePath, i: int, j: int
) -> tuple[LatticePath, LatticePath]:
    return (
        LatticePath(a.start, a.steps[:i] + b.steps[j:]),
        LatticePath(b.start, b.steps[:j] + a.steps[i:]),
    )


def _alternating_walk(
    instance: InjectionInstance, first: LatticePath, raised: LatticePath, trace: ConstructionTrace
) -> tuple[LatticePath, LatticePath]:
    """Swap suffixes at canonical junctions until both outputs fit the region.

    One round: swap at the canonical junction of (raised-side, first-side).
    If the result has the first-side output poking above the ceiling or the
    lowered second-side output dipping below the floor, a repair trims both
    paths just past their last vertex outside the band [floor + shift,
    ceiling], swaps the in-band tails at their canonical junction, and the
    next round swaps again.  Each round is reversible -- the junction rule is
    self-inverse and the trim positions can be recomputed from the outputs
    because swaps preserve the pair's vertex inventory -- so the walk never
    revisits a state and must terminate.  Running the same walk from the
    primed side replays the rounds backwards, which is how the inverse works.
    """
    region = instance.region
    s = instance.shift
    step_set = region.step_set

    def in_band(v: LatticePoint) -> bool:
        lo, hi = region.columns[v.x]
        return lo + s <= v.y <= hi

    def settled(a: LatticePath, b: LatticePath) -> bool:
        return path_in_region(region, a) and path_in_region(
            region, shift_path(b, -s, step_set)
        )

    try:
        j, i = key_intersection(raised, first)
    except NoIntersection as err:
        raise ConstructionFailure("junction", str(err), trace) from err
    junction = first.vertices[i]
    trace.junction = junction
    trace.junction_first_index = i
    trace.junction_second_index = j
    trace.junction_dropped = junction.shifted(-s)
    a, b = _swap_suffixes(first, raised, i, j)

    rounds = 0
    while not settled(a, b):
        rounds += 1
        if rounds > _WALK_CAP:
            raise ConstructionFailure(
                "walk", f"no in-region pair within {_WALK_CAP} repair rounds", trace
            )
        av = a.vertices
        bv = b.vertices
        p = max((k + 1 for k, v in enumerate(av) if not in_band(v)), default=0)
        q = max((k + 1 for k, v in enumerate(bv) if not in_band(v)), default=0)
        if rounds == 1:
            trace.trim_first_index = p
            trace.trim_first = av[p]
            trace.trim_second_index = q
            trace.trim_second = bv[q]
        a_tail = LatticePath(av[p], a.steps[p:])
        b_tail = LatticePath(bv[q], b.steps[q:])
        try:
            j_rel, i_rel = key_intersection(b_tail, a_tail)
            a, b = _swap_suffixes(a, b, p + i_rel, q + j_rel)
            j, i = key_intersection(b, a)
        except NoIntersection as err:
            raise ConstructionFailure("repair", str(err), trace) from err
        a, b = _swap_suffixes(a, b, i, j)
    trace.repair_rounds = rounds
    trace.fallback_used = rounds > 0
    return a, b


def phi_forward(
    instance: InjectionInstance, pair: PathPair
) -> tuple[PathPair, ConstructionTrace]:
    """Apply the suffix-swap map to a pair (A -> C, B -> D).

    Returns the image pair (A -> C', B -> D') and the construction trace.
    Raises ConstructionFailure when the walk cannot complete (with the
    partial trace attached).
    """
    _check_pair(instance, pair, primed=False)
    region = instance.region
    s = instance.shift
    trace = _new_trace(instance)

    raised_second = shift_path(pair.second, s, region.step_set)
    trace.raised_second = raised_second

    out_a, out_b = _alternating_walk(instance, pair.first, raised_second, trace)
    out_first = out_a
    out_second = shift_path(out_b, -s, region.step_set)
    assert out_first.end == instance.point_c_prime
    assert out_second.end == instance.point_d_prime
    return PathPair(out_first, out_second), trace


def phi_inverse(instance: InjectionInstance, pair: PathPair) -> PathPair | None:
    """Exact preimage of a candidate image pair (A -> C', B -> D'), or None.

    Runs the same alternating walk from the primed side.  Every round of the
    forward walk is self-inverse -- the junction rule undoes itself, and the
    repair trims sit at positions recomputable from the outputs -- so for an
    image pair the walk replays the forward rounds backwards and lands on the
    unique preimage.  A final forward check rejects near-misses, so None is
    returned exactly for pairs outside the image.
    """
    _check_pair(instance, pair, primed=True)
    region = instance.region
    s = instance.shift
    trace = _new_trace(instance)
    raised = shift_path(pair.second, s, region.step_set)
    trace.raised_second = raised
    try:
        back_a, back_b = _alternating_walk(instance, pair.first, raised, trace)
    except ConstructionFailure:
        return None
    candidate = PathPair(back_a, shift_path(back_b, -s, region.step_set))
    try:
        image, _ = phi_forward(instance, candidate)
    except (ConstructionFailure, InvalidInstance):
        return None
    return candidate if image == pair else None


def _min_steps(region: Region, frm: LatticePoint, to: LatticePoint) -> int:
    dx = abs(to.x - frm.x)
    dy = abs(to.y - frm.y)
    kind = region.step_set.kind
    if kind == "square":
        return dx + dy
    if kind == "square_diag":
        return max(dx, dy)
    if kind == "dyck":
        return dx
    return (dx + 1) // 2  # schroder


@dataclass
class InjectionReport:
    domain_size: int
    image_size: int
    duplicates: list[tuple[PathPair, list[PathPair]]]
    codomain_violations: list[tuple[PathPair, PathPair, str]]
    profile_violations: list[tuple[PathPair, PathPair]]
    length_violations: list[tuple[PathPair, PathPair]]
    construction_failures: list[tuple[PathPair, ConstructionFailure]]
    roundtrip_failures: list[tuple[PathPair, PathPair]]
    fallback_count: int

    @property
    def passed(self) -> bool:
        return not (
            self.duplicates
            or self.codomain_violations
            or self.profile_violations
            or self.length_violations
            or self.construction_failures
            or self.roundtrip_failures
        )

    def summary(self) -> dict:
        return {
            "domain_size": self.domain_size,
            "image_size": self.image_size,
            "duplicates": len(self.duplicates),
            "codomain_violations": len(self.codomain_violations),
            "profile_violations": len(self.profile_violations),
            "length_violations": len(self.length_violations),
            "construction_failures": len(self.construction_failures),
            "roundtrip_failures": len(self.roundtrip_failures),
            "fallback_count": self.fallback_count,
            "passed": self.passed,
        }


def domain_pairs(instance: InjectionInstance, length_bound: int) -> list[PathPair]:
    """All admissible input pairs with total length <= length_bound."""
    region = instance.region
    budget_first = length_bound - _min_steps(region, instance.point_b, instance.point_d)
    budget_second = length_bound - _min_steps(region, instance.point_a, instance.point_c)
    if budget_first < 0 or budget_second < 0:
        return []
    firsts = enumerate_free_paths(region, instance.point_a, instance.point_c, budget_first)
    seconds = enumerate_free_paths(region, instance.point_b, instance.point_d, budget_second)
    out = []
    for fp in firsts:
        for sp in seconds:
            if len(fp) + len(sp) <= length_bound:
                out.append(PathPair(fp, sp))
    return out


def verify_injection(
    instance: InjectionInstance, length_bound: int, check_roundtrip: bool = True
) -> InjectionReport:
    """Exhaustively audit the map over all pairs with total length <= length_bound.

    Checks: images are distinct, land in the codomain (region containment and
    pulled-together endpoints), preserve joint projection profile and total
    length, and (optionally) that the inverse recovers every input.
    """
    region = instance.region
    m = region.m
    pairs = domain_pairs(instance, length_bound)
    image_of: dict[PathPair, list[PathPair]] = defaultdict(list)
    report = InjectionReport(
        domain_size=len(pairs),
        image_size=0,
        duplicates=[],
        codomain_violations=[],
        profile_violations=[],
        length_violations=[],
        construction_failures=[],
        roundtrip_failures=[],
        fallback_count=0,
    )
    for pair in pairs:
        try:
            image, trace = phi_forward(instance, pair)
        except ConstructionFailure as err:
            report.construction_failures.append((pair, err))
            continue
        if trace.fallback_used:
            report.fallback_count += 1
        image_of[image].append(pair)
        if not path_in_region(region, image.first):
            report.codomain_violations.append((pair, image, "first output leaves region"))
        if not path_in_region(region, image.second):
            report.codomain_violations.append((pair, image, "second output leaves region"))
        in_profile = projection_profile(pair.first, m) + projection_profile(pair.second, m)
        out_profile = projection_profile(image.first, m) + projection_profile(image.second, m)
        if in_profile != out_profile:
            report.profile_violations.append((pair, image))
        if len(pair.first) + len(pair.second) != len(image.first) + len(image.second):
            report.length_violations.append((pair, image))
    report.image_size = len(image_of)
    for image, sources in image_of.items():
        if len(sources) > 1:
            report.duplicates.append((image, sources))
    if check_roundtrip:
        for image, sources in image_of.items():
            back = phi_inverse(instance, image)
            if len(sources) == 1 and back != sources[0]:
                report.roundtrip_failures.append((image, sources[0]))
    return report


def profile_refined_inequality(
    instance: InjectionInstance, length_bound: int
) -> dict:
    """Count domain and codomain pairs per joint projection profile.

    The injection preserves profiles, so for every profile the number of
    domain pairs must not exceed the number of codomain pairs.  Returns a
    dict with per-profile counts and any violations.
    """
    region = instance.region
    m = region.m

    def profile_counts(end_first: LatticePoint, end_second: LatticePoint) -> dict:
        budget_first = length_bound - _min_steps(region, instance.point_b, end_second)
        budget_second = length_bound - _min_steps(region, instance.point_a, end_first)
        if budget_first < 0 or budget_second < 0:
            return {}
        firsts = enumerate_free_paths(region, instance.point_a, end_first, budget_first)
        seconds = enumerate_free_paths(region, instance.point_b, end_second, budget_second)
        counts: dict = defaultdict(int)
        for fp in firsts:
            pf = projection_profile(fp, m)
            for sp in seconds:
                if len(fp) + len(sp) <= length_bound:
                    counts[(pf + projection_profile(sp, m)).key()] += 1
        return counts

    domain = profile_counts(instance.point_c, instance.point_d)
    codomain = profile_counts(instance.point_c_prime, instance.point_d_prime)
    violations = {
        key: (n, codomain.get(key, 0))
        for key, n in domain.items()
        if n > codomain.get(key, 0)
    }
    return {
        "profiles_domain": len(domain),
        "profiles_codomain": len(codomain),
        "domain_pairs": sum(domain.values()),
        "codomain_pairs": sum(codomain.values()),
        "violations": violations,
    }
