"""The acceptance battery: one callable per criterion, shared by the CLI
``selftest`` subcommand and the pytest acceptance module.

Each criterion returns a CriterionResult with a passed flag and enough
detail to see what was measured.  Tolerances are pinned here, not
configurable.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import central, finmodel, homotopy, pi1, variety, weyl
from .errors import NotExact, NotRegular, NotSimultaneouslyDiagonalizable
from .fingerprint import Fingerprint
from .matgroup import central_phases, central_product_su, haar_sample, su, torus_group


@dataclass
class CriterionResult:
    name: str
    passed: bool
    seconds: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper() -> CriterionResult:
        start = time.perf_counter()
        try:
            name, passed, details = fn()
        except Exception as exc:  # a crashed criterion is a failed criterion
            name = fn.__name__.replace("criterion_", "").replace("_", "-")
            return CriterionResult(
                name, False, time.perf_counter() - start, {"error": repr(exc)}
            )
        return CriterionResult(name, passed, time.perf_counter() - start, details)

    wrapper.__name__ = fn.__name__
    return wrapper


@_timed
def criterion_1_component_counts():
    """N(k, m, p) reproduces the published counts exactly, in under a second."""
    start = time.perf_counter()
    values = {
        (2, 3, 2): finmodel.count_components_formula(2, 3, 2),
        (3, 3, 2): finmodel.count_components_formula(3, 3, 2),
        (2, 1, 2): finmodel.count_components_formula(2, 1, 2),
    }
    elapsed = time.perf_counter() - start
    expected = {(2, 3, 2): 2, (3, 3, 2): 29, (2, 1, 2): 2}
    passed = values == expected and elapsed < 1.0
    return "component-counts", passed, {"values": values, "seconds": elapsed}


@_timed
def criterion_2_census_vs_formula():
    """Brute-force censuses over E_p match the closed-form fingerprint count
    (p^k-1)(p^{k-1}-1)/(p^2-1) for p in {2,3}, k in {2,3,4}, plus the exact
    pair counts for Q8 and E_3."""
    details = {}
    ok = True
    for p in (2, 3):
        group = finmodel.extraspecial(p)
        center = group.center()
        for k in (2, 3, 4):
            hist = finmodel.census_fingerprints(group, center, k)
            nonzero = sum(1 for fp in hist if not fp.is_zero)
            formula = (p**k - 1) * (p ** (k - 1) - 1) // (p * p - 1)
            details[f"nonzero p={p} k={k}"] = (nonzero, formula)
            ok &= nonzero == formula
            ok &= all(finmodel.rank_alternating(fp) <= 2 for fp in hist)

    q8 = finmodel.extraspecial(2)
    commuting = finmodel.census_commuting(q8, 2)
    sigma_c = sum(len(q8.centralizer(g)) for g in range(q8.order))
    almost = sum(finmodel.census_fingerprints(q8, q8.center(), 2).values())
    details["Q8 pairs"] = {"commuting": commuting, "sum|C(g)|": sigma_c, "almost": almost}
    ok &= commuting == 40 == sigma_c and almost == 64

    e3 = finmodel.extraspecial(3)
    commuting3 = finmodel.census_commuting(e3, 2)
    sigma_c3 = sum(len(e3.centralizer(g)) for g in range(e3.order))
    details["E_3 pairs"] = {"commuting": commuting3, "sum|C(g)|": sigma_c3}
    ok &= commuting3 == 297 == sigma_c3
    return "census-vs-formula", ok, details


@_timed
def criterion_3_sigma_roundtrip():
    """1000 random regular preimages across SU(2..6), k in {2,3,4}:
    inverse(sigma(pre)) equals the Weyl normal form of pre and
    sigma(inverse(t)) equals t, both within 1e-9; no NotRegular false alarms."""
    grid = [(n, k) for n in (2, 3, 4, 5, 6) for k in (2, 3, 4)]
    trials = 1000
    worst_pre, worst_t = 0.0, 0.0
    false_alarms = 0
    for trial in range(trials):
        n, k = grid[trial % len(grid)]
        desc = su(n)
        g = haar_sample(desc, 10_000 + trial)
        torus = weyl.random_torus_tuple(desc, k, 20_000 + trial)
        pre = weyl.SigmaPreimage(g, torus)
        t = weyl.sigma_k(pre)
        try:
            inv = weyl.sigma_inverse_regular(t, tol=1e-9)
        except NotRegular:
            false_alarms += 1
            continue
        worst_pre = max(worst_pre, weyl.preimage_distance(inv, weyl.weyl_normal_form(pre)))
        worst_t = max(worst_t, variety.tuple_distance(weyl.sigma_k(inv), t))
    passed = false_alarms == 0 and worst_pre <= 1e-9 and worst_t <= 1e-9
    return (
        "sigma-roundtrip",
        passed,
        {"worst_preimage": worst_pre, "worst_tuple": worst_t, "not_regular": false_alarms},
    )


@_timed
def criterion_4_injectivity_regular():
    """200 regular tuples re-diagonalized through independent random frames
    give identical normal forms within 1e-9."""
    worst = 0.0
    for trial in range(200):
        n = 2 + trial % 4
        k = 2 + trial % 3
        t = variety.sample_identity_component(su(n), k, 30_000 + trial)
        a = weyl.sigma_inverse_regular(t, mixing_seed=2 * trial)
        b = weyl.sigma_inverse_regular(t, mixing_seed=2 * trial + 1)
        worst = max(worst, weyl.preimage_distance(a, b))
    return "regular-injectivity", worst <= 1e-9, {"worst": worst}


def _random_realizable_fingerprint(p: int, k: int, rng) -> Fingerprint:
    while True:
        u = rng.integers(0, p, k)
        v = rng.integers(0, p, k)
        pairs = {
            (i, j): (u[i] * v[j] - u[j] * v[i]) % p
            for i in range(k)
            for j in range(i + 1, k)
        }
        fp = Fingerprint.from_pairs(p, k, pairs)
        if not fp.is_zero:
            return fp


@_timed
def criterion_5_classification():
    """500 identity-component samples and 500 exotic samples classify
    correctly; fingerprints survive 100 conjugations, every lift change and
    every deck translate (exhaustively up to |K^k| = 81)."""
    rng = np.random.default_rng(5)
    ok = True
    details = {}

    descriptors = [central_product_su(3, 2), central_product_su(2, 3)]
    for i in range(500):
        desc = descriptors[i % 2]
        k = 2 + i % 3
        t = variety.sample_identity_component(desc, k, 40_000 + i)
        ok &= central.classify_component(t).is_identity

    exotic_checked = 0
    for i in range(500):
        desc = descriptors[i % 2]
        p = 2 if i % 2 == 0 else 3
        k = 2 + i % 3
        fp = _random_realizable_fingerprint(p, k, rng)
        t = variety.sample_exotic(desc, k, fp, 50_000 + i)
        cls = central.classify_component(t)
        ok &= (not cls.is_identity) and cls.fingerprint == fp
        exotic_checked += 1
    details["exotic_checked"] = exotic_checked

    # invariance battery on one tuple per descriptor
    for desc, p in ((central_product_su(3, 2), 2), (central_product_su(2, 3), 3)):
        k = 3 if p == 2 else 4  # |K|^k = 8 and 81
        fp = _random_realizable_fingerprint(p, k, rng)
        t = variety.sample_exotic(desc, k, fp, 60_000 + p)
        for c in range(100):
            conj = variety.conjugate_tuple(t, haar_sample(desc, 70_000 + 100 * p + c))
            cls = central.classify_component(conj)
            ok &= (not cls.is_identity) and cls.fingerprint == fp
        lift = central.lift_tuple(t)
        order = len(central_phases(desc))
        for kappa in itertools.product(range(order), repeat=k):
            moved = central.deck_action(kappa, lift)
            ok &= central.fingerprint(moved) == fp
            ok &= variety.tuple_distance(central.project_lift(moved), t) <= 1e-9
    return "classification-soundness", ok, details


@_timed
def criterion_6_homotopies():
    """100 random 32-segment loops in SU(2) and SU(3) contract below 1e-6;
    65x65 coordinate-loop grids validate with residual exactly 0; 100
    path-to-identity runs keep every waypoint commuting within 1e-9."""
    details = {}
    ok = True
    worst_final = 0.0
    worst_grid = 0.0
    for i in range(100):
        desc = su(2) if i % 2 == 0 else su(3)
        loop = homotopy.random_loop(desc, 32, seed=80_000 + i)
        stages = homotopy.contract_loop(loop)
        worst_final = max(worst_final, homotopy.loop_diameter(stages[-1]))
        grid = homotopy.coordinate_loop_homotopy(
            homotopy.refine_loop(loop), a=i % 2, k=2, s_steps=64
        )
        assert grid.shape == (65, 65)
        worst_grid = max(worst_grid, grid.max_residual())
    ok &= worst_final < 1e-6 and worst_grid == 0.0
    details["worst_final_diameter"] = worst_final
    details["worst_grid_residual"] = worst_grid

    worst_waypoint = 0.0
    for i in range(100):
        desc = su(2) if i % 3 == 0 else su(3)
        k = 2 + i % 3
        t = variety.sample_identity_component(desc, k, 90_000 + i)
        for wp in homotopy.path_to_identity(t, steps=12):
            worst_waypoint = max(worst_waypoint, wp.residual)
    ok &= worst_waypoint <= 1e-9
    details["worst_waypoint_residual"] = worst_waypoint
    return "explicit-homotopies", ok, details


@_timed
def criterion_7_pi1_tables():
    """pi1 values match the published table and exotic answers do not depend
    on k."""
    ok = True
    identity = central.ComponentClass.identity()
    exotic = central.ComponentClass.exotic(Fingerprint.from_pairs(2, 2, {(0, 1): 1}))
    for n in (2, 3, 4, 6):
        for k in (1, 2, 5):
            ok &= pi1.pi1_of_hom(su(n), k, identity).is_trivial
    for r in (1, 2, 3):
        for k in (1, 2, 4):
            got = pi1.pi1_of_hom(torus_group(r), k, identity)
            ok &= got == pi1.FgAbelianGroup(r * k, ())
    for m, p in ((1, 2), (3, 2), (2, 3), (2, 5)):
        for k in (2, 3, 4):
            got = pi1.pi1_of_hom(central_product_su(m, p), k, identity)
            ok &= got == pi1.FgAbelianGroup(0, (p,) * k)
    answers = set()
    for k in (2, 3, 4, 5, 6):
        tag = pi1.pi1_of_hom(central_product_su(3, 2), k, exotic)
        answers.add((tag.name, tag.order))
    ok &= answers == {("(Z/2)^2 x Q8", 32)}
    tag23 = pi1.pi1_of_hom(
        central_product_su(2, 3),
        3,
        central.ComponentClass.exotic(Fingerprint.from_pairs(3, 3, {(0, 1): 1})),
    )
    ok &= (tag23.name, tag23.order) == ("Z/3 x E_3", 3**4)
    spin = pi1.pi1_of_hom("Spin(7)", 3, exotic)
    ok &= (spin.name, spin.order) == ("(Z/2)^4", 16)
    ok &= pi1.pi1_of_hom("Spin(7)", 3, identity).is_trivial
    return "pi1-tables", ok, {"exotic_answers": sorted(answers)}


def _sequence_fixture(r: int, q: int, k: int):
    """Fixture encoding of 1 -> (Z^r)^k -> pi1(Hom) -> (Z/q)^k -> 1."""
    free = pi1.FgAbelianGroup(r * k, ())
    quotient = pi1.FgAbelianGroup(0, (q,) * k)
    if r == 0:
        middle = pi1.FgAbelianGroup(0, (q,) * k)
        f = [[0] * 0 for _ in range(k)]
        g = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    else:
        middle = pi1.FgAbelianGroup(r * k, ())
        n = r * k
        f = [[0] * n for _ in range(n)]
        for copy in range(k):
            for c in range(r):
                col = copy * r + c
                f[col][col] = q if c == 0 else 1
        g = [[0] * n for _ in range(k)]
        for copy in range(k):
            g[copy][copy * r] = 1
    return free, middle, quotient, f, g


@_timed
def criterion_8_exactness():
    """The covering-sequence fixtures are exact; a corrupted map is caught."""
    ok = True
    for r, q, k in ((0, 2, 2), (1, 2, 2), (2, 3, 3)):
        a, b, c, f, g = _sequence_fixture(r, q, k)
        ok &= pi1.check_exact_sequence(a, b, c, f, g) is True
    a, b, c, f, g = _sequence_fixture(1, 2, 2)
    f[0][0] = 1  # breaks im(f) = ker(g)
    try:
        pi1.check_exact_sequence(a, b, c, f, g)
        ok = False
    except NotExact:
        pass
    return "exactness-bookkeeping", ok, {}


CRITERIA = [
    criterion_1_component_counts,
    criterion_2_census_vs_formula,
    criterion_3_sigma_roundtrip,
    criterion_4_injectivity_regular,
    criterion_5_classification,
    criterion_6_homotopies,
    criterion_7_pi1_tables,
    criterion_8_exactness,
]


def run_all(echo=print) -> list:
    results = []
    for fn in CRITERIA:
        res = fn()
        results.append(res)
        if echo:
            echo(res.line())
    return results
