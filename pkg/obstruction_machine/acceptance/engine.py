"""
Acceptance Engine - one-shot reproduction suite

Runs every acceptance criterion against the library and collects a
pass/fail table. Failures are recorded, never raised. Results carry no
timestamps or timings so two runs render byte-identical output.

Fault injection: pass a different E8 Gram matrix to AcceptanceEngine and only
the E8 enumeration line is affected.
"""

import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from ..arrangement.engine import (
    betti_complement,
    k3_arrangement_from_roots,
    make_arrangement,
    poincare_polynomial,
    single_subspace_betti,
    transversality_check,
)
from ..core.config import AcceptanceConfig, get_config
from ..core.errors import ObstructionMachineError, TransversalityFailure
from ..core.isometry import (
    Isometry,
    SubgroupTag,
    classify,
    compose,
    direct_sum_isometry,
    identity,
    reflection,
    spinor_norm,
)
from ..core.lattice import Lattice, builtin_lattice, direct_sum, enumerate_vectors, make_lattice
from ..genus.engine import (
    ell_relation_constant,
    fiber_integrate_surface,
    l_tilde_rank2,
    l_tilde_series,
    series_inverse_check,
    verify_bo3_relation,
)
from ..genus.graded import GradedPolynomial
from ..obstruction.engine import (
    borel_stable_range,
    bott_obstruction,
    e2_region_check,
    harer_genus_threshold,
    stabilizer_report,
)
from ..obstruction.tensor import connected_sum_pullback, ell_monomial, independence_certificate

logger = logging.getLogger(__name__)

CheckOutcome = Tuple[bool, str]


@dataclass
class CheckResult:
    """Result of a single acceptance criterion."""
    number: int
    name: str
    passed: bool
    detail: str = ""
    error_message: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "error_message": self.error_message,
        }


@dataclass
class AcceptanceReport:
    results: List[CheckResult]

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "results": [r.to_dict() for r in self.results],
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "all_passed": self.all_passed,
        }


def k3_root_pool() -> List[Tuple[int, ...]]:
    """
    Roots of the K3 lattice used for random reflection words: the H roots
    +/-(e1 - e2) in each hyperbolic block and the E8 roots placed in either
    -E8 block (norm 2 in E8 is norm -2 in -E8).
    """
    k3 = builtin_lattice("K3")
    pool: List[Tuple[int, ...]] = []
    for a in range(3):
        for s in (1, -1):
            v = [0] * k3.rank
            v[2 * a], v[2 * a + 1] = s, -s
            pool.append(tuple(v))
    e8_roots = enumerate_vectors(builtin_lattice("E8"), 2)
    for offset in (6, 14):
        for r in e8_roots:
            v = [0] * k3.rank
            v[offset:offset + 8] = r
            pool.append(tuple(v))
    return pool


class AcceptanceEngine:
    """
    Acceptance Engine - runs the twelve reproduction criteria.

    Each criterion is a method returning (passed, detail); run_check wraps it
    so exceptions become failed rows.
    """

    def __init__(
        self,
        config: Optional[AcceptanceConfig] = None,
        e8_gram: Optional[Sequence[Sequence[int]]] = None,
    ):
        self.config = config or get_config().acceptance
        self.e8_gram = e8_gram

    def run_check(self, number: int, name: str, check: Callable[[], CheckOutcome]) -> CheckResult:
        start = time.perf_counter()
        try:
            passed, detail = check()
            error_message = None
        except ObstructionMachineError as e:
            passed, detail, error_message = False, "", f"{e.name}: {e.message}"
        except Exception as e:
            passed, detail, error_message = False, "", f"{type(e).__name__}: {e}"
        logger.info("Criterion %d (%s): %s in %.2fs", number, name, "pass" if passed else "FAIL", time.perf_counter() - start)
        return CheckResult(number=number, name=name, passed=passed, detail=detail, error_message=error_message)

    def checks(self) -> List[Tuple[str, Callable[[], CheckOutcome]]]:
        return [
            ("K3 lattice invariants", self.check_k3_lattice),
            ("E8 norm-2 vectors", self.check_e8_roots),
            ("Reflections in H", self.check_h_reflections),
            ("Spinor norm multiplicativity", self.check_spinor_multiplicativity),
            ("L~ series identity", self.check_series),
            ("BO3 relation and l constant", self.check_bo3),
            ("Fiber integration", self.check_fiber_integration),
            ("Thresholds", self.check_thresholds),
            ("Connected-sum calculus", self.check_connected_sums),
            ("Stabilizer reports", self.check_stabilizers),
            ("Arrangement Betti numbers", self.check_arrangements),
            ("Determinism", self.check_determinism),
        ]

    def run(self, include_determinism: bool = True) -> AcceptanceReport:
        results = [
            self.run_check(i, name, fn)
            for i, (name, fn) in enumerate(self.checks(), start=1)
            if include_determinism or fn != self.check_determinism
        ]
        report = AcceptanceReport(results=results)
        logger.info("Acceptance: %d/%d passed", report.passed, report.total)
        return report

    # -- criteria -----------------------------------------------------------

    def check_k3_lattice(self) -> CheckOutcome:
        k3 = builtin_lattice("K3")
        sig = k3.signature
        ok = k3.rank == 22 and k3.is_even and k3.is_unimodular and sig.as_tuple() == (3, 19) and not sig.is_degenerate
        return ok, f"rank {k3.rank}, even {k3.is_even}, det {k3.determinant}, signature {sig}"

    def check_e8_roots(self) -> CheckOutcome:
        e8 = make_lattice(self.e8_gram, name="E8") if self.e8_gram is not None else builtin_lattice("E8")
        roots = enumerate_vectors(e8, 2)
        closed = set(roots) == {tuple(-x for x in v) for v in roots}
        distinct = len(set(roots)) == len(roots)
        return len(roots) == 240 and closed and distinct, f"{len(roots)} vectors, closed under negation {closed}"

    def check_h_reflections(self) -> CheckOutcome:
        h = builtin_lattice("H")
        r_plus = reflection(h, (1, 1))
        r_minus = reflection(h, (1, -1))
        c_plus, c_minus = classify(r_plus), classify(r_minus)
        involutions = compose(r_plus, r_plus).is_identity() and compose(r_minus, r_minus).is_identity()

        rest = builtin_lattice("H")
        for part in ("H", "-E8", "-E8"):
            rest = direct_sum(rest, builtin_lattice(part))
        plus_k3 = classify(direct_sum_isometry(r_plus, rest))
        minus_k3 = classify(direct_sum_isometry(r_minus, rest))

        ok = (
            (c_plus.determinant, c_plus.spinor_norm) == (-1, 1)
            and (c_minus.determinant, c_minus.spinor_norm) == (-1, -1)
            and involutions
            and minus_k3.subgroup_tag is SubgroupTag.AUT_PRIME_ONLY
            and plus_k3.subgroup_tag is SubgroupTag.OUTSIDE_DETSPIN
        )
        return ok, (
            f"R+ ({c_plus.determinant},{c_plus.spinor_norm}), R- ({c_minus.determinant},{c_minus.spinor_norm}), "
            f"R-+id {minus_k3.subgroup_tag.value}, R++id {plus_k3.subgroup_tag.value}"
        )

    def _random_word(self, rng: random.Random, k3: Lattice, pool: Sequence[Tuple[int, ...]],
                     cache: Dict[Tuple[int, ...], Isometry]) -> Isometry:
        word = identity(k3)
        for _ in range(rng.randint(1, self.config.max_word_length)):
            root = pool[rng.randrange(len(pool))]
            if root not in cache:
                cache[root] = reflection(k3, root)
            word = compose(word, cache[root])
        return word

    def check_spinor_multiplicativity(self) -> CheckOutcome:
        k3 = builtin_lattice("K3")
        pool = k3_root_pool()
        rng = random.Random(self.config.seed)
        cache: Dict[Tuple[int, ...], Isometry] = {}
        failures = 0
        for _ in range(self.config.reflection_words):
            g = self._random_word(rng, k3, pool, cache)
            h = self._random_word(rng, k3, pool, cache)
            gh = compose(g, h)
            if spinor_norm(gh) != spinor_norm(g) * spinor_norm(h) or gh.determinant != g.determinant * h.determinant:
                failures += 1
        return failures == 0, f"{self.config.reflection_words} word pairs, {failures} failures"

    def check_series(self) -> CheckOutcome:
        series = l_tilde_series(20)
        head = (series.coefficient(0), series.coefficient(2), series.coefficient(4))
        identity_holds = series_inverse_check(20)
        ok = identity_holds and head == (Fraction(2), Fraction(1, 6), Fraction(-1, 360))
        return ok, f"identity {identity_holds}, coefficients {', '.join(str(c) for c in head)}"

    def check_bo3(self) -> CheckOutcome:
        relation = verify_bo3_relation()
        constant = ell_relation_constant()
        ok = relation.equal and constant.computed == 24 and constant.discrepancy
        return ok, (
            f"{relation.lhs} = {relation.rhs}; l_1^2 = {constant.computed} l_2 "
            f"(published {constant.published}, discrepancy reported)"
        )

    def check_fiber_integration(self) -> CheckOutcome:
        first = fiber_integrate_surface(l_tilde_rank2(1))
        second = fiber_integrate_surface(l_tilde_rank2(2))
        kappa1 = GradedPolynomial.generator("kappa_1") * Fraction(1, 6)
        kappa3 = GradedPolynomial.generator("kappa_3") * Fraction(-1, 360)
        return first == kappa1 and second == kappa3, f"L~1 -> {first}, L~2 -> {second}"

    def check_thresholds(self) -> CheckOutcome:
        sr = borel_stable_range(3, 19)
        harer = harer_genus_threshold(8)
        ok = sr.bijective_upto == 9 and harer == 18 and bott_obstruction(2, 1) and not bott_obstruction(1, 1)
        return ok, f"bijective_upto {sr.bijective_upto}, harer(8) = {harer}, bott(2,1) true, bott(1,1) false"

    def check_connected_sums(self) -> CheckOutcome:
        rng = random.Random(self.config.seed + 1)
        failures = 0
        for _ in range(self.config.monomial_samples):
            slots = rng.randint(1, self.config.max_slots)
            x = ell_monomial([rng.randint(0, 2) for _ in range(3)])
            y = ell_monomial([rng.randint(0, 2) for _ in range(3)])
            if connected_sum_pullback(x * y, slots) != connected_sum_pullback(x, slots) * connected_sum_pullback(y, slots):
                failures += 1

        cert = independence_certificate(2, 3)
        by_exps = {e.exponents: e for e in cert.entries}
        distinguishes = by_exps[(0, 1)].signature != by_exps[(2, 0)].signature
        ok = failures == 0 and cert.independent and distinguishes
        return ok, (
            f"{self.config.monomial_samples} samples, {failures} failures; "
            f"certificate(2,3) {cert.independent} over {len(cert.entries)} monomials; l_2 vs l_1^2 distinct {distinguishes}"
        )

    def check_stabilizers(self) -> CheckOutcome:
        k3 = builtin_lattice("K3")
        root = [0] * 22
        root[6] = 1
        report = stabilizer_report(k3, [root])
        region = e2_region_check(9, range(1, 5))
        ok = report.ambient == (3, 18) and report.odd_vanishing_upto == 8 and region.all_ok
        return ok, f"{report.ambient_label}, range {report.odd_vanishing_upto}; region rows {len(region.rows)} ok {region.all_ok}"

    def check_arrangements(self) -> CheckOutcome:
        roots = []
        for i in range(6, 6 + self.config.max_arrangement_size):
            v = [0] * 22
            v[i] = 1
            roots.append(v)

        single = betti_complement(k3_arrangement_from_roots(roots[:1]), 2)
        sphere = single_subspace_betti(3)
        single_ok = single.betti == sphere.betti == {0: 1, 1: 0, 2: 1}

        triple = betti_complement(k3_arrangement_from_roots(roots[:3]), 6)
        triple_ok = [triple.rank(d) for d in (0, 2, 4, 6)] == [1, 3, 3, 1]

        t = sympy.Symbol("t")
        generating_ok = True
        for m in range(1, self.config.max_arrangement_size + 1):
            table = betti_complement(k3_arrangement_from_roots(roots[:m]), 2 * m)
            expected = [int(c) for c in reversed(sympy.Poly((1 + t) ** m, t).all_coeffs())]
            generating_ok &= poincare_polynomial(table) == expected[: table.valid_upto // 2 + 1]

        e = lambda i: [1 if j == i else 0 for j in range(7)]
        pair = make_arrangement(7, [[e(0), e(1), e(2)], [e(0), e(3), e(4)]])
        check = transversality_check(pair, 2)
        try:
            betti_complement(pair, 4)
            rejected = False
        except TransversalityFailure:
            rejected = True
        witness_ok = not check.transversal and check.witness == (0, 1) and rejected

        ok = single_ok and triple_ok and generating_ok and witness_ok
        return ok, (
            f"m=1 {single_ok}, m=3 {triple_ok}, (1+t)^m for m<={self.config.max_arrangement_size} {generating_ok}, "
            f"witness {list(check.witness) if check.witness else None}"
        )

    def render_suite_json(self) -> str:
        """The `reproduce --json` payload for every criterion except determinism."""
        from ..cli import Output, render

        report = AcceptanceEngine(config=self.config, e8_gram=self.e8_gram).run(include_determinism=False)
        return render(Output(data=report.to_dict()), as_json=True, cite=False)

    def check_determinism(self) -> CheckOutcome:
        from ..cli import execute

        commands = [
            ["lattice", "K3", "--json"],
            ["genus", "--order", "8", "--json"],
            ["independence", "2", "3", "--json"],
            ["report", "K3", "--k", "1", "--k3-summand", "--json", "--cite"],
            ["betti", "--roots", "3", "--max-degree", "6", "--json"],
        ]
        mismatches = [c[0] for c in commands if execute(c) != execute(c)]
        if self.render_suite_json() != self.render_suite_json():
            mismatches.append("reproduce")
        return not mismatches, (
            f"{len(commands)} commands and the suite rendered twice, mismatches {mismatches or 'none'}"
        )


def run_acceptance(e8_gram: Optional[Sequence[Sequence[int]]] = None) -> AcceptanceReport:
    return AcceptanceEngine(e8_gram=e8_gram).run()


__all__ = ["CheckResult", "AcceptanceReport", "AcceptanceEngine", "k3_root_pool", "run_acceptance"]
