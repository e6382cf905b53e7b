"""
Desk-scale acceptance suite: exact identities of the Poincare polynomials plus the
numerical suites of FiberVerifier on a fixed set of configurations.
"""
from fractions import Fraction

from .betti import (
    ONE_PLUS_T,
    ONE_PLUS_T3,
    consistency_report,
    cp1_bundle_check,
    dimension,
    hn_poincare,
    poincare,
    u2_poincare,
)
from .polynomial import IntPolynomial
from .report import VerificationReport
from .utils import DEFAULT_TOLERANCES
from .verifier import FiberVerifier
from .weights import WeightConfig, is_regular

F = Fraction

# configurations whose genus-zero base is empty
PARABOLIC_CONFIGS = [
    WeightConfig.parabolic(1, [F(1, 2)]),
    WeightConfig.parabolic(1, [F(9, 10), F(1, 10)]),
    WeightConfig.parabolic(2, [F(1, 2)]),
    WeightConfig.parabolic(2, [F(1, 3), F(1, 4)]),
    WeightConfig.parabolic(1, [F(1, 5), F(1, 5), F(1, 2)]),
]

KNOWN_POINCARE = [
    (WeightConfig.parabolic(1, [F(1, 2)]), IntPolynomial([1, 0, 1])),
    (WeightConfig.parabolic(1, [F(9, 10), F(1, 10)]), IntPolynomial([1, 0, 2, 0, 1])),
    (WeightConfig.parabolic(2, [F(1, 2)]), IntPolynomial([1, 0, 2, 4, 2, 4, 2, 0, 1])),
]

DERIVATIVE_CONFIGS = [
    WeightConfig.parabolic(1, [F(1, 2)]),
    WeightConfig.parabolic(2, [F(1, 2)]),
    WeightConfig.parabolic(1, [F(9, 10), F(1, 10)]),
]

REGULAR_CONFIGS = [WeightConfig.classic(2), WeightConfig.parabolic(1, [F(1, 3), F(1, 4)])]

IRREGULAR_CONFIGS = [
    WeightConfig.parabolic(1, [F(1, 2), F(1, 2)]),
    WeightConfig.parabolic(0, [F(1, 2), F(1, 2)]),
]

CRITICAL_CONFIGS = [
    WeightConfig.parabolic(1, [F(1, 2)]),
    WeightConfig.parabolic(1, [F(9, 10), F(1, 10)]),
    WeightConfig.parabolic(2, [F(1, 2)]),
    WeightConfig.classic(2),
]

SYMMETRY_CONFIGS = [WeightConfig.classic(2), WeightConfig.parabolic(1, [F(9, 10), F(1, 10)])]

CP1_CASES = [(1, 2), (1, 3), (2, 2)]


def exact_report(report=None):
    """Harder-Narasimhan values, the recursion, duality, Euler characteristics,
    known Parabolic values, regularity and the U(2) factor."""
    if report is None:
        report = VerificationReport("exact")

    hn2 = IntPolynomial([1, 0, 1, 4, 1, 0, 1])
    for g, expected in [(0, IntPolynomial()), (1, IntPolynomial([1])), (2, hn2)]:
        got = hn_poincare(g)
        report.add(f"hn g={g}", got == expected, measured=got, expected=expected, suite="exact")

    bad = [
        g for g in range(1, 21)
        if hn_poincare(g)
        != ONE_PLUS_T3 ** 2 * hn_poincare(g - 1) + (ONE_PLUS_T ** (2 * g - 2)).shift(2 * g - 2)
    ]
    report.add("hn recursion g=1..20", not bad, measured=bad, expected=[], suite="exact")

    bad = [
        g for g in range(1, 11)
        if not poincare(WeightConfig.classic(g)).is_palindromic(6 * g - 6)
    ]
    report.add("classic palindromy g=1..10", not bad, measured=bad, expected=[], suite="exact")

    for cfg in PARABOLIC_CONFIGS:
        consistency = consistency_report(cfg)
        for check in consistency:
            report.add(
                f"{check['name']} {cfg!r}", check["passed"], measured=check["measured"],
                expected=check["expected"], suite="exact",
            )

    for cfg, expected in KNOWN_POINCARE:
        got = poincare(cfg)
        report.add(f"poincare {cfg!r}", got == expected, measured=got, expected=expected,
                   suite="exact")
        u2 = u2_poincare(cfg)
        report.add(f"u2 {cfg!r}", u2 == ONE_PLUS_T ** (2 * cfg.g) * got, measured=u2,
                   suite="exact")

    for g, n in CP1_CASES:
        passed, got, expected, cfg = cp1_bundle_check(g, n)
        report.add(f"cp1_bundle g={g} n={n}", passed, measured=got, expected=expected,
                   suite="exact")

    regular = is_regular(WeightConfig.classic(1))
    report.add("regular classic", regular.regular, suite="exact")
    half = is_regular(WeightConfig.parabolic(1, [F(1, 2), F(1, 2)]))
    report.add("irregular (1/2,1/2)", not half.regular and half.witness == (1,),
               measured=half.witness, expected=[1], suite="exact")
    empty = is_regular(WeightConfig.parabolic(1, []))
    report.add("irregular n=0", not empty.regular and empty.witness == (),
               measured=empty.witness, expected=[], suite="exact")
    report.add("dimension classic g=2", dimension(WeightConfig.classic(2)) == 6,
               measured=dimension(WeightConfig.classic(2)), expected=6, suite="exact")
    return report


def numeric_report(seed=0, tolerances=None, samples=100, threads=1, verbose=False, report=None):
    """The FiberVerifier suites on the fixed configurations."""
    tolerances = tolerances or DEFAULT_TOLERANCES
    verifier = FiberVerifier(verbose=verbose, threads=threads, seed=seed, tolerances=tolerances)
    if report is None:
        report = VerificationReport("numeric", seed=seed, tolerances=tolerances.to_dict())
    for cfg in DERIVATIVE_CONFIGS:
        verifier.derivative_check(cfg, samples, report=report)
        verifier.splitting_check(cfg, report=report)
    verifier.splitting_check(WeightConfig.classic(2), report=report)
    for cfg in REGULAR_CONFIGS:
        verifier.regular_check(cfg, samples, report)
    for cfg in IRREGULAR_CONFIGS:
        verifier.irregular_check(cfg, report)
    for cfg in CRITICAL_CONFIGS:
        verifier.critical_check(cfg, report)
    for cfg in SYMMETRY_CONFIGS:
        verifier.symmetry_check(cfg, samples, report)
    return report


def run_selftest(seed=0, tolerances=None, samples=100, threads=1, verbose=False):
    """
    Run the whole acceptance suite.

    :param seed: master seed
    :param tolerances: Tolerances; ``DEFAULT_TOLERANCES.scaled(0)`` makes the numeric checks fail
    :param samples: random points per numerical suite
    :param threads: worker processes
    :param verbose: progress output on stderr
    :return: VerificationReport
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    report = VerificationReport("selftest", seed=seed, tolerances=tolerances.to_dict())
    exact_report(report)
    numeric_report(seed, tolerances, samples, threads, verbose, report)
    return report
