import math
import multiprocessing
import sys
from dataclasses import dataclass, replace

import numpy as np
from tqdm import tqdm

from .actions import half_twist, is_circle_fixed, sign_action, u1_action, unit_bits
from .critical import critical_tuple, hessian_index, torus_census
from .errors import (
    ActionUndefined,
    CensusMismatch,
    DegenerateHessian,
    NoConvergence,
    SliceDimensionMismatch,
)
from .report import VerificationReport
from .representation import (
    RepTuple,
    TangentVector,
    conjugate,
    dmu_apply,
    fd_dmu,
    irregular_witness_tuple,
    morse_function,
    mu_eval,
    random_tuple,
    rank_dmu,
    residual_norm,
    solve_to_fiber,
    splitting_defect,
)
from .su2 import IDENTITY, MINUS_IDENTITY, commutator, haar_sample
from .utils import DEFAULT_TOLERANCES, HessianConfig, SolverConfig, task_rng
from .weights import Mode, is_regular

PROBE_STARTS = 64
# task index offsets keep the random streams of different suites apart
_TANGENT_STREAM = 100000
_SYMMETRY_STREAM = 200000
_SPLIT_STREAM = 300000
_ACTION_STREAM = 400000


@dataclass
class ProbeResult:
    """
    Outcome of the genus-zero nonemptiness probe. A missing witness means
    "probably empty", never a proof of emptiness.
    """

    witness: RepTuple
    best_residual: float
    starts: int

    @property
    def probably_empty(self):
        return self.witness is None

    def to_dict(self):
        out = {"starts": self.starts, "best_residual": self.best_residual}
        if self.witness is None:
            out["verdict"] = "probably_empty"
        else:
            out["verdict"] = "nonempty"
            out["witness"] = [list(c.array) for c in self.witness.C]
        return out


def _solve_task(cfg, seed, idx, solver):
    rng = task_rng(seed, idx)
    start = random_tuple(cfg, rng)
    solver = replace(solver, seed=int(rng.integers(2 ** 31)))
    try:
        p = solve_to_fiber(start, solver)
        return idx, p, residual_norm(p)
    except NoConvergence as e:
        return idx, None, e.residual


class FiberVerifier(object):
    """
    Numerical verification of the product map mu, its fibers and the critical
    points of f = 1/2 tr A_g.

    Every random stream is derived from ``seed`` and a task index, so results do
    not depend on ``threads``.
    """

    def __init__(
        self, verbose=False, threads=1, seed=0, tolerances=None, solver=None, hessian=None
    ):
        if type(threads) is not int or threads < 1:
            raise ValueError("'threads' must be a positive integer value")
        if type(seed) is not int:
            raise ValueError("'seed' must be integer value")
        self.verbose = verbose
        self.threads = threads
        self.seed = seed
        self.tolerances = tolerances or DEFAULT_TOLERANCES
        self.solver = solver or SolverConfig()
        self.hessian = hessian or HessianConfig(eig_zero_rel=self.tolerances.eig_zero)

    def __repr__(self):
        return f"FiberVerifier(seed={self.seed}, threads={self.threads})"

    def _verbose_print(self, msg, end="\n"):
        if self.verbose:
            print(msg, end=end, file=sys.stderr, flush=True)

    def _progress(self, iterable, desc, total=None):
        return tqdm(
            iterable, desc=desc, total=total, disable=not self.verbose, file=sys.stderr
        )

    def _run_tasks(self, func, tasks, desc):
        # tasks: list of argument tuples; results come back in task order
        if self.threads == 1:
            return [func(*args) for args in self._progress(tasks, desc)]
        with multiprocessing.Pool(processes=self.threads) as pool:
            results = [pool.apply_async(func, args=args) for args in tasks]
            return [r.get() for r in self._progress(results, desc)]

    def _new_report(self, title, cfg):
        return VerificationReport(
            title, config=cfg.to_dict(), seed=self.seed, tolerances=self.tolerances.to_dict()
        )

    def sample_fiber(self, cfg, samples=100, offset=0):
        """
        Haar-random multi-start solves onto mu^{-1}(I).

        :param cfg: Classic or Parabolic WeightConfig
        :param samples: number of starts
        :param offset: first task index
        :return: list of (RepTuple or None, residual), in task order
        """
        if type(samples) is not int or samples < 1:
            raise ValueError("'samples' must be a positive integer value")
        self._verbose_print(f"Solving {samples} starts for {cfg!r}...")
        tasks = [(cfg, self.seed, offset + idx, self.solver) for idx in range(samples)]
        results = self._run_tasks(_solve_task, tasks, "fiber")
        return [(p, res) for _, p, res in sorted(results, key=lambda r: r[0])]

    def _fiber_points(self, cfg, samples, offset=0):
        points = [p for p, _ in self.sample_fiber(cfg, samples, offset) if p is not None]
        if not points:
            raise NoConvergence(math.pi, samples)
        return points

    def nonempty_probe(self, cfg, starts=PROBE_STARTS):
        """
        Multi-start search for a point of mu_{0,n}^{-1}(I).

        :param cfg: Parabolic WeightConfig with g = 0
        :param starts: number of Haar-random starts
        :return: ProbeResult
        """
        if cfg.g != 0:
            raise ValueError("the nonemptiness probe is for genus zero")
        results = self.sample_fiber(cfg, starts)
        best = min(res for _, res in results)
        witness = next((p for p, _ in results if p is not None), None)
        self._verbose_print(
            "witness found" if witness is not None else f"probably empty (best residual {best:.2e})"
        )
        return ProbeResult(witness, float(best), starts)

    def derivative_check(self, cfg, pairs=100, step=1e-5, report=None):
        """
        dmu_apply against central differences of mu on random (point, tangent) pairs.
        """
        if report is None:
            report = self._new_report("derivative", cfg)
        points = self._fiber_points(cfg, pairs)
        worst = 0.0
        for idx, p in enumerate(self._progress(points, "derivative")):
            v = TangentVector.random(p, task_rng(self.seed, _TANGENT_STREAM + idx))
            exact = dmu_apply(p, v).array
            approx = fd_dmu(p, v, step)
            scale = max(np.linalg.norm(exact), 1e-300)
            worst = max(worst, float(np.linalg.norm(exact - approx) / scale))
        tol = self.tolerances.derivative
        report.add(
            f"dmu_fd {_label(cfg)}", len(points) >= pairs and worst < tol,
            measured={"max_rel_error": worst, "pairs": len(points)}, tolerance=tol,
            suite="derivative",
        )
        return report

    def splitting_check(self, cfg, samples=20, report=None):
        """
        The splitting of D mu at A_g = +I and -I. For g >= 2 the points are genus g-1
        fiber points extended by (+-I, B_g), which stay on the fiber; for g = 1
        they are random tuples.
        """
        if cfg.g < 1:
            raise ValueError("the splitting needs g >= 1")
        if report is None:
            report = self._new_report("splitting", cfg)
        lower_cfg = cfg.with_genus(cfg.g - 1)
        worst = 0.0
        for idx in self._progress(range(samples), "splitting"):
            rng = task_rng(self.seed, _SPLIT_STREAM + idx)
            sign = IDENTITY if idx % 2 == 0 else MINUS_IDENTITY
            if cfg.g >= 2:
                try:
                    lower = solve_to_fiber(random_tuple(lower_cfg, rng), self.solver)
                except NoConvergence:
                    lower = random_tuple(lower_cfg, rng)
            else:
                lower = random_tuple(lower_cfg, rng)
            p = RepTuple(lower.A + [sign], lower.B + [haar_sample(rng)], lower.C, cfg)
            v = TangentVector.random(p, rng)
            worst = max(worst, splitting_defect(p, v))
        tol = self.tolerances.splitting
        report.add(
            f"splitting {_label(cfg)}", worst <= tol, measured=worst, tolerance=tol,
            suite="derivative",
        )
        return report

    def regular_check(self, cfg, samples=100, report=None):
        """
        Newton solves from Haar-random starts must all converge, with D mu of full rank.
        """
        if report is None:
            report = self._new_report("regular", cfg)
        results = self.sample_fiber(cfg, samples)
        points = [p for p, _ in results if p is not None]
        residuals = [res for _, res in results]
        ranks = [rank_dmu(p, self.tolerances.rank) for p in points]
        tol = self.tolerances.residual
        report.add(
            f"converged {_label(cfg)}",
            len(points) == samples and max(residuals) < tol,
            measured={"converged": len(points), "max_residual": max(residuals)},
            expected=samples, tolerance=tol, suite="regular",
        )
        report.add(
            f"rank {_label(cfg)}", len(points) == samples and all(r == 3 for r in ranks),
            measured={"min_rank": min(ranks) if ranks else None}, expected=3, suite="regular",
        )
        return report

    def irregular_check(self, cfg, report=None):
        """
        For irregular weights the commuting diagonal witness tuple lies on the fiber
        and D mu drops rank there.
        """
        if report is None:
            report = self._new_report("irregular", cfg)
        p, witness = irregular_witness_tuple(cfg, task_rng(self.seed, 0))
        res = residual_norm(p)
        rank = rank_dmu(p, self.tolerances.rank)
        report.add(
            f"irregular_rank {_label(cfg)}",
            res < self.tolerances.residual and rank <= 2,
            measured={"rank": rank, "residual": res, "witness": list(witness)},
            expected="rank <= 2", suite="regular",
        )
        return report

    def critical_check(self, cfg, report=None):
        """
        Residual and circle-fixedness of every explicit critical tuple, then the
        Hessian census (Parabolic) or the Hessian of the Classic torus.
        """
        if report is None:
            report = self._new_report("critical", cfg)
        tol = self.tolerances.structural
        label = _label(cfg)
        labels = [(0, 0)] if cfg.is_classic else [
            (J, lift) for J in range(2 ** cfg.n) for lift in (0, 1)
        ]
        worst = 0.0
        fixed = True
        for J, lift in labels:
            p = critical_tuple(cfg, J, lift)
            worst = max(worst, residual_norm(p))
            fixed = fixed and is_circle_fixed(p)
        report.add(f"critical_residual {label}", worst < tol, measured=worst, tolerance=tol,
                   suite="critical")
        report.add(f"circle_fixed {label}", fixed, suite="critical")

        if cfg.is_classic:
            expected = 2 * cfg.g - 2
            try:
                h = hessian_index(critical_tuple(cfg), self.hessian)
                report.add(
                    f"classic_torus {label}", h.index == expected and h.nullity == expected,
                    measured=h.to_dict(), expected={"index": expected, "nullity": expected},
                    tolerance=self.hessian.eig_zero_rel, suite="critical",
                )
            except (DegenerateHessian, SliceDimensionMismatch, NoConvergence) as e:
                report.add(f"classic_torus {label}", False, measured=str(e), suite="critical")
            return report

        try:
            census = torus_census(cfg, self.hessian, self.threads)
            report.add(
                f"census {label}", True, measured=census.to_dict(),
                expected={"classes": 2 ** cfg.n, "indices": census.formula_indices},
                tolerance=self.hessian.eig_zero_rel, suite="critical",
            )
        except CensusMismatch as e:
            report.add(f"census {label}", False, measured=str(e), suite="critical")
        except (DegenerateHessian, SliceDimensionMismatch, NoConvergence) as e:
            report.add(f"census {label}", False, measured=str(e), suite="critical")
        return report

    def symmetry_check(self, cfg, samples=100, report=None):
        """
        f and mu under the circle action, the half twist, the sign action and
        global conjugation, on random fiber points.
        """
        if cfg.g < 1:
            raise ValueError("the symmetry suite needs g >= 1")
        if report is None:
            report = self._new_report("symmetry", cfg)
        points = self._fiber_points(cfg, samples, offset=_SYMMETRY_STREAM)
        e_g = unit_bits(cfg.g, cfg.g)
        zeros = [0] * cfg.g
        worst = dict.fromkeys(
            ["f_u1", "f_twist", "f_sign", "mu_u1", "mu_twist", "mu_sign", "mu_conj", "twist_square"],
            0.0,
        )
        u1_undefined = 0
        for idx, p in enumerate(self._progress(points, "symmetry")):
            rng = task_rng(self.seed, _ACTION_STREAM + idx)
            f, mu = morse_function(p), mu_eval(p)
            lam = complex(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
            try:
                q = u1_action(lam, p)
                worst["f_u1"] = max(worst["f_u1"], abs(morse_function(q) - f))
                worst["mu_u1"] = max(worst["mu_u1"], mu_eval(q).distance(mu))
            except ActionUndefined:
                u1_undefined += 1
            q = half_twist(p)
            worst["f_twist"] = max(worst["f_twist"], abs(morse_function(q) - f))
            worst["mu_twist"] = max(worst["mu_twist"], mu_eval(q).distance(mu))
            # twisting twice conjugates the last handle by [A_g, B_g]
            qq = half_twist(q)
            x = commutator(p.A[-1], p.B[-1])
            xi = x.inverse()
            worst["twist_square"] = max(
                worst["twist_square"],
                qq.A[-1].distance(x * p.A[-1] * xi),
                qq.B[-1].distance(x * p.B[-1] * xi),
            )
            q = sign_action(e_g, zeros, p)
            worst["f_sign"] = max(worst["f_sign"], abs(morse_function(q) + f))
            delta = [int(b) for b in rng.integers(0, 2, cfg.g)]
            eps = [int(b) for b in rng.integers(0, 2, cfg.g)]
            worst["mu_sign"] = max(worst["mu_sign"], mu_eval(sign_action(delta, eps, p)).distance(mu))
            h = haar_sample(rng)
            worst["mu_conj"] = max(
                worst["mu_conj"], mu_eval(conjugate(p, h)).distance(h * mu * h.inverse())
            )
        tol = self.tolerances.structural
        for name, value in worst.items():
            measured = {"max_error": value, "points": len(points)}
            if name.endswith("_u1"):
                # A_g = +-I has no circle through it
                measured["undefined"] = u1_undefined
            report.add(
                f"{name} {_label(cfg)}", len(points) == samples and value < tol,
                measured=measured, tolerance=tol,
                suite="symmetry",
            )
        return report

    def full_report(self, cfg, samples=100):
        """Every suite that applies to ``cfg``."""
        report = self._new_report("verify", cfg)
        if is_regular(cfg).regular:
            self.regular_check(cfg, samples, report)
            if cfg.g >= 1:
                self.derivative_check(cfg, samples, report=report)
                self.splitting_check(cfg, report=report)
                self.critical_check(cfg, report)
                self.symmetry_check(cfg, samples, report)
        elif cfg.mode is Mode.PARABOLIC:
            self.irregular_check(cfg, report)
        return report


def _label(cfg):
    weights = ",".join(str(t) for t in cfg.t)
    return f"g={cfg.g} t=({weights})"


def nonempty_probe(cfg, starts=PROBE_STARTS, seed=0, threads=1, tolerances=None):
    """
    Multi-start search for a point of mu_{0,n}^{-1}(I).

    :param cfg: Parabolic WeightConfig with g = 0
    :param starts: number of Haar-random starts, 64 by default
    :param seed: master seed
    :param threads: worker processes
    :param tolerances: Tolerances, DEFAULT_TOLERANCES when None
    :return: ProbeResult
    """
    solver = SolverConfig(max_restarts=0, seed=seed)
    return FiberVerifier(
        threads=threads, seed=seed, tolerances=tolerances, solver=solver
    ).nonempty_probe(cfg, starts)
