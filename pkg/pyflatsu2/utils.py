from dataclasses import dataclass, fields, replace

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """
    Numerical tolerances shared by the su2 kernels and the verification suites.

    :param structural: unit norm, adjoint isometry, conjugation invariance
    :param roundtrip: exp(log(q)) = q
    :param class_membership: half_trace(C_j) = cos(pi t_j)
    :param residual: |log mu| on a solved fiber point
    :param derivative: relative error of dmu_apply against finite differences
    :param splitting: derivative splitting at A_g = +-I
    :param antipode: distance of w from -1 below which log is refused
    :param rank: singular value cutoff, relative to the largest one
    :param eig_zero: Hessian zero threshold, relative to the largest |eigenvalue|
    """

    structural: float = 1e-12
    roundtrip: float = 1e-10
    class_membership: float = 1e-10
    residual: float = 1e-10
    derivative: float = 1e-6
    splitting: float = 1e-10
    antipode: float = 1e-9
    rank: float = 1e-8
    eig_zero: float = 1e-3

    def scaled(self, value):
        """Return a copy with every tolerance set to ``value``."""
        return replace(self, **{f.name: float(value) for f in fields(self)})

    def override(self, **kwargs):
        unknown = set(kwargs) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in kwargs.items()})

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class SolverConfig:
    """
    Gauss-Newton settings for solve_to_fiber.

    :param tol: stop once |log mu| < tol
    :param max_iter: iterations per start before NoConvergence
    :param max_restarts: perturbed restarts after hitting the antipode
    :param polish_steps: extra iterations after reaching tol, while the residual keeps falling
    :param halvings: backtracking steps in the line search
    :param rank: relative singular value cutoff for the least-squares step
    :param seed: seed for restart perturbations
    """

    tol: float = 1e-10
    max_iter: int = 100
    max_restarts: int = 3
    polish_steps: int = 2
    halvings: int = 30
    rank: float = 1e-8
    seed: int = 0


@dataclass(frozen=True)
class HessianConfig:
    """
    Settings for hessian_index.

    :param step: central difference step along slice curves
    :param eig_zero_rel: eigenvalues with |lambda| <= eig_zero_rel * max|lambda| count as null
    :param projection_tol: residual to which perturbed points are pulled back onto the fiber
    :param residual_gate: maximal residual accepted for the input tuple
    :param rank: relative singular value cutoff for kernels and orbit spans
    """

    step: float = 1e-4
    eig_zero_rel: float = 1e-3
    projection_tol: float = 1e-13
    residual_gate: float = 1e-10
    rank: float = 1e-8

    def projection_solver(self):
        return SolverConfig(tol=self.projection_tol, max_iter=30, polish_steps=2)


DEFAULT_TOLERANCES = Tolerances()


def task_rng(seed, idx=0):
    """
    Independent generator for task ``idx`` under master ``seed``.

    :param seed: master seed; int
    :param idx: task index; int
    :return: numpy Generator
    """
    return np.random.default_rng([int(seed), int(idx)])
