"""RBF-kernel SVM: one-vs-one training via SMO, and prediction.

Training is deterministic given the config seed; the Gram matrix is
computed once per fit and shared by all pairwise machines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegenerateFeaturesError, TrainingError

_SUPPORT_EPS = 1e-8


@dataclass(frozen=True)
class SvmConfig:
    C: float = 10.0
    gamma: float | str = "scale"  # positive float, or "scale"
    tol: float = 1e-3
    max_passes: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be positive")
        if isinstance(self.gamma, str):
            if self.gamma != "scale":
                raise ValueError(f"unknown gamma mode {self.gamma!r}")
        elif self.gamma <= 0:
            raise ValueError("fixed gamma must be positive")


@dataclass(frozen=True)
class BinaryMachine:
    """One pairwise machine: class_pos beats class_neg when f(x) >= 0."""

    class_pos: str
    class_neg: str
    support_vectors: np.ndarray  # (n_sv, dim)
    dual_coef: np.ndarray  # alpha_i * y_i, |coef| <= C
    bias: float


@dataclass(frozen=True)
class SvmModel:
    classes: tuple[str, ...]
    machines: tuple[BinaryMachine, ...]
    gamma: float
    dim: int
    _class_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_class_index", {c: i for i, c in enumerate(self.classes)}
        )


def gamma_scale(X: np.ndarray) -> float:
    """gamma = 1 / (dim * population variance of all entries of X)."""
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise DegenerateFeaturesError("empty feature matrix")
    var = float(X.var())
    if var == 0.0:
        raise DegenerateFeaturesError("zero feature variance; gamma undefined")
    return 1.0 / (X.shape[1] * var)


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    d = x - y
    return math.exp(-gamma * float(np.dot(d, d)))


def svm_train(X: np.ndarray, y: list[str], cfg: SvmConfig = SvmConfig()) -> SvmModel:
    """Train one-vs-one RBF machines with the SMO solver.

    Raises TrainingError for single-class input and non-finite features;
    gamma="scale" additionally requires non-degenerate features.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise TrainingError(
            f"feature matrix {X.shape} does not match {len(y)} labels"
        )
    if not np.isfinite(X).all():
        raise TrainingError("non-finite values in feature matrix")
    classes = tuple(sorted(set(y)))
    if len(classes) < 2:
        raise TrainingError("training data has a single class")
    gamma = gamma_scale(X) if cfg.gamma == "scale" else float(cfg.gamma)
    K = kernels.rbf_gram(X, gamma)
    y_arr = np.asarray(y)
    machines: list[BinaryMachine] = []
    for pair_id, (a, bcls) in enumerate(_pairs(classes)):
        idx = np.nonzero((y_arr == a) | (y_arr == bcls))[0]
        y_signed = np.where(y_arr[idx] == a, 1.0, -1.0)
        K_sub = np.ascontiguousarray(K[np.ix_(idx, idx)])
        machine_seed = (cfg.seed * 1000003 + pair_id + 1) % 2147483647
        alpha, bias = kernels.smo_solve(
            K_sub, y_signed, cfg.C, cfg.tol, cfg.max_passes, machine_seed
        )
        sv = np.nonzero(alpha > _SUPPORT_EPS)[0]
        if sv.size == 0:
            raise TrainingError(
                f"no support vectors for pair ({a}, {bcls}); degenerate kernel"
            )
        machines.append(
            BinaryMachine(
                class_pos=a,
                class_neg=bcls,
                support_vectors=np.ascontiguousarray(X[idx][sv]),
                dual_coef=alpha[sv] * y_signed[sv],
                bias=float(bias),
            )
        )
    return SvmModel(
        classes=classes, machines=tuple(machines), gamma=gamma, dim=X.shape[1]
    )


def _pairs(classes: tuple[str, ...]):
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            yield classes[i], classes[j]


def decision_values(model: SvmModel, machine: BinaryMachine, X: np.ndarray) -> np.ndarray:
    K = kernels.rbf_cross_gram(
        np.ascontiguousarray(X, dtype=np.float64),
        machine.support_vectors,
        model.gamma,
    )
    return K @ machine.dual_coef + machine.bias


def svm_predict(model: SvmModel, X: np.ndarray) -> list[str]:
    """One-vs-one majority vote; ties break toward earlier model.classes."""
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        return []
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise ValueError(f"expected (n, {model.dim}) features, got {X.shape}")
    votes = np.zeros((X.shape[0], len(model.classes)), dtype=np.int64)
    for machine in model.machines:
        f = decision_values(model, machine, X)
        pos = model._class_index[machine.class_pos]
        neg = model._class_index[machine.class_neg]
        votes[f >= 0.0, pos] += 1
        votes[f < 0.0, neg] += 1
    winners = np.argmax(votes, axis=1)  # first max wins a tie
    return [model.classes[w] for w in winners]
