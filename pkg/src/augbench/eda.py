"""The four lightweight sentence-edit operations and their orchestration.

All operations are pure given an explicit random.Random instance: the
same (input, seed) always produces the same output, and labels are
never modified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import LabeledExample, tokenize
from .errors import EmptySentenceError
from .resources import SynonymMap


@dataclass(frozen=True)
class EdaConfig:
    alpha: float = 0.1
    n_aug: int = 1
    # "sample": each generated sentence gets one randomly chosen edit op.
    # "compose": each generated sentence gets all four ops in sequence.
    op_mode: str = "sample"

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha {self.alpha} outside (0, 1)")
        if self.n_aug < 1:
            raise ValueError("n_aug must be >= 1")
        if self.op_mode not in ("sample", "compose"):
            raise ValueError(f"unknown op_mode {self.op_mode!r}")


def edit_budget(alpha: float, length: int) -> int:
    """Per-op edit count: at least one edit even on short sentences."""
    return max(1, int(alpha * length))


def synonym_replacement(
    tokens: list[str], n: int, synmap: SynonymMap, rng: random.Random
) -> list[str]:
    """Replace up to n distinct positions with a random synonym each."""
    eligible = [i for i, tok in enumerate(tokens) if synmap.candidates(tok)]
    if n <= 0 or not eligible:
        return list(tokens)
    out = list(tokens)
    for i in sorted(rng.sample(eligible, min(n, len(eligible)))):
        out[i] = rng.choice(synmap.candidates(out[i]))
    return out


def random_insertion(
    tokens: list[str], n: int, synmap: SynonymMap, rng: random.Random
) -> list[str]:
    """Insert a synonym of a random token at a random position, n times."""
    out = list(tokens)
    for _ in range(n):
        bearers = [tok for tok in out if synmap.candidates(tok)]
        if not bearers:
            break
        word = rng.choice(bearers)
        synonym = rng.choice(synmap.candidates(word))
        out.insert(rng.randint(0, len(out)), synonym)
    return out


def random_swap(tokens: list[str], n: int, rng: random.Random) -> list[str]:
    """Exchange two distinct random positions, n times."""
    if len(tokens) < 2:
        return list(tokens)
    out = list(tokens)
    for _ in range(n):
        i, j = rng.sample(range(len(out)), 2)
        out[i], out[j] = out[j], out[i]
    return out


def random_deletion(
    tokens: list[str], p_del: float, rng: random.Random
) -> list[str]:
    """Drop each token with probability p_del, never emptying the sentence."""
    if not tokens:
        return []
    kept = [tok for tok in tokens if rng.random() >= p_del]
    if not kept:
        return [rng.choice(tokens)]
    return kept


def eda_augment(
    sentence: LabeledExample,
    cfg: EdaConfig,
    synmap: SynonymMap,
    rng: random.Random,
) -> list[LabeledExample]:
    """Generate cfg.n_aug edited variants of one example.

    Each variant applies either one uniformly chosen op (op_mode
    "sample") or all four in sequence ("compose"), with per-op intensity
    n = max(1, floor(alpha * L)) and deletion probability alpha.
    """
    tokens = tokenize(sentence.text)
    if not tokens:
        raise EmptySentenceError(f"nothing to augment in {sentence.text!r}")
    out: list[LabeledExample] = []
    for _ in range(cfg.n_aug):
        if cfg.op_mode == "sample":
            op = rng.randrange(4)
            edited = _apply_op(op, tokens, cfg.alpha, synmap, rng)
        else:
            edited = tokens
            for op in range(4):
                edited = _apply_op(op, edited, cfg.alpha, synmap, rng)
        out.append(LabeledExample(text=" ".join(edited), label=sentence.label))
    return out


def _apply_op(
    op: int,
    tokens: list[str],
    alpha: float,
    synmap: SynonymMap,
    rng: random.Random,
) -> list[str]:
    n = edit_budget(alpha, len(tokens))
    if op == 0:
        return synonym_replacement(tokens, n, synmap, rng)
    if op == 1:
        return random_insertion(tokens, n, synmap, rng)
    if op == 2:
        return random_swap(tokens, n, rng)
    return random_deletion(tokens, alpha, rng)
