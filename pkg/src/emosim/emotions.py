"""Emotion taxonomy and model parameters.

Holds the four-emotion enumeration, the per-emotion posting proportions and
user-to-user correlations, and the full run configuration with validation
and flat-JSON persistence.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .errors import ValidationError

PROPORTION_SUM_TOL = 1e-9


class Emotion(enum.IntEnum):
    """The four modeled emotions, in fixed order.

    The numeric order is load-bearing: it fixes sampling, tie-breaking and
    serialization, so runs stay reproducible.
    """

    ANGER = 0
    JOY = 1
    DISGUST = 2
    SADNESS = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Emotion":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValidationError(f"unknown emotion label {label!r}") from None


EMOTIONS = tuple(Emotion)


@dataclass(frozen=True)
class EmotionParams:
    """Posting proportions and contagion correlations per emotion.

    Proportions must sum to 1; correlations lie in [0, 1]. Higher
    correlation means messages of that emotion are easier to repost.
    """

    proportion: Mapping[Emotion, float]
    correlation: Mapping[Emotion, float]

    def validate(self) -> list[str]:
        errors = []
        for table, name in ((self.proportion, "proportion"), (self.correlation, "correlation")):
            missing = [e.label for e in EMOTIONS if e not in table]
            if missing:
                errors.append(f"{name} missing entries for: {', '.join(missing)}")
                continue
            for e in EMOTIONS:
                v = table[e]
                if not (0.0 <= v <= 1.0):
                    errors.append(f"{name}[{e.label}] = {v} must be in [0, 1]")
        if not any("proportion" in err for err in errors):
            total = sum(self.proportion[e] for e in EMOTIONS)
            if abs(total - 1.0) > PROPORTION_SUM_TOL:
                errors.append(f"proportions must sum to 1 (got {total!r})")
        return errors

    def proportion_tuple(self) -> tuple[float, ...]:
        return tuple(self.proportion[e] for e in EMOTIONS)

    def correlation_tuple(self) -> tuple[float, ...]:
        return tuple(self.correlation[e] for e in EMOTIONS)


def default_params() -> EmotionParams:
    """Empirically measured Weibo proportions and correlations."""
    return EmotionParams(
        proportion={
            Emotion.ANGER: 0.192,
            Emotion.JOY: 0.391,
            Emotion.DISGUST: 0.137,
            Emotion.SADNESS: 0.280,
        },
        correlation={
            Emotion.ANGER: 0.41,
            Emotion.JOY: 0.35,
            Emotion.DISGUST: 0.04,
            Emotion.SADNESS: 0.03,
        },
    )


def params_with_proportions(anger: float, joy: float, disgust: float, sadness: float) -> EmotionParams:
    """Default correlations with custom posting proportions."""
    return replace(
        default_params(),
        proportion={
            Emotion.ANGER: anger,
            Emotion.JOY: joy,
            Emotion.DISGUST: disgust,
            Emotion.SADNESS: sadness,
        },
    )


def sample_emotion(params: EmotionParams, rng: np.random.Generator) -> Emotion:
    """Draw one emotion with probability equal to its proportion.

    Consumes exactly one uniform variate from ``rng``. The cumulative walk
    follows the fixed enum order; the last emotion absorbs any floating
    point remainder.
    """
    u = rng.random()
    acc = 0.0
    for e in EMOTIONS[:-1]:
        acc += params.proportion[e]
        if u < acc:
            return e
    return EMOTIONS[-1]


@dataclass(frozen=True)
class SimulationConfig:
    """Full parameter set for one run.

    p_new is the probability an activated user posts a new message rather
    than reading their screen; screen_size bounds each user's inbox; steps
    is the number of activations; tau is the global repost threshold.
    """

    p_new: float = 0.45
    emotion_params: EmotionParams = field(default_factory=default_params)
    screen_size: int = 20
    steps: int = 100_000
    tau: float = 0.06
    seed: int = 0


def validate_config(config: SimulationConfig) -> list[str]:
    """Return every invariant violation, not just the first.

    An empty list means the config is valid. steps == 0 is accepted and
    yields an empty run.
    """
    errors = []
    if not (0.0 <= config.p_new <= 1.0):
        errors.append(f"p_new = {config.p_new} must be in [0, 1]")
    errors.extend(config.emotion_params.validate())
    if not isinstance(config.screen_size, int) or config.screen_size < 1:
        errors.append(f"screen_size = {config.screen_size} must be an integer >= 1")
    if not isinstance(config.steps, int) or config.steps < 0:
        errors.append(f"steps = {config.steps} must be a non-negative integer")
    if config.tau < 0.0:
        errors.append(f"tau must be >= 0 (got {config.tau})")
    if not isinstance(config.seed, int):
        errors.append(f"seed = {config.seed!r} must be an integer")
    return errors


def ensure_valid(config: SimulationConfig) -> SimulationConfig:
    errors = validate_config(config)
    if errors:
        raise ValidationError("invalid configuration: " + "; ".join(errors))
    return config


# Flat key set used by config files and the CLI override flags.
CONFIG_KEYS = (
    "p_new",
    "p_anger", "p_disgust", "p_joy", "p_sadness",
    "c_anger", "c_disgust", "c_joy", "c_sadness",
    "screen_size", "steps", "tau", "seed",
)

_INT_KEYS = {"screen_size", "steps", "seed"}


def config_to_dict(config: SimulationConfig) -> dict:
    d = {"p_new": config.p_new}
    for e in EMOTIONS:
        d[f"p_{e.label}"] = config.emotion_params.proportion[e]
    for e in EMOTIONS:
        d[f"c_{e.label}"] = config.emotion_params.correlation[e]
    d["screen_size"] = config.screen_size
    d["steps"] = config.steps
    d["tau"] = config.tau
    d["seed"] = config.seed
    return d


def config_from_dict(values: Mapping[str, object], base: SimulationConfig | None = None) -> SimulationConfig:
    """Build a config from flat key-value pairs.

    Missing keys keep the value from ``base`` (or the defaults). Unknown
    keys are rejected so typos do not pass silently.
    """
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    merged = config_to_dict(base if base is not None else SimulationConfig())
    merged.update({k: v for k, v in values.items() if v is not None})
    try:
        coerced = {
            k: (int(v) if k in _INT_KEYS else float(v)) for k, v in merged.items()
        }
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"non-numeric config value: {exc}") from None
    params = EmotionParams(
        proportion={e: coerced[f"p_{e.label}"] for e in EMOTIONS},
        correlation={e: coerced[f"c_{e.label}"] for e in EMOTIONS},
    )
    return SimulationConfig(
        p_new=coerced["p_new"],
        emotion_params=params,
        screen_size=coerced["screen_size"],
        steps=coerced["steps"],
        tau=coerced["tau"],
        seed=coerced["seed"],
    )


def load_config(path) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(values, dict):
        raise ValidationError(f"{path}: config file must hold a flat JSON object")
    return config_from_dict(values)


def save_config(config: SimulationConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
