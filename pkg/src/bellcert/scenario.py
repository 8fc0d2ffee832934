"""Bell scenarios, behavior tables, and the correlator parametrization.

Conventions shared by the whole package:

* Parties are numbered ``0..N-1``; settings of party ``i`` are ``0..M_i-1``;
  outcomes are stored as indices ``0..d-1``.
* Joint settings and joint outcomes are flattened in mixed-radix row-major
  order with party 0 as the most significant digit.
* For ``d = 2`` the physical outcome labels are ``+1`` (index 0) and ``-1``
  (index 1); :func:`outcome_sign` converts.  For ``d > 2`` the labels are
  ``0..d-1`` and outcome arithmetic is modulo ``d``.

A :class:`Behavior` is the full conditional probability table ``P(a|x)``.
Two-outcome behaviors admit an equivalent description by their correlators
(one expectation value per nonempty party subset and per assignment of
settings to that subset); :class:`CorrelatorForm` holds that description and
the two conversions are inverse to each other on non-signaling behaviors.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-9
NO_SIGNALING_TOL = 1e-7


class ValidationError(ValueError):
    """A domain object failed its construction-time checks."""


class ScenarioMismatchError(ValueError):
    """Objects built for different scenarios were combined."""


class SignalingWarning(UserWarning):
    """A marginal was requested from a behavior that signals across parties."""


def outcome_sign(index: int) -> int:
    """Physical +-1 label of a two-outcome index (0 -> +1, 1 -> -1)."""
    return 1 - 2 * index


@dataclass(frozen=True)
class Scenario:
    """An (N, M, d) Bell scenario: per-party setting counts, uniform outcome count.

    ``settings[i]`` is the number of measurement settings of party ``i``;
    ``outcomes`` is the number of outcomes, identical for every party and
    setting.  Setting counts may differ between parties (a party with a
    single setting is allowed).
    """

    settings: tuple[int, ...]
    outcomes: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "settings", tuple(int(m) for m in self.settings))
        object.__setattr__(self, "outcomes", int(self.outcomes))
        if len(self.settings) < 1:
            raise ValidationError("scenario needs at least one party")
        if any(m < 1 for m in self.settings):
            raise ValidationError("every party needs at least one setting")
        if self.outcomes < 2:
            raise ValidationError("scenario needs at least two outcomes")

    @property
    def parties(self) -> int:
        return len(self.settings)

    @property
    def num_inputs(self) -> int:
        return math.prod(self.settings)

    @property
    def num_outcomes(self) -> int:
        return self.outcomes**self.parties

    @cached_property
    def input_strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for m in reversed(self.settings):
            strides.append(acc)
            acc *= m
        return tuple(reversed(strides))

    @cached_property
    def outcome_strides(self) -> tuple[int, ...]:
        return tuple(
            self.outcomes ** (self.parties - 1 - i) for i in range(self.parties)
        )

    def input_index(self, x: Sequence[int]) -> int:
        if len(x) != self.parties:
            raise ValidationError(f"joint input needs {self.parties} entries, got {len(x)}")
        idx = 0
        for i, (xi, mi) in enumerate(zip(x, self.settings)):
            if not 0 <= xi < mi:
                raise ValidationError(f"setting {xi} out of range for party {i}")
            idx += xi * self.input_strides[i]
        return idx

    def input_tuple(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.num_inputs:
            raise ValidationError(f"joint input index {index} out of range")
        return tuple(
            (index // s) % m for s, m in zip(self.input_strides, self.settings)
        )

    def outcome_index(self, a: Sequence[int]) -> int:
        if len(a) != self.parties:
            raise ValidationError(f"joint outcome needs {self.parties} entries, got {len(a)}")
        idx = 0
        for i, ai in enumerate(a):
            if not 0 <= ai < self.outcomes:
                raise ValidationError(f"outcome {ai} out of range for party {i}")
            idx += ai * self.outcome_strides[i]
        return idx

    def outcome_tuple(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.num_outcomes:
            raise ValidationError(f"joint outcome index {index} out of range")
        return tuple((index // s) % self.outcomes for s in self.outcome_strides)

    @cached_property
    def input_digits(self) -> np.ndarray:
        """Array of shape (num_inputs, parties): setting of each party per joint input."""
        digits = np.empty((self.num_inputs, self.parties), dtype=np.int64)
        for i, (s, m) in enumerate(zip(self.input_strides, self.settings)):
            digits[:, i] = (np.arange(self.num_inputs) // s) % m
        digits.setflags(write=False)
        return digits

    @cached_property
    def outcome_digits(self) -> np.ndarray:
        """Array of shape (num_outcomes, parties): outcome of each party per joint outcome."""
        digits = np.empty((self.num_outcomes, self.parties), dtype=np.int64)
        for i, s in enumerate(self.outcome_strides):
            digits[:, i] = (np.arange(self.num_outcomes) // s) % self.outcomes
        digits.setflags(write=False)
        return digits

    @cached_property
    def outcome_signs(self) -> np.ndarray:
        """Per-party +-1 labels of every joint outcome (two-outcome scenarios only)."""
        if self.outcomes != 2:
            raise ValidationError("outcome signs are defined only for d = 2")
        signs = 1 - 2 * self.outcome_digits
        signs.setflags(write=False)
        return signs

    def joint_inputs(self) -> Iterator[tuple[int, ...]]:
        for idx in range(self.num_inputs):
            yield self.input_tuple(idx)

    def subset_setting_keys(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        """All (party subset, settings for that subset) keys, subsets sorted."""
        for r in range(1, self.parties + 1):
            for parties in itertools.combinations(range(self.parties), r):
                ranges = [range(self.settings[i]) for i in parties]
                for assignment in itertools.product(*ranges):
                    yield parties, assignment


@dataclass(frozen=True)
class JointQuery:
    """Randomness query about a full joint input (one setting per party)."""

    settings: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "settings", tuple(int(s) for s in self.settings))


@dataclass(frozen=True)
class LocalQuery:
    """Randomness query about a single party's setting."""

    party: int
    setting: int


@dataclass(frozen=True, eq=False)
class Behavior:
    """A conditional probability table P(a|x) over a scenario.

    ``table[x, a]`` is indexed by joint-input index and joint-outcome index.
    Entries are clamped to [0, 1] when within ``NORMALIZATION_TOL`` of the
    boundary; anything further out, or a row not summing to 1 within the
    tolerance, raises :class:`ValidationError`.  Instances are immutable.
    """

    scenario: Scenario
    table: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.table, dtype=float)
        expected = (self.scenario.num_inputs, self.scenario.num_outcomes)
        if arr.shape != expected:
            raise ValidationError(
                f"table shape {arr.shape} does not match scenario shape {expected}"
            )
        if not np.isfinite(arr).all():
            raise ValidationError("table contains non-finite entries")
        low, high = arr.min(), arr.max()
        if low < -NORMALIZATION_TOL:
            x, a = np.unravel_index(int(arr.argmin()), arr.shape)
            raise ValidationError(
                f"negative probability {low:.3e} at input {self.scenario.input_tuple(int(x))}, "
                f"outcome {self.scenario.outcome_tuple(int(a))}"
            )
        if high > 1 + NORMALIZATION_TOL:
            raise ValidationError(f"probability {high} exceeds 1")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > NORMALIZATION_TOL
        if bad.any():
            x = int(np.argmax(bad))
            raise ValidationError(
                f"probabilities at input {self.scenario.input_tuple(x)} sum to {sums[x]!r}"
            )
        np.clip(arr, 0.0, 1.0, out=arr)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def prob(self, x: Sequence[int], a: Sequence[int]) -> float:
        return float(self.table[self.scenario.input_index(x), self.scenario.outcome_index(a)])

    def row(self, x: Sequence[int] | int) -> np.ndarray:
        idx = x if isinstance(x, int) else self.scenario.input_index(x)
        return self.table[idx]


def behavior_from_table(scenario: Scenario, table) -> Behavior:
    """Validate a raw table (any array-like of matching total size) into a Behavior."""
    arr = np.asarray(table, dtype=float)
    size = scenario.num_inputs * scenario.num_outcomes
    if arr.size != size:
        raise ValidationError(
            f"table has {arr.size} entries, scenario needs {size}"
        )
    return Behavior(scenario, arr.reshape(scenario.num_inputs, scenario.num_outcomes))


def uniform_behavior(scenario: Scenario) -> Behavior:
    p = 1.0 / scenario.num_outcomes
    return Behavior(
        scenario, np.full((scenario.num_inputs, scenario.num_outcomes), p)
    )


def deterministic_behavior(
    scenario: Scenario, strategy: Sequence[Sequence[int]]
) -> Behavior:
    """Behavior of a local deterministic strategy.

    ``strategy[i][x]`` is the outcome index party ``i`` produces for its
    setting ``x``.
    """
    if len(strategy) != scenario.parties:
        raise ValidationError("strategy needs one setting->outcome map per party")
    table = np.zeros((scenario.num_inputs, scenario.num_outcomes))
    for x_idx in range(scenario.num_inputs):
        x = scenario.input_tuple(x_idx)
        a = tuple(strategy[i][xi] for i, xi in enumerate(x))
        table[x_idx, scenario.outcome_index(a)] = 1.0
    return Behavior(scenario, table)


@dataclass(frozen=True, eq=False)
class CorrelatorForm:
    """Correlators of a two-outcome behavior.

    ``values`` maps ``(parties, settings)`` to the expectation of the product
    of the +-1 outcomes of the listed parties at the listed settings; keys
    run over every nonempty party subset (sorted tuples) and every setting
    assignment for it.  The constant term 1 is implicit.
    """

    scenario: Scenario
    values: Mapping[tuple[tuple[int, ...], tuple[int, ...]], float]

    def __post_init__(self) -> None:
        if self.scenario.outcomes != 2:
            raise ValidationError("correlator form requires a two-outcome scenario")
        expected = set(self.scenario.subset_setting_keys())
        got = set(self.values)
        if got != expected:
            missing = expected - got
            extra = got - expected
            raise ValidationError(
                f"correlator keys do not match scenario ({len(missing)} missing, {len(extra)} unexpected)"
            )
        cleaned = {}
        for key, v in self.values.items():
            v = float(v)
            if abs(v) > 1 + NORMALIZATION_TOL:
                raise ValidationError(f"correlator {key} = {v} outside [-1, 1]")
            cleaned[key] = min(1.0, max(-1.0, v))
        object.__setattr__(self, "values", cleaned)

    def get(self, parties: Sequence[int], settings: Sequence[int]) -> float:
        return self.values[(tuple(parties), tuple(settings))]


def _subset_sign_columns(scenario: Scenario, parties: tuple[int, ...]) -> np.ndarray:
    """Product over the subset of per-party outcome signs, one entry per joint outcome."""
    signs = scenario.outcome_signs
    out = np.ones(scenario.num_outcomes)
    for i in parties:
        out = out * signs[:, i]
    return out


def correlators_from_behavior(behavior: Behavior) -> CorrelatorForm:
    """Extract every subset correlator of a two-outcome behavior.

    Each correlator is averaged over all joint inputs compatible with the
    subset's settings; for non-signaling behaviors the average coincides
    with every individual term.
    """
    scenario = behavior.scenario
    if scenario.outcomes != 2:
        raise ValidationError("correlators require a two-outcome scenario")
    x_digits = scenario.input_digits
    values: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}
    for parties, assignment in scenario.subset_setting_keys():
        signs = _subset_sign_columns(scenario, parties)
        per_input = behavior.table @ signs
        mask = np.ones(scenario.num_inputs, dtype=bool)
        for i, xi in zip(parties, assignment):
            mask &= x_digits[:, i] == xi
        values[(parties, assignment)] = float(per_input[mask].mean())
    return CorrelatorForm(scenario, values)


def behavior_from_correlators(form: CorrelatorForm) -> Behavior:
    """Rebuild the probability table from a complete set of correlators.

    Raises :class:`ValidationError` naming the offending (outcome, input)
    pair if any reconstructed probability is negative beyond tolerance.
    """
    scenario = form.scenario
    x_digits = scenario.input_digits
    table = np.ones((scenario.num_inputs, scenario.num_outcomes))
    for parties, assignment in scenario.subset_setting_keys():
        signs = _subset_sign_columns(scenario, parties)
        mask = np.ones(scenario.num_inputs, dtype=bool)
        for i, xi in zip(parties, assignment):
            mask &= x_digits[:, i] == xi
        table[mask] += form.values[(parties, assignment)] * signs
    table /= scenario.num_outcomes
    low = table.min()
    if low < -NORMALIZATION_TOL:
        x, a = np.unravel_index(int(table.argmin()), table.shape)
        raise ValidationError(
            f"correlators give negative probability {low:.6e} for outcome "
            f"{scenario.outcome_tuple(int(a))} at input {scenario.input_tuple(int(x))}"
        )
    return Behavior(scenario, table)


def _subset_marginal_table(behavior: Behavior, parties: tuple[int, ...]) -> np.ndarray:
    """Marginal over a party subset for every joint input: shape (num_inputs, d^|S|)."""
    scenario = behavior.scenario
    d = scenario.outcomes
    shaped = behavior.table.reshape((scenario.num_inputs,) + (d,) * scenario.parties)
    drop = tuple(1 + i for i in range(scenario.parties) if i not in parties)
    summed = shaped.sum(axis=drop) if drop else shaped
    return summed.reshape(scenario.num_inputs, d ** len(parties))


def is_no_signaling(
    behavior: Behavior, tol: float = NO_SIGNALING_TOL
) -> tuple[bool, float]:
    """Check that every subset marginal is independent of the other parties' settings.

    Returns ``(ok, worst)`` where ``worst`` is the largest deviation found
    between marginals that should coincide.
    """
    scenario = behavior.scenario
    if scenario.parties == 1:
        return True, 0.0
    x_digits = scenario.input_digits
    worst = 0.0
    for r in range(1, scenario.parties):
        for parties in itertools.combinations(range(scenario.parties), r):
            marg = _subset_marginal_table(behavior, parties)
            # group joint inputs by the subset's settings and compare rows
            keys = np.zeros(scenario.num_inputs, dtype=np.int64)
            for i in parties:
                keys = keys * scenario.settings[i] + x_digits[:, i]
            for key in np.unique(keys):
                rows = marg[keys == key]
                if len(rows) > 1:
                    dev = float((rows.max(axis=0) - rows.min(axis=0)).max())
                    worst = max(worst, dev)
    return worst <= tol, worst


def marginal(
    behavior: Behavior,
    parties: Sequence[int],
    settings: Sequence[int],
    tol: float = NO_SIGNALING_TOL,
) -> np.ndarray:
    """Outcome distribution of a party subset at given settings.

    Computed by averaging over all joint inputs extending the assignment;
    if the behavior signals (the individual marginals differ by more than
    ``tol``) a :class:`SignalingWarning` is emitted and the average is
    returned anyway.
    """
    scenario = behavior.scenario
    parties = tuple(int(i) for i in parties)
    settings = tuple(int(s) for s in settings)
    if not parties:
        raise ValidationError("party subset must be nonempty")
    if len(set(parties)) != len(parties) or list(parties) != sorted(parties):
        raise ValidationError("party subset must be strictly increasing")
    if any(not 0 <= i < scenario.parties for i in parties):
        raise ValidationError("party index out of range")
    if len(settings) != len(parties):
        raise ValidationError("need one setting per listed party")
    for i, s in zip(parties, settings):
        if not 0 <= s < scenario.settings[i]:
            raise ValidationError(f"setting {s} out of range for party {i}")
    marg = _subset_marginal_table(behavior, parties)
    mask = np.ones(scenario.num_inputs, dtype=bool)
    for i, s in zip(parties, settings):
        mask &= scenario.input_digits[:, i] == s
    rows = marg[mask]
    spread = float((rows.max(axis=0) - rows.min(axis=0)).max()) if len(rows) > 1 else 0.0
    if spread > tol:
        warnings.warn(
            f"marginal of parties {parties} depends on other settings "
            f"(spread {spread:.3e}); returning the average",
            SignalingWarning,
            stacklevel=2,
        )
    return rows.mean(axis=0)


# --- JSON serialization ----------------------------------------------------

def behavior_to_dict(behavior: Behavior) -> dict:
    scenario = behavior.scenario
    table = {}
    for x_idx in range(scenario.num_inputs):
        key = "x=" + ",".join(str(s) for s in scenario.input_tuple(x_idx))
        table[key] = [float(p) for p in behavior.table[x_idx]]
    return {
        "parties": scenario.parties,
        "settings": list(scenario.settings),
        "outcomes": scenario.outcomes,
        "table": table,
    }


def behavior_from_dict(data: Mapping) -> Behavior:
    scenario = Scenario(tuple(data["settings"]), data["outcomes"])
    if data.get("parties") not in (None, scenario.parties):
        raise ValidationError("party count does not match the settings list")
    table = np.zeros((scenario.num_inputs, scenario.num_outcomes))
    entries = data["table"]
    if len(entries) != scenario.num_inputs:
        raise ValidationError(
            f"table has {len(entries)} inputs, scenario needs {scenario.num_inputs}"
        )
    for key, row in entries.items():
        if not key.startswith("x="):
            raise ValidationError(f"bad table key {key!r}")
        x = tuple(int(tok) for tok in key[2:].split(","))
        if len(row) != scenario.num_outcomes:
            raise ValidationError(f"row {key!r} has {len(row)} entries")
        table[scenario.input_index(x)] = row
    return Behavior(scenario, table)
