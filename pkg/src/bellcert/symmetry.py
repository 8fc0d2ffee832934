"""Relabeling symmetries of Bell functionals and uniformity certificates.

A :class:`Relabeling` permutes measurement settings and outcomes (and
optionally parties) without changing the physics of a scenario.  When a
relabeling leaves a functional's coefficient table exactly invariant it is
a symmetry of that functional; if additionally the maximal quantum violation
is attained by a unique behavior, every event orbit of the symmetry group
must be equiprobable at the maximizer.  :func:`certify_uniform` turns that
argument into a :class:`UniformityCertificate`: certified min-entropy at a
query equals log2 of the smallest forced-equal event class there.

Composition order inside one relabeling is fixed: input permutations first,
then output permutations (attached to the *image* setting), then the party
permutation.  This gives an unambiguous group law, exercised by the
group-action property tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .functionals import BellFunctional, Strategy
from .scenario import (
    Behavior,
    JointQuery,
    LocalQuery,
    Scenario,
    ScenarioMismatchError,
    ValidationError,
)

DEFAULT_SEARCH_CAP = 10**8
GENERATOR_REDUCTION_THRESHOLD = 64


def _check_perm(perm: Sequence[int], size: int, what: str) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(size)):
        raise ValidationError(f"{what} {perm} is not a permutation of 0..{size - 1}")
    return perm


@dataclass(frozen=True, eq=True)
class Relabeling:
    """A relabeling of settings and outcomes, optionally of parties.

    ``input_perms[i][x]`` is the image setting of party ``i``'s setting
    ``x``; ``output_perms[i][y][o]`` is the image outcome of ``o`` at the
    *image* setting ``y``; ``party_perm[i]``, when present, is the slot the
    transformed party ``i`` moves to (identity if ``None``).
    """

    scenario: Scenario
    input_perms: tuple[tuple[int, ...], ...]
    output_perms: tuple[tuple[tuple[int, ...], ...], ...]
    party_perm: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        sc = self.scenario
        if len(self.input_perms) != sc.parties or len(self.output_perms) != sc.parties:
            raise ValidationError("need one input and one output permutation block per party")
        in_perms = tuple(
            _check_perm(p, sc.settings[i], f"input permutation of party {i}")
            for i, p in enumerate(self.input_perms)
        )
        out_perms = []
        for i, per_setting in enumerate(self.output_perms):
            if len(per_setting) != sc.settings[i]:
                raise ValidationError(
                    f"party {i} needs one outcome permutation per setting"
                )
            out_perms.append(
                tuple(
                    _check_perm(p, sc.outcomes, f"outcome permutation of party {i}, setting {y}")
                    for y, p in enumerate(per_setting)
                )
            )
        party_perm = self.party_perm
        if party_perm is not None:
            party_perm = _check_perm(party_perm, sc.parties, "party permutation")
            for i, j in enumerate(party_perm):
                if sc.settings[i] != sc.settings[j]:
                    raise ValidationError(
                        "party permutation must preserve per-party setting counts"
                    )
            if party_perm == tuple(range(sc.parties)):
                party_perm = None
        object.__setattr__(self, "input_perms", in_perms)
        object.__setattr__(self, "output_perms", tuple(out_perms))
        object.__setattr__(self, "party_perm", party_perm)

    # -- structure -----------------------------------------------------------

    @property
    def is_identity(self) -> bool:
        sc = self.scenario
        return (
            self.party_perm is None
            and all(p == tuple(range(sc.settings[i])) for i, p in enumerate(self.input_perms))
            and all(
                q == tuple(range(sc.outcomes))
                for per_setting in self.output_perms
                for q in per_setting
            )
        )

    def _slot(self, i: int) -> int:
        return i if self.party_perm is None else self.party_perm[i]

    @cached_property
    def event_maps(self) -> tuple[np.ndarray, np.ndarray]:
        """(input map, outcome map): image indices for every joint event.

        ``input_map`` has shape (num_inputs,); ``outcome_map`` has shape
        (num_inputs, num_outcomes) since outcome permutations may differ per
        setting.
        """
        sc = self.scenario
        x_digits = sc.input_digits
        a_digits = sc.outcome_digits
        input_map = np.zeros(sc.num_inputs, dtype=np.int64)
        outcome_map = np.zeros((sc.num_inputs, sc.num_outcomes), dtype=np.int64)
        for i in range(sc.parties):
            slot = self._slot(i)
            sigma = np.asarray(self.input_perms[i], dtype=np.int64)
            tau = np.asarray(self.output_perms[i], dtype=np.int64)  # (M_i, d)
            image_setting = sigma[x_digits[:, i]]
            input_map += image_setting * sc.input_strides[slot]
            per_event = tau[image_setting][:, a_digits[:, i]]  # (inputs, outcomes)
            outcome_map += per_event * sc.outcome_strides[slot]
        input_map.setflags(write=False)
        outcome_map.setflags(write=False)
        return input_map, outcome_map

    # -- group operations ------------------------------------------------------

    def inverse(self) -> "Relabeling":
        sc = self.scenario
        inv_party = None
        if self.party_perm is not None:
            inv_party = tuple(int(v) for v in np.argsort(self.party_perm))
        in_perms = []
        out_perms = []
        for k in range(sc.parties):
            i = k if inv_party is None else inv_party[k]
            sigma = self.input_perms[i]
            sigma_inv = tuple(int(v) for v in np.argsort(sigma))
            in_perms.append(sigma_inv)
            # the inverse outcome permutation at image setting z undoes the
            # outcome permutation this relabeling attached at setting sigma(z)
            per_setting = []
            for z in range(sc.settings[i]):
                tau = self.output_perms[i][sigma[z]]
                per_setting.append(tuple(int(v) for v in np.argsort(tau)))
            out_perms.append(tuple(per_setting))
        return Relabeling(sc, tuple(in_perms), tuple(out_perms), inv_party)

    def __matmul__(self, other: "Relabeling") -> "Relabeling":
        """Composite relabeling: ``self`` applied after ``other``."""
        if self.scenario != other.scenario:
            raise ScenarioMismatchError("cannot compose relabelings of different scenarios")
        sc = self.scenario
        in_perms = []
        out_perms = []
        for i in range(sc.parties):
            mid = other._slot(i)
            sig_o = other.input_perms[i]
            sig_s = self.input_perms[mid]
            composed = tuple(sig_s[sig_o[x]] for x in range(sc.settings[i]))
            in_perms.append(composed)
            per_setting = []
            for y in range(sc.settings[i]):
                # y is the final image setting; other's outcome permutation
                # acted at the intermediate setting that self maps onto y
                mid_setting = sig_s.index(y)
                tau_o = other.output_perms[i][mid_setting]
                tau_s = self.output_perms[mid][y]
                per_setting.append(tuple(tau_s[tau_o[o]] for o in range(sc.outcomes)))
            out_perms.append(tuple(per_setting))
        party_perm = None
        if self.party_perm is not None or other.party_perm is not None:
            party_perm = tuple(self._slot(other._slot(i)) for i in range(sc.parties))
        return Relabeling(sc, tuple(in_perms), tuple(out_perms), party_perm)

    # -- actions ---------------------------------------------------------------

    def apply_to_strategy(self, strategy: Strategy) -> Strategy:
        """Image of a local deterministic strategy under the relabeling."""
        sc = self.scenario
        moved: list[tuple[int, ...]] = [()] * sc.parties
        for i in range(sc.parties):
            sigma = self.input_perms[i]
            new = [0] * sc.settings[i]
            for x in range(sc.settings[i]):
                y = sigma[x]
                new[y] = self.output_perms[i][y][strategy[i][x]]
            moved[self._slot(i)] = tuple(new)
        return tuple(moved)


def identity_relabeling(scenario: Scenario) -> Relabeling:
    return Relabeling(
        scenario,
        tuple(tuple(range(m)) for m in scenario.settings),
        tuple(
            tuple(tuple(range(scenario.outcomes)) for _ in range(m))
            for m in scenario.settings
        ),
    )


def global_outcome_flip(scenario: Scenario) -> Relabeling:
    """Swap the two outcomes of every setting of every party (d = 2 only)."""
    if scenario.outcomes != 2:
        raise ValidationError("the global flip is a two-outcome relabeling")
    return outcome_shift(scenario, 1)


def outcome_shift(scenario: Scenario, step: int = 1) -> Relabeling:
    """Shift every outcome of every party and setting by ``step`` modulo d."""
    d = scenario.outcomes
    perm = tuple((o + step) % d for o in range(d))
    return Relabeling(
        scenario,
        tuple(tuple(range(m)) for m in scenario.settings),
        tuple(tuple(perm for _ in range(m)) for m in scenario.settings),
    )


def apply_to_behavior(relabeling: Relabeling, behavior: Behavior) -> Behavior:
    """Push a behavior forward along a relabeling (table entries permuted)."""
    if relabeling.scenario != behavior.scenario:
        raise ScenarioMismatchError("relabeling and behavior scenarios differ")
    input_map, outcome_map = relabeling.event_maps
    table = np.empty_like(behavior.table)
    table[input_map[:, None], outcome_map] = behavior.table
    return Behavior(behavior.scenario, table)


def pushforward_functional(
    relabeling: Relabeling, functional: BellFunctional
) -> BellFunctional:
    """Move a functional's coefficients along a relabeling.

    Defined so that the transformed functional evaluated on any behavior
    equals the original evaluated on the inverse-transformed behavior.
    """
    if relabeling.scenario != functional.scenario:
        raise ScenarioMismatchError("relabeling and functional scenarios differ")
    input_map, outcome_map = relabeling.event_maps
    moved = {
        (int(input_map[x]), int(outcome_map[x, a])): c
        for (x, a), c in functional.coefficients.items()
    }
    return BellFunctional(
        functional.scenario,
        moved,
        orientation=functional.orientation,
        name=functional.name,
    )


def is_symmetry(relabeling: Relabeling, functional: BellFunctional) -> bool:
    """True iff the pushforward leaves the coefficient table exactly invariant."""
    if relabeling.scenario != functional.scenario:
        raise ScenarioMismatchError("relabeling and functional scenarios differ")
    dense, _ = functional.scaled_table
    input_map, outcome_map = relabeling.event_maps
    permuted = np.zeros_like(dense)
    permuted[input_map[:, None], outcome_map] = dense
    return bool(np.array_equal(permuted, dense))


# --- exhaustive symmetry search -----------------------------------------------

class SearchCapExceededError(RuntimeError):
    """The relabeling search space exceeds the configured cap."""


def _party_candidates(m: int, d: int) -> list[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """All (input_perm, output_perms) blocks of one party, in deterministic order."""
    outcome_perms = list(itertools.permutations(range(d)))
    blocks = []
    for sigma in itertools.permutations(range(m)):
        for taus in itertools.product(outcome_perms, repeat=m):
            blocks.append((sigma, taus))
    return blocks


def search_space_size(scenario: Scenario, include_party_perms: bool = False) -> int:
    size = math.prod(
        math.factorial(m) * math.factorial(scenario.outcomes) ** m
        for m in scenario.settings
    )
    if include_party_perms:
        size *= math.factorial(scenario.parties)
    return size


def find_symmetries(
    functional: BellFunctional,
    include_party_perms: bool = False,
    cap: int = DEFAULT_SEARCH_CAP,
) -> tuple[Relabeling, ...]:
    """Complete list of nontrivial symmetries of a functional, by brute force.

    Scans every relabeling of the scenario (optionally including party
    permutations) and keeps those leaving the coefficient table exactly
    invariant; the identity is excluded.  Raises
    :class:`SearchCapExceededError` when the space exceeds ``cap``; callers
    may then supply hand-written generators to :func:`certify_uniform`.
    """
    scenario = functional.scenario
    total = search_space_size(scenario, include_party_perms)
    if total > cap:
        raise SearchCapExceededError(
            f"{total} candidate relabelings exceed the cap of {cap}"
        )
    dense, _ = functional.scaled_table
    x_digits = scenario.input_digits
    a_digits = scenario.outcome_digits
    d = scenario.outcomes

    if include_party_perms:
        party_perms = [
            pi
            for pi in itertools.permutations(range(scenario.parties))
            if all(scenario.settings[i] == scenario.settings[pi[i]] for i in range(scenario.parties))
        ]
    else:
        party_perms = [tuple(range(scenario.parties))]

    hits: list[Relabeling] = []
    blocks = [_party_candidates(m, d) for m in scenario.settings]
    for pi in party_perms:
        # per-party contributions to the joint event maps, at this party slot
        contribs = []
        for i in range(scenario.parties):
            slot = pi[i]
            in_stride = scenario.input_strides[slot]
            out_stride = scenario.outcome_strides[slot]
            party_list = []
            for sigma, taus in blocks[i]:
                sig = np.asarray(sigma, dtype=np.int64)
                tau = np.asarray(taus, dtype=np.int64)
                image_setting = sig[x_digits[:, i]]
                x_contrib = image_setting * in_stride
                a_contrib = tau[image_setting][:, a_digits[:, i]] * out_stride
                party_list.append((x_contrib, a_contrib))
            contribs.append(party_list)

        def scan(i: int, x_acc: np.ndarray, a_acc: np.ndarray, chosen: tuple[int, ...]) -> None:
            if i == scenario.parties:
                permuted = np.zeros_like(dense)
                permuted[x_acc[:, None], a_acc] = dense
                if np.array_equal(permuted, dense):
                    rel = Relabeling(
                        scenario,
                        tuple(blocks[j][c][0] for j, c in enumerate(chosen)),
                        tuple(blocks[j][c][1] for j, c in enumerate(chosen)),
                        pi if pi != tuple(range(scenario.parties)) else None,
                    )
                    if not rel.is_identity:
                        hits.append(rel)
                return
            for c, (x_contrib, a_contrib) in enumerate(contribs[i]):
                scan(i + 1, x_acc + x_contrib, a_acc + a_contrib, chosen + (c,))

        scan(
            0,
            np.zeros(scenario.num_inputs, dtype=np.int64),
            np.zeros((scenario.num_inputs, scenario.num_outcomes), dtype=np.int64),
            (),
        )
    return tuple(hits)


# --- orbit closure and certificates ---------------------------------------------

def _orbit_ids(perms: Iterable[np.ndarray], n_events: int) -> np.ndarray:
    """Connected components of events under a set of event permutations."""
    ids = np.full(n_events, -1, dtype=np.int64)
    perms = list(perms)
    next_id = 0
    for start in range(n_events):
        if ids[start] != -1:
            continue
        stack = [start]
        ids[start] = next_id
        while stack:
            e = stack.pop()
            for perm in perms:
                img = int(perm[e])
                if ids[img] == -1:
                    ids[img] = next_id
                    stack.append(img)
        next_id += 1
    return ids


def _joint_event_perm(relabeling: Relabeling) -> np.ndarray:
    sc = relabeling.scenario
    input_map, outcome_map = relabeling.event_maps
    perm = np.empty(sc.num_inputs * sc.num_outcomes, dtype=np.int64)
    flat = input_map[:, None] * sc.num_outcomes + outcome_map
    perm[:] = flat.reshape(-1)
    return perm


def _marginal_offsets(scenario: Scenario) -> list[int]:
    offsets = [0]
    for m in scenario.settings:
        offsets.append(offsets[-1] + m * scenario.outcomes)
    return offsets


def _marginal_event_perm(relabeling: Relabeling) -> np.ndarray:
    """Permutation of single-party events (party, setting, outcome)."""
    sc = relabeling.scenario
    offsets = _marginal_offsets(sc)
    perm = np.empty(offsets[-1], dtype=np.int64)
    for i in range(sc.parties):
        slot = relabeling._slot(i)
        for x in range(sc.settings[i]):
            y = relabeling.input_perms[i][x]
            for o in range(sc.outcomes):
                src = offsets[i] + x * sc.outcomes + o
                dst = offsets[slot] + y * sc.outcomes + relabeling.output_perms[i][y][o]
                perm[src] = dst
    return perm


def _reduce_generators(generators: Sequence[Relabeling]) -> list[Relabeling]:
    """Drop duplicates and identities; keep the order of first appearance."""
    seen = set()
    kept = []
    for g in generators:
        key = (g.input_perms, g.output_perms, g.party_perm)
        if g.is_identity or key in seen:
            continue
        seen.add(key)
        kept.append(g)
    if len(kept) <= GENERATOR_REDUCTION_THRESHOLD:
        return kept
    # keep only generators that refine the running joint-orbit partition;
    # the generated orbit partition is unchanged
    n_events = kept[0].scenario.num_inputs * kept[0].scenario.num_outcomes
    reduced: list[Relabeling] = []
    ids = np.arange(n_events)
    for g in kept:
        trial = _orbit_ids([_joint_event_perm(h) for h in reduced + [g]], n_events)
        if len(np.unique(trial)) != len(np.unique(ids)):
            reduced.append(g)
            ids = trial
    return reduced


UNIQUENESS_NOTE = (
    "valid only if the maximal violation is attained by a unique behavior"
)


@dataclass(frozen=True, eq=False)
class UniformityCertificate:
    """Orbit partition of events under verified symmetries, with query bits.

    ``joint_orbits[x * num_outcomes + a]`` and ``marginal_orbits`` hold orbit
    ids for joint and single-party events.  Certified bits at a query equal
    log2 of the smallest forced-equal class among the events at that query;
    every certificate is conditional on the uniqueness assumption recorded
    in ``assumption``.
    """

    functional: BellFunctional
    generators: tuple[Relabeling, ...]
    joint_orbits: np.ndarray
    marginal_orbits: np.ndarray
    query: JointQuery | LocalQuery | None = None
    assumes_unique_maximizer: bool = True
    assumption: str = UNIQUENESS_NOTE

    def __post_init__(self) -> None:
        self.joint_orbits.setflags(write=False)
        self.marginal_orbits.setflags(write=False)

    # -- class structure -------------------------------------------------------

    def joint_classes(self, settings: Sequence[int]) -> list[list[int]]:
        """Outcome-index classes forced equiprobable at a joint input."""
        sc = self.functional.scenario
        x_idx = sc.input_index(tuple(settings))
        ids = self.joint_orbits[
            x_idx * sc.num_outcomes : (x_idx + 1) * sc.num_outcomes
        ]
        classes: dict[int, list[int]] = {}
        for a, oid in enumerate(ids):
            classes.setdefault(int(oid), []).append(a)
        return [classes[k] for k in sorted(classes)]

    def marginal_classes(self, party: int, setting: int) -> list[list[int]]:
        """Outcome classes forced equiprobable for one party's setting."""
        sc = self.functional.scenario
        if not 0 <= party < sc.parties:
            raise ValidationError(f"party {party} out of range")
        if not 0 <= setting < sc.settings[party]:
            raise ValidationError(f"setting {setting} out of range for party {party}")
        offsets = _marginal_offsets(sc)
        base = offsets[party] + setting * sc.outcomes
        ids = self.marginal_orbits[base : base + sc.outcomes]
        classes: dict[int, list[int]] = {}
        for o, oid in enumerate(ids):
            classes.setdefault(int(oid), []).append(o)
        return [classes[k] for k in sorted(classes)]

    def certified_bits(self, query: JointQuery | LocalQuery) -> float:
        """Min-entropy bound at the query: log2 of the smallest event class."""
        if isinstance(query, JointQuery):
            classes = self.joint_classes(query.settings)
        elif isinstance(query, LocalQuery):
            classes = self.marginal_classes(query.party, query.setting)
        else:
            raise ValidationError(f"unsupported query {query!r}")
        return math.log2(min(len(cls) for cls in classes))


def _verified_generators(
    functional: BellFunctional, generators: Sequence[Relabeling]
) -> list[Relabeling]:
    for g in generators:
        if g.scenario != functional.scenario:
            raise ScenarioMismatchError("generator scenario does not match functional")
        if not is_symmetry(g, functional):
            raise ValidationError(
                "a supplied generator is not a symmetry of the functional"
            )
    return _reduce_generators(generators)


def certify_uniform(
    functional: BellFunctional,
    generators: Sequence[Relabeling],
    query: JointQuery | LocalQuery,
) -> UniformityCertificate:
    """Build a uniformity certificate from verified symmetry generators.

    Every generator is re-verified with the exact coefficient comparison;
    a non-symmetry raises :class:`ValidationError`.  The orbit partition is
    the breadth-first closure of the generated group acting on joint events
    and on single-party events.
    """
    sc = functional.scenario
    gens = _verified_generators(functional, generators)
    joint = _orbit_ids(
        [_joint_event_perm(g) for g in gens], sc.num_inputs * sc.num_outcomes
    )
    marg = _orbit_ids(
        [_marginal_event_perm(g) for g in gens], _marginal_offsets(sc)[-1]
    )
    cert = UniformityCertificate(
        functional=functional,
        generators=tuple(gens),
        joint_orbits=joint,
        marginal_orbits=marg,
        query=query,
    )
    cert.certified_bits(query)  # validates the query eagerly
    return cert


def certify_all(
    functional: BellFunctional, generators: Sequence[Relabeling]
) -> dict[JointQuery | LocalQuery, float]:
    """Certified bits for every joint input and every (party, setting)."""
    sc = functional.scenario
    first_query = JointQuery(sc.input_tuple(0))
    cert = certify_uniform(functional, generators, first_query)
    sweep: dict[JointQuery | LocalQuery, float] = {}
    for x_idx in range(sc.num_inputs):
        q = JointQuery(sc.input_tuple(x_idx))
        sweep[q] = cert.certified_bits(q)
    for i in range(sc.parties):
        for x in range(sc.settings[i]):
            q = LocalQuery(i, x)
            sweep[q] = cert.certified_bits(q)
    return sweep


def orbit_equality_violation(
    cert: UniformityCertificate, behavior: Behavior
) -> float:
    """Largest spread of probabilities within any forced-equal event class.

    Zero (up to numerical accuracy) whenever the behavior is invariant under
    the certificate's symmetry group; the soundness cross-check applies this
    to the optimizer's maximal-violation behavior.
    """
    sc = cert.functional.scenario
    if behavior.scenario != sc:
        raise ScenarioMismatchError("certificate and behavior scenarios differ")
    worst = 0.0
    flat = behavior.table.reshape(-1)
    ids = cert.joint_orbits
    for oid in np.unique(ids):
        probs = flat[ids == oid]
        worst = max(worst, float(probs.max() - probs.min()))
    offsets = _marginal_offsets(sc)
    marg_vals = np.empty(offsets[-1])
    from .scenario import marginal as _marginal

    for i in range(sc.parties):
        for x in range(sc.settings[i]):
            base = offsets[i] + x * sc.outcomes
            marg_vals[base : base + sc.outcomes] = _marginal(behavior, (i,), (x,))
    for oid in np.unique(cert.marginal_orbits):
        vals = marg_vals[cert.marginal_orbits == oid]
        worst = max(worst, float(vals.max() - vals.min()))
    return worst


# --- JSON serialization ------------------------------------------------------

def relabeling_to_dict(relabeling: Relabeling) -> dict:
    return {
        "party_perm": list(relabeling.party_perm) if relabeling.party_perm else None,
        "parties": [
            {
                "input_perm": list(relabeling.input_perms[i]),
                "output_perms": [list(p) for p in relabeling.output_perms[i]],
            }
            for i in range(relabeling.scenario.parties)
        ],
    }


def relabeling_from_dict(scenario: Scenario, data: Mapping) -> Relabeling:
    parties = data["parties"]
    if len(parties) != scenario.parties:
        raise ValidationError("relabeling party count does not match scenario")
    return Relabeling(
        scenario,
        tuple(tuple(p["input_perm"]) for p in parties),
        tuple(tuple(tuple(q) for q in p["output_perms"]) for p in parties),
        tuple(data["party_perm"]) if data.get("party_perm") else None,
    )


def certificate_to_dict(cert: UniformityCertificate) -> dict:
    sc = cert.functional.scenario
    joint = {}
    for x_idx in range(sc.num_inputs):
        x = sc.input_tuple(x_idx)
        key = "x=" + ",".join(str(s) for s in x)
        joint[key] = {
            "bits": cert.certified_bits(JointQuery(x)),
            "classes": cert.joint_classes(x),
        }
    local = {}
    for i in range(sc.parties):
        for x in range(sc.settings[i]):
            key = f"party={i},setting={x}"
            local[key] = {
                "bits": cert.certified_bits(LocalQuery(i, x)),
                "classes": cert.marginal_classes(i, x),
            }
    return {
        "functional": cert.functional.name,
        "generators": [relabeling_to_dict(g) for g in cert.generators],
        "joint": joint,
        "local": local,
        "assumes_unique_maximizer": cert.assumes_unique_maximizer,
        "assumption": cert.assumption,
    }
