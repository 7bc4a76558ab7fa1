"""Property-based checks against the exhaustive oracle."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helpers import brute_components, structure_violations
from steiner_intervals.core import Instance, Interval, components_after_removal, kappa
from steiner_intervals.cycle import split_qr, steiner_cycle
from steiner_intervals.greedy import steiner_path_cover
from steiner_intervals.oracle import (
    brute_cycle_exists,
    brute_pi_s,
    verify_cover_witness,
    verify_cycle,
    verify_cycle_witness,
)
from steiner_intervals.streaming import run_stream

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def instances(draw, n_max=10):
    n = draw(st.integers(1, n_max))
    spans = draw(st.lists(st.tuples(st.integers(0, 24), st.integers(0, 8)), min_size=n, max_size=n))
    # halves exercise the rational path and touching endpoints
    ivs = [Interval(f"v{k}", a / 2, (a + b) / 2) for k, (a, b) in enumerate(spans)]
    mask = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    terms = [iv.id for iv, keep in zip(ivs, mask) if keep] or [ivs[0].id]
    return Instance.build(ivs, terms)


@SETTINGS
@given(instances())
def test_cover_is_optimal_and_certified(inst):
    cover = steiner_path_cover(inst)
    assert len(cover.paths) == brute_pi_s(inst)
    assert verify_cover_witness(inst, len(cover.paths), cover.witness)
    assert structure_violations(inst, cover) == []


@SETTINGS
@given(instances())
def test_cycle_decision_is_exact(inst):
    out = steiner_cycle(inst)
    assert out.feasible == brute_cycle_exists(inst)
    if out.feasible:
        assert verify_cycle(inst, out.cycle)
    else:
        assert verify_cycle_witness(inst, out.witness)


@SETTINGS
@given(instances(n_max=25))
def test_stream_matches_offline(inst):
    offline = steiner_path_cover(inst)
    for known in (None, kappa(inst)):
        _, cover = run_stream(inst.intervals, inst.terminals, "cover", known)
        assert (cover.paths, cover.witness) == (offline.paths, offline.witness)


@SETTINGS
@given(instances(n_max=25))
def test_split_partitions_the_path(inst):
    path = steiner_path_cover(inst).paths[0]
    if len(path) < 2:
        return
    q, r = split_qr(path, inst)
    assert sorted(q + r) == sorted(path)
    for part in (q, r):
        assert all(inst.adjacent(inst.index[a], inst.index[b]) for a, b in zip(part, part[1:]))


@SETTINGS
@given(instances(), st.data())
def test_components_partition(inst, data):
    removed = set(data.draw(st.lists(st.sampled_from(inst.ids), max_size=len(inst))))
    comps = components_after_removal(inst, removed)
    assert sorted(map(sorted, comps)) == sorted(map(sorted, brute_components(inst, removed)))
    covered = set().union(*comps) if comps else set()
    assert covered == set(inst.ids) - removed
