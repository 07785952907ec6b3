import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from replisim.core import ValidationError, make_alphabet, make_task
from replisim.isotope import (
    Destination,
    ExchangeConfig,
    TagReport,
    run_tagged_assembly,
    separation_fraction,
)


def run(exchange_prob, a=1, n=10_000, enzyme_weight=0.5, seed=0, **kw):
    alpha = make_alphabet(a)
    task = make_task(alpha, n, seed=seed)
    return run_tagged_assembly(alpha, task, kw.pop("tagged_fraction", 1.0),
                               ExchangeConfig(exchange_prob, enzyme_weight), seed, **kw)


def check_conservation(report):
    ids = sorted(report.tag_locations)
    assert ids == list(range(2 * report.total_tagged_incorporations))
    smalls_apart = sum(
        report.tag_locations[i] != report.tag_locations[i + 1] for i in range(0, len(ids), 2)
    )
    assert smalls_apart == report.separated_count
    enzyme = Counter(loc[0] for loc in report.tag_locations.values())["enzyme"]
    assert enzyme == report.destinations[Destination.ENZYME_POOL]


def test_no_exchange_never_separates():
    report = run(0.0, a=4, n=2000, keep_trace=True, replicates=3)
    assert report.separated_count == 0
    assert separation_fraction(report) == 0.0
    check_conservation(report)


def test_full_exchange_always_separates():
    report = run(1.0, a=2, n=3000, keep_trace=True)
    assert report.separated_count == report.total_tagged_incorporations
    assert separation_fraction(report) == 1.0
    check_conservation(report)


def test_partial_exchange_binomial_bound():
    report = run(0.3)
    assert report.total_tagged_incorporations == 10_000
    sd = math.sqrt(0.3 * 0.7 / 10_000)
    assert abs(separation_fraction(report) - 0.3) <= 3 * sd


def test_enzyme_share_matches_mixing_weight():
    report = run(0.5, n=40_000, enzyme_weight=0.25, seed=2)
    sep = report.separated_count
    share = report.destinations[Destination.ENZYME_POOL] / sep
    assert abs(share - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / sep)


def test_only_tagged_base_type_is_counted():
    alpha = make_alphabet(4)
    task = make_task(alpha, 1000, seed=4)
    report = run_tagged_assembly(alpha, task, 1.0, ExchangeConfig(0.0), seed=1, tagged_base=2)
    assert report.total_tagged_incorporations == task.target.count(2)


def test_tagged_fraction_thins_incorporations():
    report = run(0.0, n=20_000, tagged_fraction=0.25, seed=6)
    assert abs(report.total_tagged_incorporations - 5000) <= 3 * math.sqrt(20_000 * 0.25 * 0.75)


def test_single_position_strand():
    report = run(1.0, n=1, enzyme_weight=0.0, keep_trace=True)
    assert report.tag_locations[1] == ("strand", 0, -1)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0, 1), st.floats(0, 1), st.integers(1, 4), st.integers(1, 300),
    st.integers(0, 2**32), st.integers(1, 3),
)
def test_conservation_everywhere(p, w, a, n, seed, reps):
    report = run(p, a=a, n=n, enzyme_weight=w, seed=seed, keep_trace=True, replicates=reps)
    assert sum(report.destinations.values()) == report.total_tagged_incorporations
    check_conservation(report)
    if p == 0.0:
        assert report.separated_count == 0


def test_deterministic():
    assert run(0.4, a=3, n=500, seed=9) == run(0.4, a=3, n=500, seed=9)


def test_separation_fraction_examples():
    d = dict.fromkeys(Destination, 0)
    for sep, total, expected in [(0, 100, 0.0), (100, 100, 1.0), (30, 100, 0.3)]:
        counts = {**d, Destination.SAME_BASE: total - sep, Destination.ENZYME_POOL: sep}
        assert separation_fraction(TagReport(total, sep, counts, 0)) == expected
    with pytest.raises(ValidationError):
        separation_fraction(TagReport(0, 0, d, 0))


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_bad_exchange_prob(p):
    with pytest.raises(ValidationError):
        ExchangeConfig(p)


def test_bad_tagged_fraction():
    with pytest.raises(ValidationError):
        run(0.1, tagged_fraction=0.0)
