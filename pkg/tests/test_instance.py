import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leximin_sarp import (
    Instance,
    ParseError,
    Site,
    ValidationError,
    generate_instance,
    parse_instance,
    parse_instance_text,
    write_instance,
)
from conftest import build_instance

TEXT = """\
SARP demo 3 2 2 50 1
DEPOT 0 0
1 3 4 1 0
2 6 8 1 1
3 0 5 0 1 2.5
"""


def test_parse_basic_fields():
    inst = parse_instance_text(TEXT)
    assert inst.name == "demo"
    assert inst.num_sites == 3
    assert inst.num_characteristics == 2
    assert inst.num_teams == 2
    assert inst.t_max == 50.0
    assert inst.speed == 1.0
    assert inst.depot == (0.0, 0.0)
    assert inst.sites[2].service_time == 2.5
    assert inst.sites[0].service_time == 0.0


def test_travel_times_euclidean_over_speed_rounded():
    inst = parse_instance_text(TEXT)
    # depot -> (3,4) is distance 5
    assert inst.travel_time[0][1] == 5.0
    assert inst.travel_time[1][2] == 5.0  # (3,4) -> (6,8)
    fast = parse_instance_text(TEXT.replace("50 1", "50 2"))
    assert fast.travel_time[0][1] == 2.5


def test_travel_time_rounded_to_six_decimals():
    inst = build_instance((0, 0), [(1, 1, (1,))], 1, 10.0)
    assert inst.travel_time[0][1] == round(math.sqrt(2), 6)


def test_round_trip_write_parse(tmp_path):
    inst = generate_instance(7, 3, 2, 123.4, layout="random_clustered", seed=9, speed=2.0)
    path = tmp_path / "inst.txt"
    write_instance(inst, path)
    again = parse_instance(path)
    assert again == inst
    assert again.travel_time.tolist() == inst.travel_time.tolist()


def test_parse_error_carries_line_number():
    bad = TEXT.replace("1 3 4 1 0", "1 3 4 1 2")  # bit outside {0,1}
    with pytest.raises(ParseError) as err:
        parse_instance_text(bad)
    assert err.value.line == 3


@pytest.mark.parametrize(
    "mangle, line",
    [
        (lambda t: t.replace("SARP demo", "SARQ demo"), 1),
        (lambda t: t.replace("DEPOT 0 0", "DEPOT 0"), 2),
        (lambda t: t.replace("2 6 8 1 1", "9 6 8 1 1"), 4),  # id not contiguous
        (lambda t: t.replace("3 0 5 0 1 2.5", "3 0 x 0 1"), 5),
    ],
)
def test_parse_errors_are_located(mangle, line):
    with pytest.raises(ParseError) as err:
        parse_instance_text(mangle(TEXT))
    assert err.value.line == line


def test_missing_site_line_rejected():
    with pytest.raises(ParseError):
        parse_instance_text(TEXT.rsplit("\n", 2)[0] + "\n")


def test_every_site_needs_a_characteristic():
    bad = TEXT.replace("2 6 8 1 1", "2 6 8 0 0")
    with pytest.raises((ParseError, ValidationError)):
        parse_instance_text(bad)


def test_every_characteristic_needs_a_carrier():
    with pytest.raises((ParseError, ValidationError)):
        build_instance((0, 0), [(1, 0, (1, 0)), (2, 0, (1, 0))], 1, 10.0)


@pytest.mark.parametrize("teams,t_max,speed", [(0, 10.0, 1.0), (1, -1.0, 1.0), (1, 10.0, 0.0)])
def test_invalid_scalars_rejected(teams, t_max, speed):
    with pytest.raises(ValidationError):
        Instance("x", (0.0, 0.0), [Site(1, 1.0, 0.0, (1,))], teams, t_max, speed)


def test_duplicate_site_ids_rejected():
    with pytest.raises(ValidationError):
        Instance(
            "x",
            (0.0, 0.0),
            [Site(1, 1.0, 0.0, (1,)), Site(1, 2.0, 0.0, (1,))],
            1,
            10.0,
        )


def test_characteristic_totals_and_scales():
    inst = parse_instance_text(TEXT)
    assert inst.characteristic_totals == (2, 2)
    # lcm(2, 2) = 2, so each count scales by 1
    assert inst.ratio_scales == (1, 1)
    assert inst.chars_of(2) == (0, 1)


def test_generator_deterministic_and_in_bounds():
    a = generate_instance(10, 4, 2, 150.0, seed=3)
    b = generate_instance(10, 4, 2, 150.0, seed=3)
    assert a == b
    assert a.name == "r10-m4-k2-t150-s3"
    for s in a.sites:
        assert 0.0 <= s.x <= 100.0 and 0.0 <= s.y <= 100.0
        assert round(s.x, 2) == s.x and round(s.y, 2) == s.y
        assert any(s.characteristics)
    assert all(t >= 1 for t in a.characteristic_totals)
    assert a.depot == (50.0, 50.0)


def test_generator_layouts_differ():
    r = generate_instance(12, 3, 2, 150.0, layout="random", seed=5)
    c = generate_instance(12, 3, 2, 150.0, layout="random_clustered", seed=5)
    assert r.name.startswith("r12")
    assert c.name.startswith("rc12")
    assert [(s.x, s.y) for s in r.sites] != [(s.x, s.y) for s in c.sites]


def test_generator_rejects_unknown_layout():
    with pytest.raises(ValueError):
        generate_instance(5, 2, 1, 50.0, layout="hexgrid")


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 12), m=st.integers(1, 5))
def test_generator_always_valid(seed, n, m):
    inst = generate_instance(n, m, 2, 120.0, seed=seed)
    assert inst.num_sites == n
    assert inst.num_characteristics == m
    # validation already ran in the constructor; spot-check the matrix shape
    assert inst.travel_time.shape == (n + 1, n + 1)
    assert all(inst.travel_time[i][i] == 0.0 for i in range(n + 1))


def test_travel_matrix_is_write_protected():
    inst = generate_instance(4, 2, 1, 60.0, seed=0)
    with pytest.raises(ValueError):
        inst.travel_time[0][1] = 99.0
