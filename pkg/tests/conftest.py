import random

import pytest

from leximin_sarp import Instance, Site, Solution, generate_instance


def build_instance(depot, site_rows, num_teams, t_max, speed=1.0, name="t"):
    """Hand-built instance: site_rows are (x, y, bits, [service_time])."""
    sites = []
    for i, row in enumerate(site_rows, start=1):
        x, y, bits = row[0], row[1], row[2]
        svc = row[3] if len(row) > 3 else 0.0
        sites.append(Site(i, float(x), float(y), tuple(bits), float(svc)))
    return Instance(name, (float(depot[0]), float(depot[1])), sites, num_teams, t_max, speed)


@pytest.fixture
def line_instance():
    """Four sites on a line east of the depot; distances are integers."""
    return build_instance(
        (0, 0),
        [
            (10, 0, (1, 0)),
            (20, 0, (1, 1)),
            (30, 0, (0, 1)),
            (40, 0, (1, 0)),
        ],
        num_teams=2,
        t_max=100.0,
    )


@pytest.fixture
def rng():
    return random.Random(12345)


def random_solution(inst, seed):
    """A random feasible solution: shuffled greedy random insertions."""
    r = random.Random(seed)
    sol = Solution(inst)
    sites = list(range(1, inst.num_sites + 1))
    r.shuffle(sites)
    for v in sites:
        if not r.random() < 0.85:
            continue
        spots = []
        for k in range(inst.num_teams):
            for pos in range(len(sol.routes[k]) + 1):
                delta = sol.insertion_delta(v, k, pos)
                if sol.route_durations[k] + delta <= inst.t_max + 1e-9:
                    spots.append((k, pos))
        if spots:
            k, pos = spots[r.randrange(len(spots))]
            sol.insert(v, k, pos)
    return sol


def small_random_instance(seed, max_sites=8):
    r = random.Random(seed)
    n = r.randint(3, max_sites)
    m = r.randint(1, 4)
    k = r.randint(1, 3)
    t_max = r.choice([60.0, 90.0, 150.0, 250.0])
    layout = r.choice(["random", "random_clustered"])
    return generate_instance(n, m, k, t_max, layout=layout, seed=seed)
