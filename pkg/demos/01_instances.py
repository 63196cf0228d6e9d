"""
Building, generating, and round-tripping problem instances
===========================================================

An instance is a depot, a set of sites with binary characteristic flags,
a team count, and a per-route duration cap.  This script builds one by
hand, generates a bigger one, and shows the text format both use.
"""

import tempfile
from pathlib import Path

from leximin_sarp import Instance, Site, generate_instance, parse_instance, write_instance

# Hand-built: three sites around a depot at the origin.  Each row of flags
# says which characteristics the site's community carries.
inst = Instance(
    name="toy3",
    depot=(0.0, 0.0),
    sites=[
        Site(1, 4.0, 0.0, (1, 0, 1)),
        Site(2, 0.0, 3.0, (0, 1, 1)),
        Site(3, 5.0, 5.0, (1, 1, 0), service_time=0.5),
    ],
    num_teams=2,
    t_max=16.0,
)
print(f"{inst.name}: {inst.num_sites} sites, {inst.num_characteristics} characteristics, "
      f"{inst.num_teams} teams, cap {inst.t_max}")
print("carriers per characteristic:", inst.characteristic_totals)
print("travel time depot->site1:", inst.travel_time[0][1])

# Generated: coordinates on a 100x100 board, reproducible from the seed.
# The clustered layout mimics sites grouped into villages.
big = generate_instance(20, 6, 3, 150.0, "random_clustered", seed=42)
print(f"\ngenerated {big.name}: {big.num_sites} sites, totals {big.characteristic_totals}")

# Instances round-trip through a small text format.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "toy3.sarp"
    write_instance(inst, path)
    print("\nfile contents:")
    print(path.read_text(), end="")
    again = parse_instance(path)
    print("round-trip equal:", again == inst)
