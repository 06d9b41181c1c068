import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wgroupoid.building import (
    building_to_wgroupoid,
    difference_set_plane,
    gl_building,
    rank2_building,
    thin_building,
)
from wgroupoid.coxeter import CoxeterMatrix, CoxeterSystem
from wgroupoid.quotient import (
    quotient,
    regular_action,
    singer_shift_action,
    trivial_action,
)


@pytest.fixture(scope="session")
def fano_building():
    return rank2_building(difference_set_plane({0, 1, 3}, 7))


@pytest.fixture(scope="session")
def pg13_building():
    return rank2_building(difference_set_plane({0, 1, 3, 9}, 13))


@pytest.fixture(scope="session")
def fano_singer_quotient(fano_building):
    return quotient(singer_shift_action(fano_building, 7))


@pytest.fixture(scope="session")
def pg13_singer_quotient(pg13_building):
    return quotient(singer_shift_action(pg13_building, 13))


@pytest.fixture(scope="session")
def gl32():
    return gl_building(3, 2)


@pytest.fixture(scope="session")
def gl32_quotient(gl32):
    _, action = gl32
    return quotient(action)


@pytest.fixture(scope="session")
def thin_a2():
    return thin_building(CoxeterSystem(CoxeterMatrix.i2(3)))


@pytest.fixture(scope="session")
def lemma_corpus(fano_building, pg13_building, fano_singer_quotient,
                 pg13_singer_quotient, gl32_quotient, thin_a2):
    """Named W-groupoids for the consequence suite.  Strictness recorded
    per member; the GL(3,2) universal cover is exercised separately."""
    from wgroupoid.covering import universal_cover

    thin_i24 = thin_building(CoxeterSystem(CoxeterMatrix.i2(4)))
    members = {
        "thin-A2": (building_to_wgroupoid(thin_a2), True),
        "thin-I2(4)": (building_to_wgroupoid(thin_i24), True),
        "fano-building": (building_to_wgroupoid(fano_building), True),
        "pg13-building": (building_to_wgroupoid(pg13_building), True),
        "fano-singer-quotient": (fano_singer_quotient.wgroupoid, True),
        "pg13-singer-quotient": (pg13_singer_quotient.wgroupoid, True),
        "gl32-quotient": (gl32_quotient.wgroupoid, False),
        "regular-A2-quotient": (quotient(regular_action(thin_a2)).wgroupoid, True),
        "trivial-fano-quotient": (quotient(trivial_action(fano_building)).wgroupoid, True),
        "fano-singer-cover": (
            universal_cover(fano_singer_quotient.wgroupoid, fano_singer_quotient.orbit_reps[0])[0],
            True,
        ),
        "pg13-singer-cover": (
            universal_cover(pg13_singer_quotient.wgroupoid, pg13_singer_quotient.orbit_reps[0])[0],
            True,
        ),
    }
    return members
