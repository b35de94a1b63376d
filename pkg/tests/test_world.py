from __future__ import annotations

import json

import pytest

from conftest import WORLD_DIR, bundled_world
from sharenav.world import (
    Obstacle,
    ParseError,
    Pool,
    ValidationError,
    WorldModel,
    load_world,
    save_world,
    world_from_dict,
)


def test_minimal_world_is_valid():
    world = world_from_dict({
        "bounds": [0, 0, 10, 10],
        "start": {"x": 1, "y": 1, "theta": 0},
        "goal": [9, 9],
    })
    assert world.obstacles == ()
    assert world.pools == ()


def test_goal_inside_obstacle_is_rejected_by_name():
    with pytest.raises(ValidationError, match="boulder"):
        world_from_dict({
            "bounds": [0, 0, 10, 10],
            "start": {"x": 1, "y": 1, "theta": 0},
            "goal": [5, 5],
            "obstacles": [{"name": "boulder", "shape": "circle",
                           "center": [5, 5], "radius": 1.0}],
        })


def test_start_outside_bounds_is_rejected():
    with pytest.raises(ValidationError, match="start"):
        world_from_dict({
            "bounds": [0, 0, 10, 10],
            "start": {"x": -1, "y": 1, "theta": 0},
            "goal": [9, 9],
        })


def test_obstacle_outside_bounds_is_rejected():
    with pytest.raises(ValidationError, match="edge_tree"):
        WorldModel(bounds=(0, 0, 10, 10), start=(1, 1, 0), goal=(9, 9),
                   obstacles=(Obstacle(name="edge_tree", shape="circle",
                                       center=(10, 10), radius=1.0),))


def test_missing_key_is_a_parse_error():
    with pytest.raises(ParseError, match="goal"):
        world_from_dict({"bounds": [0, 0, 10, 10],
                         "start": {"x": 1, "y": 1, "theta": 0}})


def test_invalid_json_file(tmp_path):
    bad = tmp_path / "bad.world"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_world(bad)


def test_missing_file_raises_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_world(tmp_path / "nope.world")


def test_forest_fixture_loads_30_plus_entities_and_round_trips(tmp_path):
    src = WORLD_DIR / "forest.world"
    world = load_world(src)
    assert len(world.obstacles) + len(world.pools) >= 30
    out = tmp_path / "copy.world"
    save_world(world, out)
    assert json.loads(out.read_text()) == json.loads(src.read_text())


def test_all_bundled_worlds_round_trip(tmp_path):
    for name in ("open", "corridor", "forest", "slalom"):
        src = WORLD_DIR / f"{name}.world"
        world = bundled_world(name)
        out = tmp_path / f"{name}.world"
        save_world(world, out)
        assert json.loads(out.read_text()) == json.loads(src.read_text()), name


def test_clearance_sign_and_none():
    world = WorldModel(bounds=(0, 0, 10, 10), start=(1, 1, 0), goal=(9, 9),
                       obstacles=(Obstacle(name="rock", shape="circle",
                                           center=(5, 5), radius=1.0),))
    assert world.clearance(5, 7.0, robot_radius=0.35) == pytest.approx(1.0 - 0.35)
    assert world.clearance(5, 6.2, robot_radius=0.35) < 0
    empty = WorldModel(bounds=(0, 0, 10, 10), start=(1, 1, 0), goal=(9, 9))
    assert empty.clearance(5, 5, 0.35) is None


def test_polygon_distance_zero_inside():
    shed = Obstacle(name="shed", shape="polygon",
                    points=((2, 2), (4, 2), (4, 4), (2, 4)))
    assert shed.distance(3, 3) == 0.0
    assert shed.distance(5, 3) == pytest.approx(1.0)


def test_pool_intensity_profile():
    p = Pool(name="p", center=(0, 0), radius=1.0, intensity=2.0, fade=4.0)
    assert p.intensity_at(0.5, 0) == 2.0
    assert p.intensity_at(3.0, 0) == pytest.approx(2.0 * 0.5)
    assert p.intensity_at(6.0, 0) == 0.0
