import numpy as np
import pytest

from helpers import grid_centers, render_disks
from latticeorder.imgio import write_pgm
from latticeorder.lattice import NominalGridSpec, Point2, cloud_to_csv, gen_nominal_grid

FIXTURE_SIZE = 2000
FIXTURE_START = 280
FIXTURE_PITCH = 360
FIXTURE_RADIUS = 150
FIXTURE_N = 5


@pytest.fixture(scope="session")
def disk_grid_fixture(tmp_path_factory):
    """2000x2000 PGM of a 5x5 blurred disk grid with known centers.

    Returns (image_path, nominal_csv_path, centers) where centers is the list
    of true (x, y) disk centers.
    """
    root = tmp_path_factory.mktemp("diskgrid")
    centers = grid_centers(FIXTURE_START, FIXTURE_PITCH, FIXTURE_N)
    img = render_disks(FIXTURE_SIZE, centers, FIXTURE_RADIUS, fg=40, bg=200, blur_sigma=2.0)
    image_path = root / "grid.pgm"
    write_pgm(image_path, img)
    nominal = gen_nominal_grid(
        NominalGridSpec(
            rows=FIXTURE_N,
            cols=FIXTURE_N,
            pitch_x=FIXTURE_PITCH,
            pitch_y=FIXTURE_PITCH,
            datum=Point2(FIXTURE_START, FIXTURE_START),
        )
    )
    nominal_path = root / "nominal.csv"
    nominal_path.write_text(cloud_to_csv(nominal), encoding="utf-8")
    return image_path, nominal_path, centers


@pytest.fixture()
def rng():
    return np.random.default_rng(20240815)
