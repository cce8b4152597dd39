import json
import pathlib
import time

import numpy as np
import pytest

from posmaps import choi_map_walkthrough, cp_split, gallery, transpose_compose
from posmaps.linalg import schmidt_rank
from posmaps.schmidt import objective
from posmaps.walkthrough import uniform_product_vector

GOLDEN = json.loads((pathlib.Path(__file__).parent / "golden" / "choi3_walkthrough.json").read_text())


@pytest.fixture(scope="module")
def result():
    return choi_map_walkthrough()


def test_all_checks_pass(result):
    failed = [name for name, ok in result["checks"] if not ok]
    assert not failed
    assert result["ok"]


@pytest.mark.parametrize("key", ["phi", "t_phi"])
def test_orthogonality_and_residual(result, key):
    r = result[key]
    assert abs(r["overlap"]) <= 1e-12
    assert r["image_norm"] > 1e-6
    assert r["off_span_residual"] > 1e-6
    assert r["cp_objective_at_y"] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("key", ["phi", "t_phi"])
def test_against_golden(result, key):
    r, g = result[key], GOLDEN[key]
    tol = GOLDEN["tolerance"]
    assert r["c"] == pytest.approx(g["c"], abs=tol)
    assert r["image_norm"] == pytest.approx(g["image_norm"], abs=tol)
    assert r["witness_value"] == pytest.approx(g["witness_value"], abs=tol)


@pytest.mark.parametrize("key", ["phi", "t_phi"])
def test_witness_is_schmidt_rank_two(result, key):
    z = result[key]["witness"]
    assert z.k == 2
    assert schmidt_rank(z.dense, 3, 3) == 2
    assert np.linalg.norm(z.dense) == pytest.approx(1, abs=1e-12)


def test_c_values():
    # lambda_max of C_phi is 2; for t o phi it is the golden ratio
    assert cp_split(gallery("choi3")).c == pytest.approx(2, abs=1e-12)
    assert cp_split(transpose_compose(gallery("choi3"))).c == pytest.approx((1 + np.sqrt(5)) / 2, abs=1e-12)


@pytest.mark.parametrize("twist", [False, True])
def test_witness_value_grid_oracle(result, twist):
    phi = gallery("choi3")
    if twist:
        phi = transpose_compose(phi)
    A = cp_split(phi).phi_cp.choi
    z = result["t_phi" if twist else "phi"]["witness"]
    y = uniform_product_vector(3).dense
    x = np.kron(z.left[:, 1], z.right[:, 1])
    x /= np.linalg.norm(x)
    coarse = np.linspace(0, 1, 2001)
    vals = [objective(A, s * x + np.sqrt(1 - s * s) * y) for s in coarse]
    i = int(np.argmax(vals))
    fine = np.linspace(coarse[max(i - 1, 0)], coarse[min(i + 1, 2000)], 20001)
    best = max(objective(A, s * x + np.sqrt(1 - s * s) * y) for s in fine)
    assert objective(A, z) == pytest.approx(best, abs=1e-9)


def test_runtime():
    t0 = time.perf_counter()
    choi_map_walkthrough()
    assert time.perf_counter() - t0 < 5.0


def test_note_marks_external_input(result):
    assert "external" in result["note"]
    assert result["conclusion"] == "not 2-positive and not 2-copositive"
