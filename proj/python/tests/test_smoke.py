import json
import math
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np
import pytest

import swapschur as ss

SCHEMA = json.loads(
    (Path(__file__).resolve().parents[2] / "schemas" / "report.schema.json").read_text()
)


def test_sectors_and_multiplicity():
    assert ss.sectors(4) == [(0, 1, 2), (2, 3, 3), (4, 5, 1)]
    assert ss.multiplicity(200, 0) * 101 == math.comb(200, 100)
    assert sum(d * m for _, d, m in ss.sectors(31)) == 2**31


def test_chain_examples():
    assert ss.prob_error(4, 2, 2) == pytest.approx(4 / 9, abs=1e-15)
    assert ss.prob_error(4, 0, 3) == pytest.approx(0.25, abs=1e-15)
    assert ss.t_star(4, 0)["value"] == pytest.approx(3.0)
    assert ss.p_star(10, 0) == Fraction(1, 3)
    assert ss.detect_prob(5, 1) == Fraction(2, 5)
    assert ss.required_T(2, 0.5) == 5
    value, in_regime = ss.final_bound(100, 1000)
    assert in_regime and value == pytest.approx(100 * math.exp(-5))


def test_purification_examples():
    assert ss.f_opt(4, 0.5) == pytest.approx(0.8203125, abs=1e-12)
    curve = ss.fidelity_curve(4, 0.5, 10)
    assert curve["f"][0] == pytest.approx(0.75)
    assert curve["f"][10] == pytest.approx(0.819093173677793, abs=1e-12)
    row = ss.childs_comparison(0.5, 0.01)
    assert row["n_ours"] == pytest.approx(100.0)


def test_dense_schur_channel():
    rho = ss.depolarized_product(2, 0.5)
    weights = {two_j: np.trace(block).real for two_j, block in ss.schur_channel(rho)}
    assert weights[0] == pytest.approx(0.1875)
    assert weights[2] == pytest.approx(0.8125)
    branches = ss.run_protocol(ss.depolarized_product(4, 0.5), 3)
    assert sum(np.trace(b).real for b in branches) == pytest.approx(1.0)


def test_non_invariant_input_rejected():
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    with pytest.raises(ss.NotPermutationInvariant):
        ss.run_protocol(rho, 1)
    assert np.allclose(ss.twirl(rho)[2, 2], 0.5)


def test_seeded_monte_carlo_is_reproducible():
    a = ss.mc_fidelity(3, 0.5, 5, 200, 42)
    b = ss.mc_fidelity(3, 0.5, 5, 200, 42)
    assert a == b
    assert ss.sample_chain(20, 2, 40, 300, 1) == ss.sample_chain(20, 2, 40, 300, 1)


@pytest.mark.parametrize(
    "args",
    [
        ["sectors", "--n", "5"],
        ["error-curve", "--n", "6", "--tmax", "20", "--mc", "--trials", "100", "--seed", "3"],
        ["tstar", "--n", "12"],
        ["purify", "--n", "10", "--p", "0.3", "--tmax", "50"],
        ["verify", "--n", "3", "--seed", "1"],
        ["compare-childs"],
    ],
)
def test_cli_json_validates_against_schema(args):
    code, out, err = ss.run_cli(args + ["--format", "json"])
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == args[0]
    assert all(set(row) == set(doc["columns"]) for row in doc["rows"])


def test_cli_exit_codes():
    assert ss.run_cli(["sectors", "--n", "0"])[0] == 2
    assert ss.run_cli(["verify", "--n", "3", "--seed", "1", "--tamper"])[0] == 1
