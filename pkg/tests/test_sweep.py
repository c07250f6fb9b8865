import csv
import io
import json
import math

import pytest

from nonclassical.sweep import (
    PRESETS,
    SweepAxis,
    SweepConfig,
    evaluate_point,
    expand_preset,
    parse_number,
    render,
    run_sweep,
    spec_from_params,
)


def rows_of(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


@pytest.mark.parametrize("text, value", [
    ("1.5", 1.5), ("pi", math.pi), ("2pi", 2 * math.pi), ("pi/3", math.pi / 3),
    ("-pi/2", -math.pi / 2), ("0.5*pi", 0.5 * math.pi), (" 4 pi ", 4 * math.pi),
])
def test_parse_number(text, value):
    assert parse_number(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["pix", "abc", "pi3"])
def test_parse_number_rejects(text):
    with pytest.raises(ValueError):
        parse_number(text)


def test_axis_parse_and_values():
    ax = SweepAxis.parse("phi:0:2pi:5")
    assert ax.values()[-1] == pytest.approx(2 * math.pi)
    assert SweepAxis.parse("m:0:3:4").values() == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        SweepAxis.parse("m:0:1:3").values()


@pytest.mark.parametrize("text", ["q:0:1:3", "r:0:1", "r:0:1:1", "r:0:1:2.5"])
def test_axis_rejects(text):
    with pytest.raises(ValueError):
        SweepAxis.parse(text)


def test_spec_from_params_forms():
    polar = spec_from_params({"op": "sub", "m": 1, "alpha_mod": 2.0, "alpha_arg": math.pi / 2})
    assert polar.alpha == pytest.approx(2j)
    cart = spec_from_params({"alpha_re": 0.1, "alpha_im": -0.2, "r": 0.3})
    assert cart.alpha == 0.1 - 0.2j and cart.op.value == "add"
    with pytest.raises(ValueError):
        spec_from_params({"alpha_mod": 1.0, "alpha_re": 0.1})


def test_config_validation():
    ax = SweepAxis("r", 0, 1, 3)
    with pytest.raises(ValueError):
        SweepConfig("x", {}, ())
    with pytest.raises(ValueError):
        SweepConfig("x", {}, (ax, ax))
    with pytest.raises(ValueError):
        SweepConfig("x", {}, (ax,), quantity="entropy")


def test_two_axis_order_first_axis_outer():
    cfg = SweepConfig("t", {"op": "add"}, (SweepAxis("m", 0, 1, 2), SweepAxis("r", 0, 0.2, 3)))
    pts = cfg.points()
    assert [(p["m"], p["r"]) for p in pts] == [(0, 0.0), (0, 0.1), (0, 0.2), (1, 0.0), (1, 0.1), (1, 0.2)]


def test_degenerate_point_flagged():
    cfg = SweepConfig("t", {"op": "sub", "m": 1, "alpha_re": 0.0}, (SweepAxis("r", 0, 0.2, 3),))
    rows = run_sweep(cfg)
    assert [r["status"] for r in rows] == ["degenerate", "ok", "ok"]
    out = rows_of(render(cfg, rows))
    assert out[0]["D1"] == "" and out[1]["D1"] != ""


def test_convergence_failure_flagged():
    rows = evaluate_point(({"op": "add", "m": 2, "alpha_re": 0.3, "r": 0.3}, "volume",
                           {"max_levels": 1}, ("r",)))
    assert rows[0]["status"] == "no_convergence"


def test_render_csv_and_json():
    cfg = SweepConfig("t", {"op": "add", "m": 1, "alpha_re": 0.5}, (SweepAxis("r", 0, 0.4, 3),),
                      caption="demo")
    rows = run_sweep(cfg)
    text = render(cfg, rows)
    lines = text.splitlines()
    assert lines[0] == "# sweep=t quantity=witness" and lines[1] == "# demo"
    parsed = rows_of(text)
    assert list(parsed[0]) == cfg.columns()
    assert float(parsed[2]["sweep_r"]) == 0.4
    doc = json.loads(render(SweepConfig(cfg.name, cfg.template, cfg.axes, format="json"), rows))
    assert doc["columns"] == cfg.columns() and len(doc["rows"]) == 3


def test_parallel_output_identical():
    cfg = SweepConfig("t", {"op": "sub", "alpha_re": 0.4}, (SweepAxis("m", 0, 2, 3), SweepAxis("r", 0, 0.6, 4)))
    assert render(cfg, run_sweep(cfg, workers=1)) == render(cfg, run_sweep(cfg, workers=3))


def test_phi_two_periods_coincide():
    cfg = PRESETS["fig1c"]
    rows = [r for r in run_sweep(cfg) if r["m"] == 1]
    first = {round(r["sweep_phi"], 9): r for r in rows if r["sweep_phi"] < 2 * math.pi - 1e-9}
    for r in rows:
        if r["sweep_phi"] >= 2 * math.pi - 1e-9:
            twin = first.get(round(r["sweep_phi"] - 2 * math.pi, 9))
            if twin is not None:
                assert r["D1"] == twin["D1"] and r["D2"] == twin["D2"]


@pytest.mark.parametrize("name, count", [("fig1", 4), ("fig5a", 1), ("fig5", 4), ("fig9", 4), ("hos_pascs", 4)])
def test_expand_preset(name, count):
    assert len(expand_preset(name)) == count


def test_unknown_preset():
    with pytest.raises(ValueError):
        expand_preset("fig99")


@pytest.mark.parametrize("quantity, extra", [("klyshko", ["P0", "B10", "eta"]),
                                             ("volume", ["delta"]), ("wigner", ["x", "p", "W"])])
def test_columns_per_quantity(quantity, extra):
    cols = SweepConfig("t", {}, (SweepAxis("r", 0, 1, 2),), quantity=quantity).columns()
    assert set(extra) <= set(cols) and cols[-1] == "status"


def test_wigner_preset_rows():
    cfg = PRESETS["fig7"]
    small = SweepConfig(cfg.name, cfg.template, (SweepAxis("m", 0, 1, 2),), "wigner",
                        {**cfg.options, "nx": 3, "np": 3})
    rows = run_sweep(small)
    assert len(rows) == 18
    centre = [r for r in rows if r["x"] == 0 and r["p"] == 0]
    assert centre[0]["W"] > 0 > centre[1]["W"]
