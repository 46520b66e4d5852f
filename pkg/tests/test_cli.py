import json
from pathlib import Path

import numpy as np
import pytest

from framescale.cli import main
from framescale.frame import (Frame, ScalingWeights, apply_scaling, is_tight, load_frame,
                              mercedes_benz, save_frame)

DATA = Path(__file__).parent / "data"


@pytest.fixture
def frame_file(tmp_path):
    def write(f, name="f.json"):
        p = tmp_path / name
        save_frame(f, p)
        return str(p)
    return write


def test_gen(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["gen", "--n", "3", "--m", "7", "--seed", "4", "--out", str(out)]) == 0
    assert "frame bounds" in capsys.readouterr().out
    f = load_frame(out)
    assert (f.n, f.m) == (3, 7)
    out2 = tmp_path / "g2.json"
    main(["--seed", "4", "gen", "--n", "3", "--m", "7", "--out", str(out2)])
    assert out.read_text() == out2.read_text()


def test_gen_rejects_short_frame(tmp_path, capsys):
    assert main(["gen", "--n", "3", "--m", "2", "--out", str(tmp_path / "x.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_check_exit_codes(frame_file, mb, not_scalable, capsys):
    assert main(["check", frame_file(mb)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scalable"] is True
    assert main(["check", frame_file(not_scalable)]) == 1
    assert main(["check", "--method", "auglag", "--max-iters", "200",
                 frame_file(not_scalable)]) == 2
    assert main(["check", "/nonexistent.json"]) == 2


@pytest.mark.parametrize("method", ["lp", "maximin", "barrier", "auglag", "oracle"])
def test_check_methods(frame_file, mb, method, capsys):
    assert main(["check", "--method", method, frame_file(mb)]) == 0
    assert json.loads(capsys.readouterr().out)["method"] == method


def test_round_trip(tmp_path):
    fpath, wpath = tmp_path / "f.json", tmp_path / "w.json"
    assert main(["gen", "--n", "2", "--m", "12", "--seed", "3", "--out", str(fpath)]) == 0
    assert main(["scale", str(fpath), "--out", str(wpath)]) == 0
    doc = json.loads(wpath.read_text())
    assert set(doc) == {"m", "u", "method", "residual"}
    w = ScalingWeights.from_vector(doc["u"])
    assert is_tight(apply_scaling(load_frame(fpath), w), tol=1e-9)


def test_scale_not_scalable(frame_file, not_scalable, tmp_path):
    out = tmp_path / "w.json"
    assert main(["scale", frame_file(not_scalable), "--out", str(out)]) == 1
    assert not out.exists()


def test_trace(frame_file, mb, tmp_path):
    trace = tmp_path / "t.csv"
    assert main(["check", "--method", "auglag", "--trace", str(trace), frame_file(mb)]) == 0
    assert trace.read_text().startswith("iter,residual,lambda,objective\n")


def test_exp(tmp_path, capsys):
    assert main(["exp", "sparsity", "--n", "2", "--m", "4,6", "--trials", "5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "N,M,trials_total,trials_scalable,avg_retained" and len(out) == 3
    path = tmp_path / "p.csv"
    assert main(["exp", "proportion", "--n", "2", "--trials", "4", "--out", str(path)]) == 0
    assert len(path.read_text().splitlines()) == 15


def test_exp_deterministic(capsys):
    args = ["--seed", "9", "exp", "sparsity", "--n", "3", "--m", "9", "--trials", "8"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv", [["bogus"], ["exp", "bogus"], ["exp", "sparsity", "--n", "2,x",
                                                                   "--m", "4"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_plot_golden(tmp_path):
    out = tmp_path / "mb.svg"
    assert main(["plot", "r2", str(DATA / "mb_frame.json"), "--weights",
                 str(DATA / "mb_uniform_weights.json"), "--out", str(out)]) == 0
    text = out.read_text()
    assert text == (DATA / "mb_uniform_r2.svg").read_text()
    assert text.count('class="original"') == 3 and text.count('class="scaled"') == 3


def test_plot_svg_geometry(tmp_path):
    # scaled tips of the uniform Mercedes-Benz scaling lie at radius 160/sqrt(3)
    import re
    text = (DATA / "mb_uniform_r2.svg").read_text()
    tips = re.findall(r'class="scaled" x1="200" y1="200" x2="([\d.]+)" y2="([\d.]+)"', text)
    for x, y in tips:
        assert np.hypot(float(x) - 200, float(y) - 200) == pytest.approx(160 / np.sqrt(3), abs=1e-3)
    np.testing.assert_allclose(load_frame(DATA / "mb_frame.json").matrix, mercedes_benz().matrix)


def test_plot_rejects_r3(frame_file, tmp_path):
    assert main(["plot", "r2", frame_file(Frame(np.eye(3))), "--out",
                 str(tmp_path / "x.svg")]) == 2
