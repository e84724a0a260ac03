import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from strip_forge.baselines import nfdh
from strip_forge.classify import Params
from strip_forge.cli import main
from strip_forge.cli import io
from strip_forge.cli.bench import bench, ratio_str
from strip_forge.cli.gen import generate
from strip_forge.cli.render import render_svg
from strip_forge.core import Instance
from strip_forge.generators import random_instance, rounded_case
from strip_forge.restructure import build_structure
from strip_forge.solver import Job

GOLDEN = Path(__file__).parent / "golden"
SMALL = Instance.from_dims(8, [(3, 4), (5, 2), (2, 1), (8, 1)])


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr().out
    return code, dict(line.split("=", 1) for line in out.splitlines() if "=" in line), out


def test_instance_round_trip():
    inst = random_instance(3, 12, 20)
    assert io.instance_from_dict(json.loads(io.dumps(io.instance_to_dict(inst)))) == inst


def test_packing_round_trip():
    pk = nfdh(SMALL)
    assert io.packing_from_dict(json.loads(io.dumps(io.packing_to_dict(pk)))) == pk


def test_jobs_round_trip():
    jobs = [Job("a", ((1, 4), (2, 3))), Job("b", ((3, 1),))]
    assert io.jobs_from_dict(json.loads(io.dumps(io.jobs_to_dict(5, jobs)))) == (5, jobs)


def test_hint_round_trip():
    part = build_structure(rounded_case(2)).to_partition()
    back = io.hint_from_dict(json.loads(io.dumps(io.hint_to_dict(part))))
    assert back.boxes == part.boxes and back.params == part.params


@pytest.mark.parametrize("doc", [
    {"schema": "strip-v1", "width": 0, "items": []},
    {"schema": "strip-v1", "width": 4, "items": [{"id": "a", "width": 1.5, "height": 1}]},
    {"schema": "strip-v1", "width": 4, "items": [{"id": "a", "width": 1, "height": 1}] * 2},
    {"schema": "pack-v1", "width": 4},
    {"schema": "hint-v1", "width": 4, "boxes": []},
])
def test_malformed_documents(doc):
    with pytest.raises(io.FormatError):
        io.LOADERS[doc["schema"]](doc)


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


def test_golden_svg_plain():
    assert render_svg(SMALL, nfdh(SMALL), scale=10) == (GOLDEN / "nfdh_plain.svg").read_text()


def test_golden_svg_classes():
    p = Params(F(1, 4), F(1, 4), F(1, 16), 16, f_exponent=2)
    svg = render_svg(SMALL, nfdh(SMALL), scale=5, params=p, height_rule=8)
    assert svg == (GOLDEN / "nfdh_classes.svg").read_text()


def test_ratio_string_is_exact():
    assert ratio_str(10, 3) == "3.333333" and ratio_str(2, 3) == "0.666667" and ratio_str(0, 0) == "1.000000"


def _write_instances(d):
    for seed in range(3):
        io.write(d / f"inst{seed}.json", io.instance_to_dict(random_instance(seed, 5, 6, hmax=4)))
    (d / "notes.json").write_text('{"schema": "other"}')


def test_bench_is_deterministic(tmp_path, monkeypatch):
    _write_instances(tmp_path)
    a = bench(tmp_path, ["nfdh", "ffdh", "exact"], timing=False)
    monkeypatch.setenv("STRIP_FORGE_THREADS", "3")
    b = bench(tmp_path, ["nfdh", "ffdh", "exact"], timing=False)
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "instance,algo,height,lower_bound,ratio,millis,status"
    assert len(lines) == 1 + 3 * 3
    assert all(line.endswith(",ok") for line in lines[1:])


def test_cli_pack_and_validate(tmp_path, capsys):
    src = tmp_path / "i.json"
    io.write(src, io.instance_to_dict(SMALL))
    code, kv, _ = run(capsys, "pack", src, "--algo", "ffdh", "--out", tmp_path / "p.json", "--svg", tmp_path / "p.svg")
    assert code == 0 and kv["height"] == "6" and kv["lower_bound"] == "4"
    assert (tmp_path / "p.svg").read_text().startswith("<svg")
    code, kv, _ = run(capsys, "validate", src, tmp_path / "p.json")
    assert code == 0 and kv["ok"] == "true"
    bad = io.packing_to_dict(nfdh(SMALL))
    bad["placements"][0]["x"] = 6
    io.write(tmp_path / "bad.json", bad)
    code, kv, _ = run(capsys, "validate", src, tmp_path / "bad.json")
    assert code == 2 and kv["ok"] == "false"


def test_cli_exit_codes(tmp_path, capsys):
    src = tmp_path / "i.json"
    io.write(src, io.instance_to_dict(Instance.from_dims(4, [(4, 4), (1, 1)])))
    assert run(capsys, "pack", src, "--algo", "steinberg", "--height", 2)[0] == 2
    assert run(capsys, "pack", src, "--algo", "nfdh", "--rotations")[0] == 2
    assert run(capsys, "pack", tmp_path / "missing.json")[0] == 1
    (tmp_path / "junk.json").write_text("{")
    assert run(capsys, "pack", tmp_path / "junk.json")[0] == 1
    assert run(capsys, "pack", src, "--algo", "nope")[0] == 1
    io.write(tmp_path / "big.json", io.instance_to_dict(Instance.from_dims(40, [(1, 1)] * 3)))
    assert run(capsys, "pack", tmp_path / "big.json", "--algo", "exact")[0] == 2


def test_cli_gen_is_deterministic(tmp_path, capsys):
    for profile in ("uniform", "tall-heavy", "grid", "structured"):
        a = generate(profile, 5, n=10, width=48)
        assert a == generate(profile, 5, n=10, width=48)
        assert io.instance_from_dict(a["instance"])
    code, kv, _ = run(capsys, "gen", "--profile", "structured", "--seed", 1, "--out", tmp_path / "s.json",
                      "--hint-out", tmp_path / "h.json", "--packing-out", tmp_path / "p.json")
    assert code == 0
    code, kv, _ = run(capsys, "pack", tmp_path / "s.json", "--algo", "structured", "--hint", tmp_path / "h.json")
    assert code == 0 and int(kv["height"]) >= int(kv["lower_bound"])
    code, kv, _ = run(capsys, "validate", tmp_path / "s.json", tmp_path / "p.json")
    assert kv["ok"] == "true"


def test_cli_render_and_mold(tmp_path, capsys):
    io.write(tmp_path / "i.json", io.instance_to_dict(SMALL))
    io.write(tmp_path / "p.json", io.packing_to_dict(nfdh(SMALL)))
    code, _, out = run(capsys, "render", tmp_path / "i.json", tmp_path / "p.json")
    assert code == 0 and out == (GOLDEN / "nfdh_plain.svg").read_text()
    io.write(tmp_path / "m.json", io.jobs_to_dict(2, [Job("a", ((1, 4), (2, 2))), Job("b", ((1, 3),))]))
    code, kv, _ = run(capsys, "mold", tmp_path / "m.json", "--exact")
    assert code == 0 and F(kv["tau"]) <= int(kv["opt"]) <= 2 * F(kv["tau"])
